#pragma once

#include "blockpole/robustness.hpp"
#include "blockpole/simulate.hpp"
#include "blockpole/synthesis.hpp"
#include "blockpole/types.hpp"

#include <array>
#include <string>
#include <vector>

namespace blockpole {

// HAVE DASH II BTT airframe constants (imperial units).
struct MissileParams {
  double gravity = 0.0;        // ft/s^2
  double mass = 0.0;           // slug
  double force_coeff = 0.0;    // k_f
  double moment_coeff = 0.0;   // k_m
  double sound_speed = 0.0;    // ft/s
  double air_density = 0.0;    // slug/ft^3
  double thrust = 0.0;         // lbf
  double ixx = 0.0, iyy = 0.0, izz = 0.0;  // slug ft^2
  double velocity = 0.0;       // ft/s
  double trim_alpha_deg = 0.0;
  double mach = 0.0;

  static MissileParams have_dash_ii();

  double kf() const { return force_coeff * air_density * velocity / mass; }
  double kmx() const { return moment_coeff * air_density * velocity * velocity / ixx; }
  double kmy() const { return moment_coeff * air_density * velocity * velocity / iyy; }
  double kmz() const { return moment_coeff * air_density * velocity * velocity / izz; }
};

// Static aerodynamic model: cubic fits in angle of attack (degrees), each
// paired with a Mach-proportional correction, plus constant control
// effectiveness tables whose columns follow the surface order
// (elevator, aileron, rudder).
struct AeroTables {
  std::array<double, 4> cz1{}, cz2{};  // descending cubic coefficients
  std::array<double, 4> cm1{}, cm2{};
  double cy_beta = 0.0;  // sideslip derivatives, per degree
  double cl_beta = 0.0;
  double cn_beta = 0.0;
  Mat force_input;   // rows: x, y, z force inputs
  Mat moment_input;  // rows: rolling, pitching, yawing moment inputs

  static AeroTables have_dash_ii();
};

// (C_z0, C_m0) at an angle of attack (degrees) and Mach number.
std::pair<double, double> aero_coeffs(const AeroTables& aero, double alpha_deg,
                                      double mach);

// State layout used throughout: (alpha deg, q rad/s, beta deg, r rad/s,
// p rad/s, phi rad); inputs (elevator, rudder, aileron), radians.
struct MissileState {
  double alpha_deg = 0.0;
  double pitch_rate = 0.0;
  double beta_deg = 0.0;
  double yaw_rate = 0.0;
  double roll_rate = 0.0;
  double roll_angle = 0.0;

  Vec vec() const;
  static MissileState from(const Vec& x);
};

Vec trim_state(const MissileParams& params);

// Six-state rigid-body model with the static aero fits; angles of attack and
// sideslip carried in degrees, their kinematic roll couplings taken in radians.
Vec nonlinear_dynamics(const MissileParams& params, const AeroTables& aero,
                       const Vec& x, const Vec& u);

// Jacobian pair of the model about the trim incidence. The aero slopes are
// evaluated at the trim angle expressed in radians, matching the published
// linear model this design is benchmarked against.
StateSpace linearize(const MissileParams& params, const AeroTables& aero);

// The published linear model, digits as printed.
StateSpace builtin_linear_model();

// Closed-loop pole set used for the benchmark design.
CVec desired_poles();

// Published gain fixtures, converted to the convention u = K_FF r - K_FB x
// (the source tabulates the feedforward term with the opposite sign).
struct ReferenceGains {
  Mat K_FB;
  Mat K_FF;
};
ReferenceGains reference_gains(SolventForm form);

// Published random perturbation of the closed-loop state matrix.
Mat reference_perturbation();

// Everything computed for one solvent form of the case study. Analysis stages
// that cannot run (unstable loop, diverged response) leave their ok-flag down
// and explain themselves in `notes`.
struct FormReport {
  SolventForm form = SolventForm::Diagonal;
  bool replayed = false;
  Mat K_FB;
  Mat K_FF;
  double placement_error = 0.0;
  NormReport kfb_norms;
  NormReport kff_norms;
  bool stable = false;

  SensitivityReport sens;
  bool sens_ok = false;
  StabilityMeasures stab;
  bool stab_ok = false;
  SpectrumShift shift;
  bool shift_ok = false;
  TrackingError terr;
  bool terr_ok = false;
  Trajectory traj;
  bool traj_ok = false;
  std::vector<TimeSpecs> specs;
  std::vector<bool> specs_ok;

  std::vector<std::string> notes;
};

struct CaseStudyReport {
  StateSpace model;
  CVec targets;
  Mat perturbation;
  Vec reference;
  std::vector<FormReport> forms;
};

// Benchmark study over the three solvent forms: synthesize (or replay the
// published gains), then norms, sensitivities, stability measures, spectrum
// shift under the published perturbation, tracking error, and the unit-step
// response with its time specifications.
CaseStudyReport case_study(bool replay = false, double horizon = 3.0,
                           double dt = 1e-3);

}  // namespace blockpole
