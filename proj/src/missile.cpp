#include "blockpole/missile.hpp"

#include "blockpole/util.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace blockpole {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cubic(const std::array<double, 4>& c, double a) {
  return ((c[0] * a + c[1]) * a + c[2]) * a + c[3];
}

Mat printed_a() {
  Mat a(6, 6);
  a << -0.0037, 1, 0, 0, 0, 0,
      -1.1462, 0, 0, 0, 0, 0,
      0, 0, -0.0044, -1, 0.1745, 0.0121,
      0, 0, 0.2770, 0, 0, 0,
      0, 0, 33.9063, 0, 0, 0,
      0, 0, 0, 0, 1, 0;
  return a;
}

Mat printed_b() {
  Mat b(6, 3);
  b << -0.0019, 0, 0,
      -2.3384, 0, 0,
      0, 0.0017, 0,
      0, -2.0219, 0,
      0, 0, -37.1216,
      0, 0, 0;
  return b;
}

Mat output_map() {
  Mat c = Mat::Zero(3, 6);
  c(0, 0) = 1;  // angle of attack
  c(1, 2) = 1;  // sideslip
  c(2, 5) = 1;  // roll angle
  return c;
}

double max_real(const CVec& v) {
  double r = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < v.size(); ++i) r = std::max(r, v(i).real());
  return r;
}

}  // namespace

MissileParams MissileParams::have_dash_ii() {
  MissileParams p;
  p.gravity = 32.174;
  p.mass = 9.89;
  p.force_coeff = 0.1534;
  p.moment_coeff = 0.0959;
  p.sound_speed = 968.0;
  p.air_density = 5.124e-4;
  p.thrust = 389.0;
  p.ixx = 1.1913;
  p.iyy = 100.5139;
  p.izz = 100.5749;
  p.velocity = 2662.0;
  p.trim_alpha_deg = 10.0;
  p.mach = 2.75;
  return p;
}

AeroTables AeroTables::have_dash_ii() {
  AeroTables t;
  t.cz1 = {-0.0015, 0.0125, -0.5052, 0.0429};
  t.cz2 = {0.0006, -0.0138, 0.1230, -0.0191};
  t.cm1 = {-0.0055, 0.2131, -2.7419, -0.0381};
  t.cm2 = {0.0014, -0.0623, 0.8715, -0.4041};
  t.cy_beta = -0.21;
  t.cl_beta = 0.116;
  t.cn_beta = 0.08;
  t.force_input = Mat(3, 3);
  t.force_input << 0.04, 0, 0,
      0, 0, 0.08,
      -0.09, 0, 0;
  t.moment_input = Mat(3, 3);
  t.moment_input << 0, -0.127, 0,
      -0.675, 0, 0,
      0, 0, -0.594;
  return t;
}

std::pair<double, double> aero_coeffs(const AeroTables& aero, double alpha_deg,
                                      double mach) {
  const double cz = cubic(aero.cz1, alpha_deg) + cubic(aero.cz2, alpha_deg) * mach;
  const double cm = cubic(aero.cm1, alpha_deg) + cubic(aero.cm2, alpha_deg) * mach;
  return {cz, cm};
}

Vec MissileState::vec() const {
  Vec x(6);
  x << alpha_deg, pitch_rate, beta_deg, yaw_rate, roll_rate, roll_angle;
  return x;
}

MissileState MissileState::from(const Vec& x) {
  if (x.size() != 6) throw_input("missile", "state must have 6 entries");
  MissileState s;
  s.alpha_deg = x(0);
  s.pitch_rate = x(1);
  s.beta_deg = x(2);
  s.yaw_rate = x(3);
  s.roll_rate = x(4);
  s.roll_angle = x(5);
  return s;
}

Vec trim_state(const MissileParams& params) {
  Vec x = Vec::Zero(6);
  x(0) = params.trim_alpha_deg;
  return x;
}

Vec nonlinear_dynamics(const MissileParams& params, const AeroTables& aero,
                       const Vec& x, const Vec& u) {
  if (x.size() != 6) throw_input("missile", "state must have 6 entries");
  if (u.size() != 3) throw_input("missile", "input must have 3 entries");
  const double al = x(0), q = x(1), be = x(2), r = x(3), p = x(4), ph = x(5);
  const double de = u(0), dr = u(1), da = u(2);

  const auto [cz0, cm0] = aero_coeffs(aero, al, params.mach);
  const double cy0 = aero.cy_beta * be;
  const double cl0 = aero.cl_beta * be;
  const double cn0 = aero.cn_beta * be;

  // control columns follow the tables: (elevator, aileron, rudder)
  Vec surf(3);
  surf << de, da, dr;
  const double z_in = aero.force_input.row(2).dot(surf);
  const double y_in = aero.force_input.row(1).dot(surf);
  const double l_in = aero.moment_input.row(0).dot(surf);
  const double m_in = aero.moment_input.row(1).dot(surf);
  const double n_in = aero.moment_input.row(2).dot(surf);

  const double kf = params.kf();
  const double g_v = params.gravity / params.velocity;

  Vec dx(6);
  // incidence angles live in degrees; the roll-rate couplings convert them
  dx(0) = q - p * (be * kDegToRad) + kf * (cz0 + z_in) + g_v * std::cos(ph);
  dx(1) = ((params.izz - params.ixx) / params.iyy) * p * r + params.kmy() * (cm0 + m_in);
  dx(2) = -r + p * (al * kDegToRad) + kf * (cy0 + y_in) + g_v * std::sin(ph);
  dx(3) = ((params.ixx - params.iyy) / params.izz) * p * q + params.kmz() * (cn0 + n_in);
  dx(4) = ((params.iyy - params.izz) / params.ixx) * q * r + params.kmx() * (cl0 + l_in);
  dx(5) = p;
  return dx;
}

StateSpace linearize(const MissileParams& params, const AeroTables& aero) {
  const double kf = params.kf();
  const double a_eval = params.trim_alpha_deg * kDegToRad;
  const double h = 1e-5;
  const auto [czp, cmp] = aero_coeffs(aero, a_eval + h, params.mach);
  const auto [czm, cmm] = aero_coeffs(aero, a_eval - h, params.mach);
  const double dcz = (czp - czm) / (2 * h);
  const double dcm = (cmp - cmm) / (2 * h);

  StateSpace s;
  s.A = Mat::Zero(6, 6);
  s.A(0, 0) = kf * dcz;
  s.A(0, 1) = 1;
  s.A(1, 0) = params.kmy() * dcm;
  s.A(2, 2) = kf * aero.cy_beta;
  s.A(2, 3) = -1;
  s.A(2, 4) = params.trim_alpha_deg * kDegToRad;
  s.A(2, 5) = params.gravity / params.velocity;
  s.A(3, 2) = params.kmz() * aero.cn_beta;
  s.A(4, 2) = params.kmx() * aero.cl_beta;
  s.A(5, 4) = 1;

  const Mat& fu = aero.force_input;
  const Mat& mu = aero.moment_input;
  s.B = Mat::Zero(6, 3);
  // model input order (elevator, rudder, aileron); tables (elevator, aileron, rudder)
  s.B.row(0) = kf * Eigen::RowVector3d(fu(2, 0), fu(2, 2), fu(2, 1));
  s.B.row(1) = params.kmy() * Eigen::RowVector3d(mu(1, 0), mu(1, 2), mu(1, 1));
  s.B.row(2) = kf * Eigen::RowVector3d(fu(1, 0), fu(1, 2), fu(1, 1));
  s.B.row(3) = params.kmz() * Eigen::RowVector3d(mu(2, 0), mu(2, 2), mu(2, 1));
  s.B.row(4) = params.kmx() * Eigen::RowVector3d(mu(0, 0), mu(0, 2), mu(0, 1));

  s.C = output_map();
  s.D = Mat::Zero(3, 3);
  return s;
}

StateSpace builtin_linear_model() {
  StateSpace s;
  s.A = printed_a();
  s.B = printed_b();
  s.C = output_map();
  s.D = Mat::Zero(3, 3);
  return s;
}

CVec desired_poles() {
  CVec v(6);
  v << Complex(-4.9, 7.35), Complex(-4.9, -7.35), Complex(-17.1, 0),
      Complex(-5.25, 0), Complex(-7.5, 0), Complex(-10.9, 0);
  return v;
}

ReferenceGains reference_gains(SolventForm form) {
  Mat k_fb(3, 6), k_ff_tab(3, 3);
  switch (form) {
    case SolventForm::Diagonal:
      k_fb << -15.4640, -5.2726, -26.8577, -3.5605, 0.0, 4.6460,
          -18.2492, 3.4630, 9.8098, -5.0280, 0.0056, -1.6785,
          0, 0, -0.9134, 0.0, -0.7543, -5.0211;
      k_ff_tab << 15.9689, 26.8727, -4.6890,
          18.2589, -9.9680, 1.7393,
          0.0, 0.0, 5.0211;
      break;
    case SolventForm::Controller:
      k_fb << 745.2977, -8.8717, -171.8956, -899.1852, 0.0352, 90.1430,
          -0.0012, 0.4276, 0.3576, 0.0025, 0.0326, -0.0863,
          2464.8502, -3.7787, 1188.3972, 2693.9081, -0.8410, -394.5275;
      k_ff_tab << -744.7829, 168.1091, -79.2751,
          0.0, -0.4946, 0.0863,
          2464.8608, -1177.9664, 361.9679;
      break;
    case SolventForm::Observer:
      k_fb << -2469.6252, -445.9117, -494.3040, 2857.7694, -63.5247, -101.8413,
          -115.2148, -21.8781, 63.2212, 133.3742, -3.1904, -19.8310,
          786.8736, 138.3562, 368.2749, -909.6800, 19.5929, -4.5283;
      k_ff_tab << 2471.3579, 506.3381, 67.3011,
          115.2758, -62.7965, 18.2190,
          -787.2592, -373.0190, 15.5231;
      break;
  }
  // tabulated law is u = -K_FF r - K_FB x; flip into u = K_FF r - K_FB x
  return ReferenceGains{k_fb, -k_ff_tab};
}

Mat reference_perturbation() {
  Mat da(6, 6);
  da << 0.0069, 0.0251, 0.0047, 0.0531, 0.0100, 0.0093,
      0.0256, 0.0090, 0.0046, 0.0197, 0.0038, 0.0403,
      0.0195, 0.0186, 0.0084, 0.0010, 0.0074, 0.0084,
      0.0164, 0.0108, 0.0142, 0.0242, 0.0184, 0.0258,
      0.0072, 0.0184, 0.0043, 0.0138, 0.0204, 0.0247,
      0.0165, 0.0106, 0.0119, 0.0123, 0.0273, 0.0256;
  return da;
}

CaseStudyReport case_study(bool replay, double horizon, double dt) {
  CaseStudyReport rep;
  rep.model = builtin_linear_model();
  rep.targets = desired_poles();
  rep.perturbation = reference_perturbation();
  rep.reference = Vec::Ones(3);

  for (SolventForm form :
       {SolventForm::Diagonal, SolventForm::Controller, SolventForm::Observer}) {
    FormReport fr;
    fr.form = form;
    fr.replayed = replay;
    if (replay) {
      ReferenceGains g = reference_gains(form);
      fr.K_FB = g.K_FB;
      fr.K_FF = g.K_FF;
      fr.placement_error = spectral_distance(
          rep.targets, spectrum_of(rep.model.A - rep.model.B * fr.K_FB));
    } else {
      TwoDofGains g = design_2dof(rep.model, rep.targets, form);
      fr.K_FB = g.K_FB;
      fr.K_FF = g.K_FF;
      fr.placement_error = g.placement_error;
    }
    fr.kfb_norms = matrix_norms(fr.K_FB);
    fr.kff_norms = matrix_norms(fr.K_FF);

    const Mat acl = rep.model.A - rep.model.B * fr.K_FB;
    fr.stable = max_real(spectrum_of(acl)) < 0;
    if (!fr.stable)
      fr.notes.push_back("closed loop is unstable with these gains");
    if (max_real(spectrum_of(acl + rep.perturbation)) >= 0)
      fr.notes.push_back(
          "perturbed closed loop is unstable; steady-state tracking figures are "
          "formal only");

    try {
      fr.sens = eigen_sensitivities(acl);
      fr.sens_ok = true;
    } catch (const Error& e) {
      fr.notes.push_back(std::string("sensitivities unavailable: ") + e.what());
    }
    try {
      fr.stab = stability_measures(acl);
      fr.stab_ok = true;
    } catch (const Error& e) {
      fr.notes.push_back(std::string("stability measures unavailable: ") + e.what());
    }
    try {
      fr.shift = perturbed_spectrum(acl, rep.perturbation);
      fr.shift_ok = true;
    } catch (const Error& e) {
      fr.notes.push_back(std::string("spectrum shift unavailable: ") + e.what());
    }
    try {
      fr.terr = tracking_error(rep.model, fr.K_FB, fr.K_FF, rep.perturbation,
                               rep.reference);
      fr.terr_ok = true;
    } catch (const Error& e) {
      fr.notes.push_back(std::string("tracking error unavailable: ") + e.what());
    }
    try {
      fr.traj = step_response(rep.model, fr.K_FB, fr.K_FF, rep.reference, horizon, dt);
      fr.traj_ok = true;
      if (fr.traj.diverged)
        fr.notes.push_back("step response diverged before the horizon");
      fr.specs.resize(3);
      fr.specs_ok.assign(3, false);
      const char* names[] = {"alpha", "beta", "phi"};
      for (int j = 0; j < 3; ++j) {
        try {
          fr.specs[static_cast<size_t>(j)] = time_specs(fr.traj, j);
          fr.specs_ok[static_cast<size_t>(j)] = true;
        } catch (const Error& e) {
          fr.notes.push_back(std::string(names[j]) +
                             " figures unavailable: " + e.what());
        }
      }
    } catch (const Error& e) {
      fr.notes.push_back(std::string("step response unavailable: ") + e.what());
    }
    rep.forms.push_back(std::move(fr));
  }
  return rep;
}

}  // namespace blockpole
