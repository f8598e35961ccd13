#pragma once

#include "blockpole/statespace.hpp"
#include "blockpole/types.hpp"

namespace blockpole {

// Sampled closed-loop response; one row per sample.
struct Trajectory {
  Vec times;
  Mat states;   // (N+1) x n
  Mat outputs;  // (N+1) x p
  Mat inputs;   // (N+1) x m
  Vec reference;
  double dt = 0.0;
  bool diverged = false;
};

// Step-response figures for one output channel. Overshoot and undershoot are
// reported only when the excursion clears a 1e-6 relative floor; when the
// response settles at zero against a nonzero reference, percentages and bands
// are taken relative to the reference instead and flagged as such.
struct TimeSpecs {
  double percent_overshoot = 0.0;
  double percent_undershoot = 0.0;
  double settling_time = 0.0;  // last exit of the 2% band, interpolated
  double rise_time = 0.0;      // 10% to 90% of the final value, interpolated
  double final_value = 0.0;    // mean of the last 2% of samples
  bool overshoot_defined = false;
  bool undershoot_defined = false;
  bool relative_to_reference = false;
};

// Response of  x' = (A - B K_FB + dA) x + B K_FF r,  u = K_FF r - K_FB x,
// stepped exactly (matrix exponential of the held system). A divergence
// (non-finite state or a magnitude beyond 1e12) truncates the record and sets
// the flag.
Trajectory step_response(const StateSpace& sys, const Mat& k_fb, const Mat& k_ff,
                         const Vec& r, double horizon, double dt,
                         const Mat* da = nullptr, const Vec* x0 = nullptr);

// Requires a settled trajectory: every sample in the last tenth of the horizon
// must lie inside the 2% band, otherwise the horizon was too short.
TimeSpecs time_specs(const Trajectory& traj, int output_index);

}  // namespace blockpole
