#pragma once

#include "blockpole/statespace.hpp"
#include "blockpole/types.hpp"

namespace blockpole {

struct NormReport {
  double one = 0.0;
  double two = 0.0;
  double infinity = 0.0;
  double frobenius = 0.0;
};

// Wilkinson condition numbers s_i = ||v_i|| ||t_i|| of each eigenvalue.
struct SensitivityReport {
  CVec eigenvalues;
  Vec s;
  double condV = 0.0;
  double normV = 0.0;
};

// Stability robustness measures of a Hurwitz matrix:
//   m1 = min over frequency of the smallest singular value of (A - jwI),
//   m2 = |Re lambda| of the least-damped eigenvalue divided by cond(V),
//   m3 = min over eigenvalues of |Re lambda_i| / s_i.
struct StabilityMeasures {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m1_argmin_omega = 0.0;
};

struct SpectrumShift {
  CVec old_values;
  CVec new_values;       // matched pairwise to old_values
  Vec relative_changes;  // |delta lambda_i| / |lambda_i|
};

// Steady-state tracking error of  u = K_FF r - K_FB x  under a plant
// perturbation A -> A + dA: the exact value, a first-order estimate, and a
// norm bound on ||e||.
struct TrackingError {
  Vec exact;
  Vec first_order;
  double bound = 0.0;
};

NormReport matrix_norms(const Mat& m);

SensitivityReport eigen_sensitivities(const Mat& a);

StabilityMeasures stability_measures(const Mat& a, bool require_stable = true);

SpectrumShift perturbed_spectrum(const Mat& a, const Mat& da);

TrackingError tracking_error(const StateSpace& sys, const Mat& k_fb, const Mat& k_ff,
                             const Mat& da, const Vec& r);

}  // namespace blockpole
