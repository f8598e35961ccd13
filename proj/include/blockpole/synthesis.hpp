#pragma once

#include "blockpole/matpoly.hpp"
#include "blockpole/statespace.hpp"
#include "blockpole/types.hpp"

#include <vector>

namespace blockpole {

// Result of the two-degree-of-freedom design  u = K_FF r - K_FB x.
struct TwoDofGains {
  Mat K_FB;
  Mat K_FF;
  SolventForm form = SolventForm::Diagonal;
  Side side = Side::Right;
  std::vector<std::vector<int>> partition;  // cells of indices into the spectrum
  CVec designed_spectrum;
  double placement_error = 0.0;  // worst matched eigenvalue distance, verified <= 1e-6
};

struct FeedforwardReport {
  bool exists = false;  // DC gain has full row rank, so K_FF achieves exact tracking
  int rank = 0;
  int required = 0;
};

// State feedback placing the closed-loop spectrum at the latent roots of `desired`.
// Verifies the achieved spectrum to 1e-6 and fails loudly otherwise.
Mat feedback_gain(const StateSpace& sys, const MatrixPoly& desired,
                  double* placement_error = nullptr);

FeedforwardReport feedforward_exists(const StateSpace& sys, const Mat& k_fb);

// Pseudoinverse of the closed-loop DC gain; exact tracking iff that gain has
// full row rank (reported through `exact_tracking` when non-null).
Mat feedforward_gain(const StateSpace& sys, const Mat& k_fb,
                     bool* exact_tracking = nullptr);

// Full pipeline: spectrum partition -> solvent set -> certification ->
// coefficient reconstruction -> block controller form -> K_FB, K_FF.
// An empty partition means contiguous cells of m eigenvalues each.
TwoDofGains design_2dof(const StateSpace& sys, const CVec& desired_spectrum,
                        SolventForm form, Side side = Side::Right,
                        std::vector<std::vector<int>> partition = {});

}  // namespace blockpole
