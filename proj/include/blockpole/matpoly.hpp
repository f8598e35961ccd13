#pragma once

#include "blockpole/types.hpp"

#include <vector>

namespace blockpole {

// Monic matrix polynomial D(lambda) = I*lambda^l + A_1*lambda^(l-1) + ... + A_l
// with m x m coefficient blocks.  coeff[0] is the (identity) leading block.
struct MatrixPoly {
  std::vector<Mat> coeff;

  int order() const { return coeff.empty() ? 0 : static_cast<int>(coeff[0].rows()); }
  int degree() const { return static_cast<int>(coeff.size()) - 1; }

  // Builds a monic polynomial from the trailing coefficients A_1..A_l.
  static MatrixPoly monic(std::vector<Mat> tail);
  void validate() const;
};

enum class Side { Right, Left };
enum class SolventForm { Diagonal, Controller, Observer };

const char* to_string(Side s);
const char* to_string(SolventForm f);
SolventForm solvent_form_from_string(const std::string& name);

// A certified complete set of solvents for some target spectrum.
struct SolventSet {
  std::vector<Mat> solvents;
  Side side = Side::Right;
  double vandermonde_cond = 0.0;
};

CMat eval_scalar(const MatrixPoly& p, Complex lambda);

// Right evaluation A_0 X^l + A_1 X^(l-1) + ... + A_l; zero iff X is a right solvent.
Mat eval_right(const MatrixPoly& p, const Mat& x);

// Left evaluation X^l A_0 + X^(l-1) A_1 + ... + A_l; zero iff X is a left solvent.
Mat eval_left(const MatrixPoly& p, const Mat& x);

// Eigenvalues of the l*m x l*m block companion matrix (the roots of det D(lambda)).
CVec latent_roots(const MatrixPoly& p);

// Builds the real solvent P*Lambda*P^-1 (right) or Q^-1*Lambda*Q (left) from an
// eigenpair list.  Complex eigenvalues must come in conjugate pairs with
// conjugate vectors so the product is real.
Mat solvent_from_eigenpairs(const CVec& eigenvalues, const CMat& vectors,
                            Side side = Side::Right);

// Canonical solvent realizations of a conjugate-closed spectrum:
// diagonal -> real modal form; controller -> bottom-row companion;
// observer -> transpose of the controller form.
Mat canonical_solvent(const CVec& eigenvalues, SolventForm form);

// Block Vandermonde: block row i holds R_j^i for each solvent R_j.
Mat block_vandermonde(const std::vector<Mat>& solvents);

// Verifies spectrum union, pairwise disjointness, and Vandermonde conditioning;
// returns the certified set or throws with every violated condition listed.
SolventSet certify_complete_set(std::vector<Mat> solvents, const CVec& target_spectrum,
                                Side side = Side::Right, double match_tol = 1e-6,
                                double cond_cap = 1e12);

// Reconstructs the monic polynomial annihilated on the right by every solvent:
// [D_l ... D_1] * V_R = -[R_1^l ... R_l^l], solved as a linear system.
MatrixPoly poly_from_right_solvents(const SolventSet& set);

// Left counterpart: row i of the stacked system is
// [L_i^(l-1) ... L_i I] * [D_1; ...; D_l] = -L_i^l.
MatrixPoly poly_from_left_solvents(const SolventSet& set);

}  // namespace blockpole
