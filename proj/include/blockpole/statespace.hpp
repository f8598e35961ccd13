#pragma once

#include "blockpole/matpoly.hpp"
#include "blockpole/types.hpp"

#include <vector>

namespace blockpole {

// Linear time-invariant system  x' = Ax + Bu,  y = Cx + Du.
struct StateSpace {
  Mat A, B, C, D;

  int n() const { return static_cast<int>(A.rows()); }
  int m() const { return static_cast<int>(B.cols()); }
  int p() const { return static_cast<int>(C.rows()); }

  void validate() const;
};

// Similarity transform to block controller form and everything read off it.
struct BlockControllerForm {
  Mat T_c;   // state transform, x_c = T_c x
  Mat A_c;   // block companion
  Mat B_c;   // [0; ...; 0; I]
  Mat C_c;
  int l = 0;                       // controllability index, n = l*m
  std::vector<Mat> coeff_blocks;   // A_1..A_l of the denominator polynomial
  std::vector<Mat> output_blocks;  // N_1..N_l, numerator in ascending powers
};

// Right matrix-fraction description  G(s) = N_R(s) D_R(s)^-1.
struct Rmfd {
  MatrixPoly D_R;
  std::vector<Mat> N_R;  // ascending: N_R(s) = sum N[i] s^i
};

// Eigenvalues with unit right eigenvectors (columns of V) and left rows T = V^-1.
struct Eigenstructure {
  CVec values;
  CMat V;
  CMat T;
  double condV = 0.0;
};

// l with n == l*m and W_c = [B, AB, ..., A^(l-1) B] full rank; Input error otherwise.
int block_controllability_index(const StateSpace& sys);

BlockControllerForm to_block_controller_form(const StateSpace& sys);

Rmfd rmfd(const StateSpace& sys);

// C (sI - A)^-1 B + D; rejects evaluation within 1e-10 of a pole.
CMat transfer_at(const StateSpace& sys, Complex s);

Eigenstructure eigenstructure(const Mat& a);

}  // namespace blockpole
