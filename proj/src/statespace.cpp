#include "blockpole/statespace.hpp"

#include "blockpole/util.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <limits>

namespace blockpole {

namespace {

int numeric_rank(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return 0;
  const double thresh = std::max(m.rows(), m.cols()) *
                        std::numeric_limits<double>::epsilon() * s(0);
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thresh) ++r;
  return r;
}

Mat controllability_matrix(const StateSpace& sys, int l) {
  const int n = sys.n();
  const int m = sys.m();
  Mat wc(n, l * m);
  Mat ab = sys.B;
  for (int i = 0; i < l; ++i) {
    wc.middleCols(i * m, m) = ab;
    ab = sys.A * ab;
  }
  return wc;
}

}  // namespace

void StateSpace::validate() const {
  if (A.rows() == 0 || A.rows() != A.cols())
    throw_input("system", "A must be square and nonempty");
  if (B.rows() != A.rows() || B.cols() == 0)
    throw_input("system", "B must have as many rows as A and at least one column");
  if (C.cols() != A.rows() || C.rows() == 0)
    throw_input("system", "C must have as many columns as A and at least one row");
  if (D.rows() != C.rows() || D.cols() != B.cols())
    throw_input("system", "D must be p x m");
  if (!A.allFinite() || !B.allFinite() || !C.allFinite() || !D.allFinite())
    throw_input("system", "system matrices contain non-finite entries");
}

int block_controllability_index(const StateSpace& sys) {
  sys.validate();
  const int n = sys.n();
  const int m = sys.m();
  if (n % m != 0)
    throw_input("block-controllability",
                "state dimension " + std::to_string(n) +
                    " is not a multiple of the input dimension " + std::to_string(m));
  const int l = n / m;
  Mat wc = controllability_matrix(sys, l);
  if (numeric_rank(wc) < n)
    throw_input("block-controllability",
                "controllability matrix [B, AB, ..., A^(l-1)B] is rank deficient; the "
                "system is not block controllable of index " +
                    std::to_string(l));
  return l;
}

BlockControllerForm to_block_controller_form(const StateSpace& sys) {
  const int l = block_controllability_index(sys);
  const int n = sys.n();
  const int m = sys.m();

  Mat wc = controllability_matrix(sys, l);
  // last block row of W_c^-1:  T_cl = E_l^T W_c^-1, so W_c^T T_cl^T = E_l
  Mat sel = Mat::Zero(n, m);
  sel.bottomRows(m).setIdentity();
  Eigen::PartialPivLU<Mat> wct(wc.transpose());
  Mat tcl = wct.solve(sel).transpose();

  Mat tc(n, n);
  Mat row = tcl;
  for (int i = 0; i < l; ++i) {
    tc.middleRows(i * m, m) = row;
    row = row * sys.A;
  }

  Eigen::PartialPivLU<Mat> tct(tc.transpose());
  Mat ac = tct.solve((tc * sys.A).transpose()).transpose();
  Mat cc = tct.solve(sys.C.transpose()).transpose();
  Mat bc = tc * sys.B;

  BlockControllerForm f;
  f.T_c = std::move(tc);
  f.A_c = std::move(ac);
  f.B_c = std::move(bc);
  f.C_c = std::move(cc);
  f.l = l;
  f.coeff_blocks.resize(static_cast<size_t>(l));
  for (int j = 0; j < l; ++j)
    f.coeff_blocks[static_cast<size_t>(l - 1 - j)] =
        -f.A_c.block(n - m, j * m, m, m);
  f.output_blocks.resize(static_cast<size_t>(l));
  for (int i = 0; i < l; ++i)
    f.output_blocks[static_cast<size_t>(i)] = f.C_c.middleCols(i * m, m);
  return f;
}

Rmfd rmfd(const StateSpace& sys) {
  BlockControllerForm f = to_block_controller_form(sys);
  Rmfd r;
  std::vector<Mat> tail = f.coeff_blocks;  // A_1..A_l, descending after the monic lead
  r.D_R = MatrixPoly::monic(std::move(tail));
  r.N_R = std::move(f.output_blocks);
  return r;
}

CMat transfer_at(const StateSpace& sys, Complex s) {
  sys.validate();
  CVec poles = spectrum_of(sys.A);
  for (int i = 0; i < poles.size(); ++i)
    if (std::abs(s - poles(i)) < 1e-10)
      throw_input("transfer", "evaluation point " + fmt_complex(s) +
                                  " coincides with a system pole");
  const int n = sys.n();
  CMat resolvent = (s * CMat::Identity(n, n) - sys.A.cast<Complex>());
  CMat x = resolvent.partialPivLu().solve(sys.B.cast<Complex>());
  return sys.C.cast<Complex>() * x + sys.D.cast<Complex>();
}

Eigenstructure eigenstructure(const Mat& a) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw_input("eigenstructure", "matrix must be square and nonempty");
  Vec d;
  Eigen::EigenSolver<Mat> es(balance(a, &d));
  if (es.info() != Eigen::Success)
    throw_numeric("eigenstructure", "eigendecomposition failed to converge");
  Eigenstructure e;
  e.values = es.eigenvalues();
  // Vectors of D^-1 A D map back through D.
  e.V = d.cast<Complex>().asDiagonal() * es.eigenvectors();
  for (int j = 0; j < e.V.cols(); ++j) e.V.col(j) /= e.V.col(j).norm();
  Eigen::JacobiSVD<CMat> svd(e.V);
  const auto& sv = svd.singularValues();
  e.condV = sv(sv.size() - 1) > 0
                ? sv(0) / sv(sv.size() - 1)
                : std::numeric_limits<double>::infinity();
  e.T = e.V.fullPivLu().solve(CMat::Identity(a.rows(), a.cols()));
  return e;
}

}  // namespace blockpole
