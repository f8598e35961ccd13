#include "blockpole/synthesis.hpp"

#include "blockpole/util.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <sstream>

namespace blockpole {

namespace {

Mat pinv(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double thresh = std::max(m.rows(), m.cols()) *
                        std::numeric_limits<double>::epsilon() *
                        (s.size() ? s(0) : 0.0);
  Vec sinv = Vec::Zero(s.size());
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thresh) sinv(i) = 1.0 / s(i);
  return svd.matrixV() * sinv.asDiagonal() * svd.matrixU().transpose();
}

int rank_of(const Mat& m) {
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

// Closed-loop DC gain  G(0) = -(C - D K_FB)(A - B K_FB)^-1 B + D.
Mat dc_gain(const StateSpace& sys, const Mat& k_fb) {
  Mat acl = sys.A - sys.B * k_fb;
  Eigen::FullPivLU<Mat> lu(acl);
  if (!lu.isInvertible())
    throw_numeric("feedforward",
                  "closed loop has a pole at the origin; DC gain is undefined");
  Mat x = lu.solve(sys.B);
  return -(sys.C - sys.D * k_fb) * x + sys.D;
}

std::vector<std::vector<int>> default_partition(int n, int m) {
  std::vector<std::vector<int>> cells(static_cast<size_t>(n / m));
  for (int i = 0; i < n; ++i) cells[static_cast<size_t>(i / m)].push_back(i);
  return cells;
}

void validate_partition(const std::vector<std::vector<int>>& cells, int n, int m) {
  if (static_cast<int>(cells.size()) != n / m)
    throw_input("design", "partition must have exactly " + std::to_string(n / m) +
                              " cells (one per solvent)");
  std::vector<char> seen(static_cast<size_t>(n), 0);
  for (const auto& cell : cells) {
    if (static_cast<int>(cell.size()) != m)
      throw_input("design",
                  "every partition cell must hold " + std::to_string(m) +
                      " eigenvalues");
    for (int idx : cell) {
      if (idx < 0 || idx >= n)
        throw_input("design", "partition index " + std::to_string(idx) +
                                  " out of range");
      if (seen[static_cast<size_t>(idx)])
        throw_input("design",
                    "partition index " + std::to_string(idx) + " repeated");
      seen[static_cast<size_t>(idx)] = 1;
    }
  }
}

// One solvent per cell. Companion cells alternate between bottom-row and
// top-row convention so the block Vandermonde of the set stays nonsingular;
// observer cells are the transposes of the controller ones.
std::vector<Mat> build_solvents(const CVec& spectrum,
                                const std::vector<std::vector<int>>& cells,
                                SolventForm form) {
  std::vector<Mat> out;
  out.reserve(cells.size());
  for (size_t k = 0; k < cells.size(); ++k) {
    CVec cell(static_cast<Eigen::Index>(cells[k].size()));
    for (size_t i = 0; i < cells[k].size(); ++i)
      cell(static_cast<Eigen::Index>(i)) = spectrum(cells[k][i]);
    if (!conjugate_closed(cell))
      throw_input("design",
                  "partition cell " + std::to_string(k + 1) +
                      " splits a complex-conjugate pair");
    Mat s;
    switch (form) {
      case SolventForm::Diagonal:
        s = canonical_solvent(cell, SolventForm::Diagonal);
        break;
      case SolventForm::Controller:
        s = canonical_solvent(cell, SolventForm::Controller);
        if (k % 2 == 1) s = s.reverse().eval();
        break;
      case SolventForm::Observer:
        s = canonical_solvent(cell, SolventForm::Controller);
        if (k % 2 == 1) s = s.reverse().eval();
        s.transposeInPlace();
        break;
    }
    out.push_back(std::move(s));
  }
  return out;
}

Mat feedback_from_bcf(const BlockControllerForm& f, const MatrixPoly& desired) {
  const int l = f.l;
  const int m = static_cast<int>(f.coeff_blocks[0].rows());
  if (desired.degree() != l || desired.order() != m)
    throw_input("feedback", "desired polynomial must have degree " +
                                std::to_string(l) + " and order " +
                                std::to_string(m));
  // K_c = [K_cl, ..., K_c1] with K_ci = D_i - A_i.
  Mat kc(m, l * m);
  for (int i = 1; i <= l; ++i)
    kc.middleCols((l - i) * m, m) =
        desired.coeff[static_cast<size_t>(i)] -
        f.coeff_blocks[static_cast<size_t>(i - 1)];
  return kc * f.T_c;
}

void verify_placement(const StateSpace& sys, const Mat& k_fb, const CVec& target,
                      double* placement_error) {
  double worst = spectral_distance(target, spectrum_of(sys.A - sys.B * k_fb));
  if (placement_error) *placement_error = worst;
  if (!(worst <= 1e-6)) {
    std::ostringstream os;
    os << "achieved closed-loop spectrum deviates from the target by " << fmt(worst, 4)
       << " (tolerance 1e-06)";
    throw_numeric("feedback", os.str());
  }
}

}  // namespace

Mat feedback_gain(const StateSpace& sys, const MatrixPoly& desired,
                  double* placement_error) {
  BlockControllerForm f = to_block_controller_form(sys);
  Mat k_fb = feedback_from_bcf(f, desired);
  verify_placement(sys, k_fb, latent_roots(desired), placement_error);
  return k_fb;
}

FeedforwardReport feedforward_exists(const StateSpace& sys, const Mat& k_fb) {
  sys.validate();
  if (k_fb.rows() != sys.m() || k_fb.cols() != sys.n())
    throw_input("feedforward", "feedback gain must be m x n");
  Mat g = dc_gain(sys, k_fb);
  FeedforwardReport r;
  r.rank = rank_of(g);
  r.required = sys.p();
  r.exists = r.rank == r.required;
  return r;
}

Mat feedforward_gain(const StateSpace& sys, const Mat& k_fb, bool* exact_tracking) {
  sys.validate();
  if (k_fb.rows() != sys.m() || k_fb.cols() != sys.n())
    throw_input("feedforward", "feedback gain must be m x n");
  Mat g = dc_gain(sys, k_fb);
  if (exact_tracking) *exact_tracking = rank_of(g) == sys.p();
  return pinv(g);
}

TwoDofGains design_2dof(const StateSpace& sys, const CVec& desired_spectrum,
                        SolventForm form, Side side,
                        std::vector<std::vector<int>> partition) {
  sys.validate();
  const int n = sys.n();
  const int m = sys.m();
  if (desired_spectrum.size() != n)
    throw_input("design", "desired spectrum must list n = " + std::to_string(n) +
                              " eigenvalues");
  if (!conjugate_closed(desired_spectrum))
    throw_input("design", "desired spectrum is not closed under conjugation");
  if (n % m != 0)
    throw_input("design", "state dimension must be a multiple of the input dimension");
  if (partition.empty()) partition = default_partition(n, m);
  validate_partition(partition, n, m);

  std::vector<Mat> solvents = build_solvents(desired_spectrum, partition, form);
  SolventSet set = certify_complete_set(std::move(solvents), desired_spectrum, side);
  MatrixPoly d_d = set.side == Side::Right ? poly_from_right_solvents(set)
                                           : poly_from_left_solvents(set);

  BlockControllerForm f = to_block_controller_form(sys);

  TwoDofGains g;
  g.form = form;
  g.side = side;
  g.partition = std::move(partition);
  g.designed_spectrum = desired_spectrum;
  g.K_FB = feedback_from_bcf(f, d_d);
  verify_placement(sys, g.K_FB, desired_spectrum, &g.placement_error);
  g.K_FF = feedforward_gain(sys, g.K_FB);
  return g;
}

}  // namespace blockpole
