#include "blockpole/robustness.hpp"

#include "blockpole/util.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace blockpole {

namespace {

double sigma_min_shifted(const Mat& a, double omega) {
  CMat m = a.cast<Complex>();
  for (int i = 0; i < m.rows(); ++i) m(i, i) -= Complex(0.0, omega);
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(m.rows() - 1);
}

// Golden-section refinement of a bracketed minimum.
double golden_min(const Mat& a, double lo, double hi, double tol, double* arg) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = sigma_min_shifted(a, x1);
  double f2 = sigma_min_shifted(a, x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = sigma_min_shifted(a, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = sigma_min_shifted(a, x2);
    }
  }
  double xm = 0.5 * (lo + hi);
  double fm = sigma_min_shifted(a, xm);
  if (f1 < fm) {
    fm = f1;
    xm = x1;
  }
  if (f2 < fm) {
    fm = f2;
    xm = x2;
  }
  if (arg) *arg = xm;
  return fm;
}

}  // namespace

NormReport matrix_norms(const Mat& m) {
  if (m.size() == 0) throw_input("norms", "empty matrix");
  if (!m.allFinite()) throw_input("norms", "matrix contains non-finite entries");
  NormReport r;
  r.one = m.cwiseAbs().colwise().sum().maxCoeff();
  r.infinity = m.cwiseAbs().rowwise().sum().maxCoeff();
  r.frobenius = m.norm();
  Eigen::JacobiSVD<Mat> svd(m);
  r.two = svd.singularValues()(0);
  return r;
}

SensitivityReport eigen_sensitivities(const Mat& a) {
  Eigenstructure e = eigenstructure(a);
  if (e.condV > 1e10)
    throw_numeric("sensitivities",
                  "eigenvector matrix has condition " + fmt(e.condV, 4) +
                      "; the matrix is numerically defective");
  SensitivityReport r;
  r.eigenvalues = e.values;
  r.condV = e.condV;
  Eigen::JacobiSVD<CMat> svd(e.V);
  r.normV = svd.singularValues()(0);
  r.s = Vec(e.values.size());
  for (int i = 0; i < e.values.size(); ++i)
    r.s(i) = e.V.col(i).norm() * e.T.row(i).norm();
  return r;
}

StabilityMeasures stability_measures(const Mat& a, bool require_stable) {
  SensitivityReport sens = eigen_sensitivities(a);
  const auto& lam = sens.eigenvalues;
  double max_abs = 0.0;
  double min_re = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lam.size(); ++i) {
    max_abs = std::max(max_abs, std::abs(lam(i)));
    min_re = std::min(min_re, -lam(i).real());
  }
  if (require_stable && !(min_re > 0))
    throw_input("stability-measures",
                "matrix is not Hurwitz; stability margins are undefined");

  StabilityMeasures out;

  // m1: global minimum of sigma_min(A - jwI) over w >= 0, located on a
  // half-linear, half-logarithmic grid and polished by golden section.
  const double wmax = max_abs > 0 ? 10.0 * max_abs : 1.0;
  std::vector<double> grid;
  grid.reserve(2000);
  for (int i = 0; i < 1000; ++i) grid.push_back(wmax * i / 999.0);
  const double lo_exp = std::log10(wmax) - 6.0;
  for (int i = 0; i < 1000; ++i)
    grid.push_back(std::pow(10.0, lo_exp + 6.0 * i / 999.0));
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> val(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) val[i] = sigma_min_shifted(a, grid[i]);

  struct Candidate {
    double v, w;
    size_t i;
  };
  std::vector<Candidate> cands;
  for (size_t i = 0; i < grid.size(); ++i) {
    const bool left_ok = i == 0 || val[i] <= val[i - 1];
    const bool right_ok = i + 1 == grid.size() || val[i] <= val[i + 1];
    if (left_ok && right_ok) cands.push_back({val[i], grid[i], i});
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a_, const Candidate& b_) { return a_.v < b_.v; });

  double best = std::numeric_limits<double>::infinity();
  double best_w = 0.0;
  std::vector<double> taken;
  for (const auto& c : cands) {
    if (taken.size() >= 3) break;
    bool close = false;
    for (double w : taken)
      if (std::abs(w - c.w) < 1e-3 * wmax) close = true;
    if (close) continue;
    taken.push_back(c.w);
    const double lo = c.i == 0 ? grid[0] : grid[c.i - 1];
    const double hi = c.i + 1 == grid.size() ? grid.back() : grid[c.i + 1];
    double warg = c.w;
    double v = golden_min(a, lo, hi, 1e-6, &warg);
    if (v < best) {
      best = v;
      best_w = warg;
    }
  }
  out.m1 = best;
  out.m1_argmin_omega = best_w;

  // m2: departure of the least-damped eigenvalue scaled by the eigenbasis condition
  int idx = 0;
  double least = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lam.size(); ++i) {
    if (std::abs(lam(i).real()) < least) {
      least = std::abs(lam(i).real());
      idx = i;
    }
  }
  out.m2 = std::abs(lam(idx).real()) / sens.condV;

  // m3: per-eigenvalue margin through the Wilkinson numbers
  double m3 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < lam.size(); ++i)
    m3 = std::min(m3, std::abs(lam(i).real()) / sens.s(i));
  out.m3 = m3;
  return out;
}

SpectrumShift perturbed_spectrum(const Mat& a, const Mat& da) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw_input("perturbed-spectrum", "matrix must be square and nonempty");
  if (da.rows() != a.rows() || da.cols() != a.cols())
    throw_input("perturbed-spectrum", "perturbation must match the matrix size");
  SpectrumShift out;
  out.old_values = spectrum_of(a);
  CVec moved = spectrum_of(a + da);
  std::vector<int> match = greedy_match(out.old_values, moved);
  out.new_values = CVec(moved.size());
  out.relative_changes = Vec(moved.size());
  for (int i = 0; i < moved.size(); ++i) {
    out.new_values(i) = moved(match[static_cast<size_t>(i)]);
    const double base = std::abs(out.old_values(i));
    const double delta = std::abs(out.new_values(i) - out.old_values(i));
    out.relative_changes(i) =
        base > 0 ? delta / base
                 : (delta > 0 ? std::numeric_limits<double>::infinity() : 0.0);
  }
  return out;
}

TrackingError tracking_error(const StateSpace& sys, const Mat& k_fb, const Mat& k_ff,
                             const Mat& da, const Vec& r) {
  sys.validate();
  const int n = sys.n();
  if (k_fb.rows() != sys.m() || k_fb.cols() != n)
    throw_input("tracking", "feedback gain must be m x n");
  if (k_ff.rows() != sys.m() || k_ff.cols() != sys.p())
    throw_input("tracking", "feedforward gain must be m x p");
  if (da.rows() != n || da.cols() != n)
    throw_input("tracking", "perturbation must be n x n");
  if (r.size() != sys.p())
    throw_input("tracking", "reference must have one entry per output");

  const Mat acl = sys.A - sys.B * k_fb;
  Eigen::FullPivLU<Mat> lu_nom(acl);
  Eigen::FullPivLU<Mat> lu_pert(Mat(acl + da));
  if (!lu_nom.isInvertible() || !lu_pert.isInvertible())
    throw_numeric("tracking", "closed loop has a pole at the origin; no steady state");
  // The final value only exists when the perturbed loop actually settles.
  if (spectrum_of(acl + da).real().maxCoeff() >= 0.0)
    throw_numeric("tracking", "perturbation destabilizes the closed loop; no steady state");

  TrackingError out;

  const Vec u_ff = k_ff * r;
  const Vec x_inf = -lu_pert.solve(sys.B * u_ff);
  const Vec y_inf = (sys.C - sys.D * k_fb) * x_inf + sys.D * u_ff;
  out.exact = y_inf - r;

  Eigen::JacobiSVD<Mat> svd_b(sys.B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sb = svd_b.singularValues();
  const double thresh = std::max(sys.B.rows(), sys.B.cols()) *
                        std::numeric_limits<double>::epsilon() * sb(0);
  Vec sbinv = Vec::Zero(sb.size());
  for (int i = 0; i < sb.size(); ++i)
    if (sb(i) > thresh) sbinv(i) = 1.0 / sb(i);
  const Mat b_pinv = svd_b.matrixV() * sbinv.asDiagonal() * svd_b.matrixU().transpose();

  // The first-order estimate contracts the reference through B+; it only types
  // when the input and output counts agree, and stays empty otherwise.
  if (sys.m() == sys.p())
    out.first_order = b_pinv * da * lu_nom.solve(sys.B * r);

  Eigen::JacobiSVD<Mat> svd_acl(acl);
  Eigen::JacobiSVD<Mat> svd_da(da);
  const double n_ainv = 1.0 / svd_acl.singularValues()(n - 1);
  const double n_bpinv = sbinv.size() ? sbinv.maxCoeff() : 0.0;
  out.bound = n_bpinv * sb(0) * n_ainv * svd_da.singularValues()(0) * r.norm();
  return out;
}

}  // namespace blockpole
