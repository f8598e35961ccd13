#pragma once

#include "blockpole/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cstdio>
#include <vector>

namespace blockpole {

// Diagonal similarity D^-1 A D with power-of-two scales that equalises row and
// column norms (Parlett-Reinsch).  Exact in floating point, and it keeps the
// eigensolver honest on badly scaled matrices -- closed loops with large gains
// mix entries of order 1e-3 and 1e+4, which costs several digits unbalanced.
// `scale`, when given, receives the diagonal of D.
inline Mat balance(const Mat& a, Vec* scale = nullptr) {
  const int n = static_cast<int>(a.rows());
  Mat b = a;
  Vec d = Vec::Ones(n);
  for (bool again = true; again;) {
    again = false;
    for (int i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(b(j, i));
        r += std::abs(b(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < 0.5 * r) { c *= 2.0; r *= 0.5; f *= 2.0; }
      while (c >= 2.0 * r) { c *= 0.5; r *= 2.0; f *= 0.5; }
      if (c + r < 0.95 * s) {
        again = true;
        d(i) *= f;
        b.col(i) *= f;
        b.row(i) *= 1.0 / f;
      }
    }
  }
  if (scale) *scale = d;
  return b;
}

// Eigenvalues computed on the balanced matrix.
inline CVec spectrum_of(const Mat& a) {
  Eigen::EigenSolver<Mat> es(balance(a), /*computeEigenvectors=*/false);
  return es.eigenvalues();
}

// Greedy spectral matching: pairs entries of `from` with entries of `to`
// by ascending distance, each entry claimed at most once.  perm[i] is the
// index in `to` matched to from[i].  Deterministic tie-breaking.
inline std::vector<int> greedy_match(const CVec& from, const CVec& to) {
  const int n = static_cast<int>(from.size());
  struct Cand {
    double d;
    int i, j;
  };
  std::vector<Cand> cands;
  cands.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cands.push_back({std::abs(from(i) - to(j)), i, j});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::vector<int> perm(n, -1);
  std::vector<char> used(n, 0);
  int assigned = 0;
  for (const auto& c : cands) {
    if (assigned == n) break;
    if (perm[c.i] >= 0 || used[c.j]) continue;
    perm[c.i] = c.j;
    used[c.j] = 1;
    ++assigned;
  }
  return perm;
}

// Largest matched distance between two spectra of equal length.
inline double spectral_distance(const CVec& a, const CVec& b) {
  auto perm = greedy_match(a, b);
  double worst = 0.0;
  for (int i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a(i) - b(perm[static_cast<size_t>(i)])));
  return worst;
}

// A list is conjugate-closed when it equals its own conjugate as a multiset.
inline bool conjugate_closed(const CVec& v, double tol = 1e-9) {
  return spectral_distance(v, v.conjugate()) <= tol;
}

// Fixed-width value formatting: 12 significant digits, locale-independent.
inline std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::string fmt(double x, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, x);
  return buf;
}

inline std::string fmt_complex(const Complex& z, int digits = 6) {
  std::string s = fmt(z.real(), digits);
  if (z.imag() > 0)
    s += " + " + fmt(z.imag(), digits) + "i";
  else if (z.imag() < 0)
    s += " - " + fmt(-z.imag(), digits) + "i";
  return s;
}

}  // namespace blockpole
