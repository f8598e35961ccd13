#include "blockpole/matpoly.hpp"

#include "blockpole/util.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <sstream>

namespace blockpole {

namespace {

double cond2(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  double smin = s(s.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

// Coefficients of the monic scalar polynomial with the given roots,
// ascending-degree order dropped: returns c_1..c_m for
// lambda^m + c_1 lambda^(m-1) + ... + c_m.
std::vector<double> real_poly_coeffs(const CVec& roots) {
  std::vector<Complex> c{1.0};
  for (int i = 0; i < roots.size(); ++i) {
    c.push_back(0.0);
    for (size_t j = c.size() - 1; j > 0; --j) c[j] -= roots(i) * c[j - 1];
  }
  std::vector<double> out;
  for (size_t j = 1; j < c.size(); ++j) {
    if (std::abs(c[j].imag()) > 1e-9 * (1.0 + std::abs(c[j])))
      throw_input("canonical-solvent", "eigenvalue list is not conjugate-closed");
    out.push_back(c[j].real());
  }
  return out;
}

}  // namespace

MatrixPoly MatrixPoly::monic(std::vector<Mat> tail) {
  MatrixPoly p;
  if (tail.empty()) throw_input("matrix-poly", "at least one trailing coefficient required");
  const auto m = tail[0].rows();
  p.coeff.reserve(tail.size() + 1);
  p.coeff.push_back(Mat::Identity(m, m));
  for (auto& t : tail) p.coeff.push_back(std::move(t));
  p.validate();
  return p;
}

void MatrixPoly::validate() const {
  if (coeff.empty()) throw_input("matrix-poly", "no coefficients");
  const auto m = coeff[0].rows();
  for (const auto& c : coeff)
    if (c.rows() != m || c.cols() != m)
      throw_input("matrix-poly", "coefficient blocks must be square and uniformly sized");
}

const char* to_string(Side s) { return s == Side::Right ? "right" : "left"; }

const char* to_string(SolventForm f) {
  switch (f) {
    case SolventForm::Diagonal: return "diagonal";
    case SolventForm::Controller: return "controller";
    case SolventForm::Observer: return "observer";
  }
  return "?";
}

SolventForm solvent_form_from_string(const std::string& name) {
  if (name == "diagonal") return SolventForm::Diagonal;
  if (name == "controller") return SolventForm::Controller;
  if (name == "observer") return SolventForm::Observer;
  throw_input("solvent-form", "unknown form '" + name +
                                  "' (allowed: diagonal, controller, observer)");
}

CMat eval_scalar(const MatrixPoly& p, Complex lambda) {
  p.validate();
  CMat acc = p.coeff[0].cast<Complex>();
  for (size_t i = 1; i < p.coeff.size(); ++i)
    acc = acc * lambda + p.coeff[i].cast<Complex>();
  return acc;
}

Mat eval_right(const MatrixPoly& p, const Mat& x) {
  p.validate();
  if (x.rows() != p.order() || x.cols() != p.order())
    throw_input("eval-right", "argument order does not match polynomial order");
  Mat acc = p.coeff[0];
  for (size_t i = 1; i < p.coeff.size(); ++i) acc = acc * x + p.coeff[i];
  return acc;
}

Mat eval_left(const MatrixPoly& p, const Mat& x) {
  p.validate();
  if (x.rows() != p.order() || x.cols() != p.order())
    throw_input("eval-left", "argument order does not match polynomial order");
  Mat acc = p.coeff[0];
  for (size_t i = 1; i < p.coeff.size(); ++i) acc = x * acc + p.coeff[i];
  return acc;
}

CVec latent_roots(const MatrixPoly& p) {
  p.validate();
  const int m = p.order();
  const int l = p.degree();
  if (l == 0) throw_input("latent-roots", "degree-zero polynomial has no latent roots");
  if ((p.coeff[0] - Mat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
    throw_input("latent-roots", "polynomial must be monic (rescale by the leading block first)");
  Mat comp = Mat::Zero(l * m, l * m);
  for (int i = 0; i + 1 < l; ++i)
    comp.block(i * m, (i + 1) * m, m, m) = Mat::Identity(m, m);
  // bottom block row: [-A_l, -A_(l-1), ..., -A_1]
  for (int j = 0; j < l; ++j)
    comp.block((l - 1) * m, j * m, m, m) = -p.coeff[static_cast<size_t>(l - j)];
  return spectrum_of(comp);
}

Mat solvent_from_eigenpairs(const CVec& eigenvalues, const CMat& vectors, Side side) {
  const int m = static_cast<int>(eigenvalues.size());
  if (vectors.rows() != m || vectors.cols() != m)
    throw_input("solvent-from-eigenpairs", "vector matrix must be m x m");
  if (!conjugate_closed(eigenvalues))
    throw_input("solvent-from-eigenpairs", "eigenvalue list is not conjugate-closed");
  const double cond = [&] {
    Eigen::JacobiSVD<CMat> svd(vectors);
    const auto& s = svd.singularValues();
    return s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1)
                               : std::numeric_limits<double>::infinity();
  }();
  if (cond > 1e10)
    throw_numeric("solvent-from-eigenpairs",
                  "vector matrix is numerically singular (condition " + fmt(cond, 4) + ")");
  CMat lam = eigenvalues.asDiagonal();
  CMat s;
  if (side == Side::Right) {
    // S = P Lambda P^-1, from S P = P Lambda  =>  P^T S^T = Lambda P^T
    CMat st = vectors.transpose().fullPivLu().solve(lam * vectors.transpose());
    s = st.transpose();
  } else {
    // S = Q^-1 Lambda Q
    s = vectors.fullPivLu().solve(lam * vectors);
  }
  double imag_mag = s.imag().cwiseAbs().maxCoeff();
  double real_mag = s.real().cwiseAbs().maxCoeff();
  if (imag_mag > 1e-8 * (1.0 + real_mag))
    throw_input("solvent-from-eigenpairs",
                "eigenpairs do not realify (conjugate vectors required for conjugate "
                "eigenvalues)");
  return s.real();
}

Mat canonical_solvent(const CVec& eigenvalues, SolventForm form) {
  const int m = static_cast<int>(eigenvalues.size());
  if (!conjugate_closed(eigenvalues))
    throw_input("canonical-solvent", "eigenvalue list is not conjugate-closed");
  if (form == SolventForm::Diagonal) {
    // Real modal form, blocks laid down in input order.
    Mat s = Mat::Zero(m, m);
    std::vector<char> used(static_cast<size_t>(m), 0);
    int pos = 0;
    for (int i = 0; i < m; ++i) {
      if (used[static_cast<size_t>(i)]) continue;
      const Complex z = eigenvalues(i);
      if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z))) {
        s(pos, pos) = z.real();
        used[static_cast<size_t>(i)] = 1;
        pos += 1;
        continue;
      }
      // find the conjugate partner
      int partner = -1;
      for (int j = i + 1; j < m; ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        if (std::abs(eigenvalues(j) - std::conj(z)) <= 1e-9 * (1.0 + std::abs(z))) {
          partner = j;
          break;
        }
      }
      if (partner < 0)
        throw_input("canonical-solvent", "unpaired complex eigenvalue " + fmt_complex(z));
      const double sig = z.real();
      const double om = std::abs(z.imag());
      s(pos, pos) = sig;
      s(pos, pos + 1) = om;
      s(pos + 1, pos) = -om;
      s(pos + 1, pos + 1) = sig;
      used[static_cast<size_t>(i)] = 1;
      used[static_cast<size_t>(partner)] = 1;
      pos += 2;
    }
    return s;
  }
  // companion of the scalar characteristic polynomial
  auto c = real_poly_coeffs(eigenvalues);
  Mat comp = Mat::Zero(m, m);
  if (m > 1) comp.topRightCorner(m - 1, m - 1).setIdentity();
  for (int j = 0; j < m; ++j) comp(m - 1, j) = -c[static_cast<size_t>(m - 1 - j)];
  if (form == SolventForm::Controller) return comp;
  return comp.transpose();  // observer
}

Mat block_vandermonde(const std::vector<Mat>& solvents) {
  if (solvents.empty()) throw_input("block-vandermonde", "empty solvent list");
  const int l = static_cast<int>(solvents.size());
  const int m = static_cast<int>(solvents[0].rows());
  for (const auto& r : solvents)
    if (r.rows() != m || r.cols() != m)
      throw_input("block-vandermonde", "solvents must share one square order");
  Mat v(l * m, l * m);
  std::vector<Mat> pw(static_cast<size_t>(l), Mat::Identity(m, m));
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      v.block(i * m, j * m, m, m) = pw[static_cast<size_t>(j)];
      pw[static_cast<size_t>(j)] *= solvents[static_cast<size_t>(j)];
    }
  }
  return v;
}

SolventSet certify_complete_set(std::vector<Mat> solvents, const CVec& target_spectrum,
                                Side side, double match_tol, double cond_cap) {
  if (solvents.empty()) throw_input("certification", "empty solvent list");
  const int l = static_cast<int>(solvents.size());
  const int m = static_cast<int>(solvents[0].rows());
  for (const auto& r : solvents)
    if (r.rows() != m || r.cols() != m)
      throw_input("certification", "solvents must share one square order");
  if (target_spectrum.size() != static_cast<Eigen::Index>(l) * m)
    throw_input("certification", "target spectrum size must equal l*m");

  std::vector<std::string> violations;

  std::vector<CVec> spectra;
  spectra.reserve(static_cast<size_t>(l));
  for (const auto& r : solvents) spectra.push_back(spectrum_of(r));

  // pairwise disjointness
  for (int a = 0; a < l; ++a) {
    for (int b = a + 1; b < l; ++b) {
      double dmin = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          dmin = std::min(dmin,
                          std::abs(spectra[static_cast<size_t>(a)](i) -
                                   spectra[static_cast<size_t>(b)](j)));
      if (dmin <= match_tol) {
        std::ostringstream os;
        os << "spectra of solvents " << a + 1 << " and " << b + 1
           << " are not disjoint (closest eigenvalues within " << fmt(dmin, 3) << ")";
        violations.push_back(os.str());
      }
    }
  }

  // union equals target
  CVec all(static_cast<Eigen::Index>(l) * m);
  for (int a = 0; a < l; ++a) all.segment(a * m, m) = spectra[static_cast<size_t>(a)];
  double worst = spectral_distance(target_spectrum, all);
  if (worst > match_tol) {
    std::ostringstream os;
    os << "spectrum union mismatch: worst matched distance " << fmt(worst, 4)
       << " exceeds tolerance " << fmt(match_tol, 3);
    violations.push_back(os.str());
  }

  // conditioning of the reconstruction system
  double cond;
  if (side == Side::Right) {
    cond = cond2(block_vandermonde(solvents));
  } else {
    Mat w(l * m, l * m);
    for (int i = 0; i < l; ++i) {
      Mat pw = Mat::Identity(m, m);
      for (int j = l - 1; j >= 0; --j) {
        w.block(i * m, j * m, m, m) = pw;
        pw = solvents[static_cast<size_t>(i)] * pw;
      }
    }
    cond = cond2(w);
  }
  if (!(cond < cond_cap)) {
    std::ostringstream os;
    os << "block Vandermonde ill-conditioned: condition " << fmt(cond, 4) << " exceeds cap "
       << fmt(cond_cap, 3);
    violations.push_back(os.str());
  }

  if (!violations.empty()) {
    std::string msg = "solvent set rejected:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw_numeric("certification", msg);
  }
  return SolventSet{std::move(solvents), side, cond};
}

MatrixPoly poly_from_right_solvents(const SolventSet& set) {
  if (set.side != Side::Right)
    throw_input("poly-from-right-solvents", "set was certified for the left side");
  const int l = static_cast<int>(set.solvents.size());
  const int m = static_cast<int>(set.solvents[0].rows());
  Mat v = block_vandermonde(set.solvents);
  Mat s(m, l * m);
  for (int j = 0; j < l; ++j) {
    Mat pw = Mat::Identity(m, m);
    for (int k = 0; k < l; ++k) pw *= set.solvents[static_cast<size_t>(j)];
    s.block(0, j * m, m, m) = pw;
  }
  // X * V = -S  =>  V^T X^T = -S^T
  Mat xt = v.transpose().partialPivLu().solve(-s.transpose());
  Mat x = xt.transpose();  // [D_l, D_(l-1), ..., D_1]
  std::vector<Mat> tail(static_cast<size_t>(l));
  for (int j = 0; j < l; ++j)
    tail[static_cast<size_t>(l - 1 - j)] = x.block(0, j * m, m, m);
  return MatrixPoly::monic(std::move(tail));
}

MatrixPoly poly_from_left_solvents(const SolventSet& set) {
  if (set.side != Side::Left)
    throw_input("poly-from-left-solvents", "set was certified for the right side");
  const int l = static_cast<int>(set.solvents.size());
  const int m = static_cast<int>(set.solvents[0].rows());
  Mat w(l * m, l * m);
  Mat rhs(l * m, m);
  for (int i = 0; i < l; ++i) {
    const Mat& li = set.solvents[static_cast<size_t>(i)];
    Mat pw = Mat::Identity(m, m);
    for (int j = l - 1; j >= 0; --j) {
      w.block(i * m, j * m, m, m) = pw;
      pw = li * pw;
    }
    rhs.block(i * m, 0, m, m) = -pw;  // pw is now L_i^l
  }
  Mat d = w.partialPivLu().solve(rhs);  // stacked [D_1; ...; D_l]
  std::vector<Mat> tail(static_cast<size_t>(l));
  for (int i = 0; i < l; ++i) tail[static_cast<size_t>(i)] = d.block(i * m, 0, m, m);
  return MatrixPoly::monic(std::move(tail));
}

}  // namespace blockpole
