#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blockpole/matpoly.hpp"
#include "blockpole/util.hpp"
#include "test_helpers.hpp"

#include <random>

using namespace blockpole;
using testutil::max_abs;

namespace {

MatrixPoly scalar_poly(std::initializer_list<double> tail) {
  std::vector<Mat> t;
  for (double v : tail) {
    Mat m(1, 1);
    m(0, 0) = v;
    t.push_back(m);
  }
  return MatrixPoly::monic(std::move(t));
}

}  // namespace

TEST_CASE("monic construction and validation") {
  Mat a1 = Mat::Random(2, 2), a2 = Mat::Random(2, 2);
  MatrixPoly p = MatrixPoly::monic({a1, a2});
  CHECK(p.degree() == 2);
  CHECK(p.order() == 2);
  CHECK(p.coeff[0].isIdentity(0.0));
  CHECK(p.coeff[1].isApprox(a1));

  CHECK_THROWS_AS(MatrixPoly::monic({Mat::Zero(2, 2), Mat::Zero(3, 3)}), Error);
  CHECK_THROWS_AS(MatrixPoly::monic({Mat::Zero(2, 3)}), Error);
}

TEST_CASE("scalar evaluation matches the polynomial") {
  // D(lambda) = lambda^2 - 3 lambda + 2 = (lambda - 1)(lambda - 2)
  MatrixPoly p = scalar_poly({-3.0, 2.0});
  CHECK(eval_scalar(p, Complex(1, 0))(0, 0).real() == doctest::Approx(0.0));
  CHECK(eval_scalar(p, Complex(2, 0))(0, 0).real() == doctest::Approx(0.0));
  CHECK(eval_scalar(p, Complex(0, 0))(0, 0).real() == doctest::Approx(2.0));
  const Complex lam(0, 1);
  CHECK(eval_scalar(p, lam)(0, 0) == lam * lam - 3.0 * lam + 2.0);

  CVec roots = latent_roots(p);
  std::sort(roots.data(), roots.data() + roots.size(),
            [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(roots(0).real() == doctest::Approx(1.0));
  CHECK(roots(1).real() == doctest::Approx(2.0));
  CHECK(std::abs(roots(0).imag()) < 1e-12);
}

TEST_CASE("right and left evaluation detect solvents") {
  // Build D(lambda) from two known diagonal solvents; both are right and left
  // solvents here because everything commutes.
  Mat r1 = Mat::Zero(2, 2), r2 = Mat::Zero(2, 2);
  r1.diagonal() << -1.0, -2.0;
  r2.diagonal() << -3.0, -4.0;
  SolventSet set;
  set.solvents = {r1, r2};
  set.side = Side::Right;
  MatrixPoly p = poly_from_right_solvents(set);

  CHECK(max_abs(eval_right(p, r1)) < 1e-10);
  CHECK(max_abs(eval_right(p, r2)) < 1e-10);
  CHECK(max_abs(eval_left(p, r1)) < 1e-10);  // diagonal matrices commute

  Mat not_a_solvent = Mat::Identity(2, 2);
  CHECK(max_abs(eval_right(p, not_a_solvent)) > 1e-3);

  CHECK_THROWS_AS(eval_right(p, Mat::Zero(3, 3)), Error);
  CHECK_THROWS_AS(eval_left(p, Mat::Zero(3, 3)), Error);
}

TEST_CASE("latent roots of a reconstructed polynomial recover the spectrum") {
  std::mt19937 rng(11);
  CVec target = testutil::random_spectrum(rng, 2, 1, -6.0, -1.0, 0.5);
  std::vector<Mat> solvents = {
      canonical_solvent(target.head(2), SolventForm::Diagonal),
      canonical_solvent(target.tail(2), SolventForm::Diagonal)};
  SolventSet set = certify_complete_set(solvents, target);
  MatrixPoly p = poly_from_right_solvents(set);
  CHECK(spectral_distance(latent_roots(p), target) < 1e-8);
}

TEST_CASE("latent_roots rejects non-monic input") {
  MatrixPoly p = scalar_poly({-3.0, 2.0});
  p.coeff[0](0, 0) = 2.0;
  CHECK_THROWS_AS(latent_roots(p), Error);
}

TEST_CASE("canonical solvent forms") {
  CVec spec(3);
  spec << Complex(-1, 2), Complex(-1, -2), Complex(-5, 0);

  SUBCASE("diagonal is real modal") {
    Mat d = canonical_solvent(spec, SolventForm::Diagonal);
    CHECK(d(0, 0) == doctest::Approx(-1.0));
    CHECK(d(0, 1) == doctest::Approx(2.0));
    CHECK(d(1, 0) == doctest::Approx(-2.0));
    CHECK(d(1, 1) == doctest::Approx(-1.0));
    CHECK(d(2, 2) == doctest::Approx(-5.0));
    CHECK(d(2, 0) == 0.0);
  }

  SUBCASE("controller is a bottom-row companion") {
    Mat c = canonical_solvent(spec, SolventForm::Controller);
    CHECK(c.block(0, 1, 2, 2).isIdentity(1e-14));
    CHECK(c(0, 0) == 0.0);
    // char poly (s+1-2i)(s+1+2i)(s+5) = s^3 + 7s^2 + 15s + 25
    CHECK(c(2, 0) == doctest::Approx(-25.0));
    CHECK(c(2, 1) == doctest::Approx(-15.0));
    CHECK(c(2, 2) == doctest::Approx(-7.0));
  }

  SUBCASE("observer transposes the controller") {
    Mat c = canonical_solvent(spec, SolventForm::Controller);
    Mat o = canonical_solvent(spec, SolventForm::Observer);
    CHECK(o.isApprox(c.transpose()));
  }

  SUBCASE("all three forms share the spectrum") {
    for (SolventForm f :
         {SolventForm::Diagonal, SolventForm::Controller, SolventForm::Observer}) {
      Mat s = canonical_solvent(spec, f);
      CHECK(spectral_distance(testutil::eigvals(s), spec) < 1e-8);
    }
  }

  SUBCASE("unpaired complex value is rejected") {
    CVec bad(2);
    bad << Complex(-1, 2), Complex(-5, 0);
    CHECK_THROWS_AS(canonical_solvent(bad, SolventForm::Diagonal), Error);
    CHECK_THROWS_AS(canonical_solvent(bad, SolventForm::Controller), Error);
  }
}

TEST_CASE("solvent_from_eigenpairs realifies conjugate data") {
  std::mt19937 rng(5);
  // Take eigenpairs of a random real matrix and rebuild it.
  Mat a = testutil::random_matrix(rng, 3, 3);
  Eigen::EigenSolver<Mat> es(a);
  Mat rebuilt = solvent_from_eigenpairs(es.eigenvalues(), es.eigenvectors(), Side::Right);
  CHECK(max_abs(rebuilt - a) < 1e-8);

  // Left side: Q^-1 Lambda Q with Q the inverse of the eigenvector matrix
  // reproduces the same matrix.
  CMat q = es.eigenvectors().inverse();
  Mat rebuilt_left = solvent_from_eigenpairs(es.eigenvalues(), q, Side::Left);
  CHECK(max_abs(rebuilt_left - a) < 1e-7);

  SUBCASE("non conjugate-closed eigenvalue list is rejected") {
    CVec lam(2);
    lam << Complex(1, 1), Complex(2, 0);
    CMat v = CMat::Identity(2, 2);
    CHECK_THROWS_AS(solvent_from_eigenpairs(lam, v, Side::Right), Error);
  }
}

TEST_CASE("block Vandermonde structure") {
  std::mt19937 rng(7);
  Mat r1 = testutil::random_matrix(rng, 2, 2);
  Mat r2 = r1 * 2.0 + Mat::Identity(2, 2);
  Mat v = block_vandermonde({r1, r2});
  REQUIRE(v.rows() == 4);
  CHECK(v.block(0, 0, 2, 2).isIdentity(0.0));
  CHECK(v.block(0, 2, 2, 2).isIdentity(0.0));
  CHECK(v.block(2, 0, 2, 2).isApprox(r1));
  CHECK(v.block(2, 2, 2, 2).isApprox(r2));
}

TEST_CASE("Vandermonde determinant identity for commuting solvents") {
  // For l = 2 and commuting solvents, det [[I, I], [R1, R2]] = det(R2 - R1).
  std::mt19937 rng(23);
  for (int iter = 0; iter < 20; ++iter) {
    CVec s1 = testutil::random_spectrum(rng, 0, 1, -5.0, 5.0, 0.5);
    CVec s2 = testutil::random_spectrum(rng, 0, 1, -5.0, 5.0, 0.5);
    Mat r1 = canonical_solvent(s1, SolventForm::Diagonal);
    Mat r2 = canonical_solvent(s2, SolventForm::Diagonal);
    REQUIRE(max_abs(r1 * r2 - r2 * r1) < 1e-12);
    Mat v = block_vandermonde({r1, r2});
    CHECK(v.determinant() == doctest::Approx((r2 - r1).determinant()).epsilon(1e-9));
  }
}

TEST_CASE("certification accepts a sound set and rejects broken ones") {
  CVec target(4);
  target << Complex(-1, 0), Complex(-2, 0), Complex(-3, 0), Complex(-4, 0);
  Mat r1 = canonical_solvent(target.head(2), SolventForm::Diagonal);
  Mat r2 = canonical_solvent(target.tail(2), SolventForm::Diagonal);

  SolventSet set = certify_complete_set({r1, r2}, target);
  CHECK(set.vandermonde_cond > 1.0);
  CHECK(set.vandermonde_cond < 1e6);

  SUBCASE("overlapping spectra fail") {
    bool threw = false;
    try {
      certify_complete_set({r1, r1}, target, Side::Right);
    } catch (const Error& e) {
      threw = true;
      CHECK(std::string(e.what()).find("certification") != std::string::npos);
      CHECK(e.kind() == Error::Kind::Numeric);
    }
    CHECK(threw);
  }
  SUBCASE("wrong union fails") {
    CVec other = target;
    other(3) = Complex(-9, 0);
    CHECK_THROWS_AS(certify_complete_set({r1, r2}, other), Error);
  }
  SUBCASE("spectra may be disjoint yet the Vandermonde singular") {
    // Two companion matrices of the same convention always produce a singular
    // block Vandermonde for l = 2: [[I, I], [C1, C2]] with C1, C2 sharing the
    // same first row.
    CVec t2(4);
    t2 << Complex(-1, 0), Complex(-2, 0), Complex(-3, 0), Complex(-4, 0);
    Mat c1 = canonical_solvent(t2.head(2), SolventForm::Controller);
    Mat c2 = canonical_solvent(t2.tail(2), SolventForm::Controller);
    Mat v = block_vandermonde({c1, c2});
    CHECK(std::abs(v.determinant()) < 1e-10);
    CHECK_THROWS_AS(certify_complete_set({c1, c2}, t2), Error);
  }
}

TEST_CASE("left-side reconstruction annihilates under left evaluation") {
  std::mt19937 rng(31);
  CVec target = testutil::random_spectrum(rng, 4, 0, -8.0, -1.0, 0.5);
  Mat l1 = canonical_solvent(target.head(2), SolventForm::Diagonal);
  Mat l2 = canonical_solvent(target.tail(2), SolventForm::Diagonal);
  SolventSet set = certify_complete_set({l1, l2}, target, Side::Left);
  MatrixPoly p = poly_from_left_solvents(set);
  double scale = 0.0;
  for (const Mat& c : p.coeff) scale = std::max(scale, max_abs(c));
  CHECK(max_abs(eval_left(p, l1)) < 1e-8 * (1.0 + scale));
  CHECK(max_abs(eval_left(p, l2)) < 1e-8 * (1.0 + scale));
  CHECK(spectral_distance(latent_roots(p), target) < 1e-6);
}

TEST_CASE("similarity preserves solvent spectra") {
  std::mt19937 rng(41);
  for (int iter = 0; iter < 20; ++iter) {
    Mat r = testutil::random_matrix(rng, 3, 3, 2.0);
    Mat w = testutil::random_matrix(rng, 3, 3, 1.0) + 3.0 * Mat::Identity(3, 3);
    Mat similar = w * r * w.inverse();
    CHECK(spectral_distance(testutil::eigvals(r), testutil::eigvals(similar)) < 1e-6);
  }
}

TEST_CASE("form names round-trip") {
  CHECK(solvent_form_from_string("diagonal") == SolventForm::Diagonal);
  CHECK(solvent_form_from_string("controller") == SolventForm::Controller);
  CHECK(solvent_form_from_string("observer") == SolventForm::Observer);
  CHECK(std::string(to_string(SolventForm::Diagonal)) == "diagonal");
  CHECK(std::string(to_string(Side::Left)) == "left");
  CHECK_THROWS_AS(solvent_form_from_string("pentagonal"), Error);
}
