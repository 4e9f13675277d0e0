#include <doctest.h>

#include <cmath>
#include <random>

#include "annulus/harmonic.hpp"
#include "annulus/inner.hpp"
#include "annulus/spaces.hpp"
#include "oracles.hpp"

using namespace annulus;

namespace {

const SpaceTag kE2{SpaceKind::SmirnovArclength, {}};
const SpaceTag kH2{SpaceKind::HardyHarmonicMeasure, {}};
const SpaceTag kA2{SpaceKind::BergmanArea, {}};

LaurentPolynomial random_laurent(int d, unsigned seed) { return {-d, oracle::random_coeffs(d, seed)}; }

}  // namespace

TEST_SUITE("spaces") {
  TEST_CASE("laurent arithmetic keeps window bookkeeping") {
    const LaurentPolynomial a(-1, {1.0, 2.0, cplx(0, 1)});  // 1/z + 2 + i z
    const auto b = LaurentPolynomial::monomial(2, 3.0);
    const auto p = a * b;
    CHECK(p.lo() == 1);
    CHECK(p.hi() == 3);
    CHECK(p.coeff(3) == cplx(0, 3));
    CHECK(p.coeff(0) == cplx(0));
    const cplx z(0.3, 0.8);
    CHECK(std::abs(p(z) - a(z) * b(z)) < 1e-14);
    CHECK(std::abs((a + b)(z) - a(z) - b(z)) < 1e-14);
    CHECK(std::abs((a - b)(z) - a(z) + b(z)) < 1e-14);
    CHECK(std::abs(a.derivative()(z) - (-1.0 / (z * z) + cplx(0, 1))) < 1e-14);
    const auto t = LaurentPolynomial(-3, {0.0, 0.0, 1.0, 0.0, 0.0}).trimmed();
    CHECK(t.lo() == -1);
    CHECK(t.hi() == -1);
  }

  TEST_CASE("space names") {
    CHECK(parse_space_kind("szego") == SpaceKind::SmirnovArclength);
    CHECK(parse_space_kind("h2") == SpaceKind::HardyHarmonicMeasure);
    CHECK(parse_space_kind("bergman") == SpaceKind::BergmanArea);
    CHECK_THROWS_AS(parse_space_kind("sobolev"), Error);
  }

  TEST_CASE("monomial norms: documented values") {
    const auto d = make_annulus(0.5, 0.7);
    const auto e = monomial_norms(d, kE2, 1);
    CHECK(e[2] == doctest::Approx(2 * oracle::kPi * 1.125).epsilon(1e-14));
    CHECK(e[2] == doctest::Approx(7.0686).epsilon(1e-5));
    const auto a = monomial_norms(d, kA2, 1);
    CHECK(a[1] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(a[0] == doctest::Approx(2 * std::log(2.0)).epsilon(1e-14));
    CHECK_THROWS_AS(monomial_norms(d, kA2.with_weight([](cplx z) { return z; }), 2), Error);
  }

  TEST_CASE("monomial norms agree with quadrature") {
    for (double r : {0.3, 0.5, 0.7}) {
      const auto d = make_annulus(r, (1 + r) / 2);
      const int N = 16;
      for (const auto& tag : {kE2, kA2, kH2}) {
        const auto nn = monomial_norms(d, tag, N);
        const auto meas = space_measure(d, tag, 512);
        for (int n = -N; n <= N; ++n) {
          const double q = norm([n](cplx z) { return std::pow(z, n); }, meas);
          CHECK(nn[n + N] == doctest::Approx(q * q).epsilon(1e-10));
        }
      }
      const auto e = monomial_norms(d, kE2, 16);
      const auto a = monomial_norms(d, kA2, 16);
      for (int n = -16; n <= 16; ++n) {
        CHECK(e[n + 16] == doctest::Approx(oracle::smirnov_norm2(n, r)).epsilon(1e-13));
        CHECK(a[n + 16] == doctest::Approx(oracle::bergman_norm2(n, r)).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("harmonic measure norm of 1 is 1") {
    for (double r : {0.3, 0.5, 0.7}) {
      const auto d = make_annulus(r, cplx(0.2, (1 + r) / 2 - 0.1));
      CHECK(norm([](cplx) { return cplx(1.0); }, space_measure(d, kH2, 256)) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("gram matrices: diagonal forms, shifts and aliasing guard") {
    const auto d = make_annulus(0.5, 0.7);
    const int N = 6;
    const auto G = gram_matrix(d, kE2, N, 64);
    const auto nn = monomial_norms(d, kE2, N);
    for (int j = 0; j <= 2 * N; ++j)
      for (int k = 0; k <= 2 * N; ++k)
        CHECK(std::abs(G(j, k) - (j == k ? nn[j] : 0.0)) <= 1e-12 * nn[j]);

    const auto W = gram_matrix(d, kA2.with_weight([](cplx z) { return z; }), N, 64);
    const auto a = monomial_norms(d, kA2, N + 1);
    for (int j = 0; j <= 2 * N; ++j) {
      CHECK(W(j, j).real() == doctest::Approx(a[j + 2]).epsilon(1e-12));
      for (int k = 0; k <= 2 * N; ++k)
        if (k != j) CHECK(std::abs(W(j, k)) <= 1e-13);
    }
    CHECK_THROWS_AS(gram_matrix(d, kE2, N, 4 * N + 3), Error);
  }

  TEST_CASE("weighted gram with a vanishing weight stays positive definite") {
    const auto d = make_annulus(0.5, 0.7);
    const auto B = blaschke_factor(d, 0.7);
    for (const auto& tag : {kE2, kA2}) {
      const auto G = gram_matrix(d, tag.with_weight(B.as_function()), 12, 512);
      const Eigen::LLT<Eigen::MatrixXcd> llt(G);
      CHECK(llt.info() == Eigen::Success);
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(G).eigenvalues().minCoeff() > 0.0);
    }
  }

  TEST_CASE("gram quadrature is stable under doubling m") {
    const auto d = make_annulus(0.5, 0.7);
    const auto B = blaschke_factor(d, cplx(0.0, 0.6));
    for (const auto& tag : {kE2, kH2, kA2, kE2.with_weight(B.as_function())}) {
      const int N = 8;
      const Eigen::MatrixXcd a = scaled_gram_matrix(d, tag, N, 256), b = scaled_gram_matrix(d, tag, N, 512);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((a - a.adjoint()).cwiseAbs().maxCoeff() <= 1e-14 * a.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("inner products") {
    const auto d = make_annulus(0.5, 0.7);
    const auto z = LaurentPolynomial::monomial(1), one = LaurentPolynomial::constant(1.0);
    CHECK(inner_product(z, z, d, kE2, 64).real() == doctest::Approx(7.0686).epsilon(1e-5));
    for (const auto& tag : {kE2, kA2}) CHECK(std::abs(inner_product(z, one, d, tag, 64)) <= 1e-14);
    // Harmonic measure is not rotation invariant: <z, 1> is z evaluated at the base.
    CHECK(std::abs(inner_product(z, one, d, kH2, 256) - 0.7) <= 1e-10);
  }

  TEST_CASE("inner product properties on random Laurent polynomials") {
    const auto d = make_annulus(0.5, 0.7);
    for (const auto& tag : {kE2, kH2, kA2}) {
      const int N = 4;
      const auto G = gram_matrix(d, tag, N, 128);
      for (unsigned s = 0; s < 20; ++s) {
        const auto f = random_laurent(N, s), g = random_laurent(N, 100 + s);
        const cplx ff = inner_product(f, f, d, tag, 128), fg = inner_product(f, g, d, tag, 128),
                   gf = inner_product(g, f, d, tag, 128), gg = inner_product(g, g, d, tag, 128);
        CHECK(ff.real() >= 0.0);
        CHECK(std::abs(ff.imag()) <= 1e-12 * ff.real());
        CHECK(std::abs(fg - std::conj(gf)) <= 1e-12 * std::abs(fg));
        CHECK(std::norm(fg) <= ff.real() * gg.real() * (1 + 1e-12));
        // coefficient formula: sum f_j conj(g_k) G_jk
        Eigen::VectorXcd a(2 * N + 1), b(2 * N + 1);
        for (int n = -N; n <= N; ++n) {
          a(n + N) = f.coeff(n);
          b(n + N) = g.coeff(n);
        }
        const cplx viaG = (a.transpose() * G * b.conjugate())(0);
        CHECK(std::abs(viaG - fg) <= 1e-11 * std::abs(fg));
        const cplx lin = inner_product(f * cplx(2, -1) + g, g, d, tag, 128);
        CHECK(std::abs(lin - (cplx(2, -1) * fg + gg)) <= 1e-11 * std::abs(lin));
      }
    }
  }
}
