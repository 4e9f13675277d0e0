#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "annulus/inner.hpp"
#include "oracles.hpp"

using namespace annulus;

namespace {

double modulus_deviation(const InnerFunctionSpec& f, int component, int m = 256) {
  const auto& d = f.domain();
  double lo = INFINITY, hi = 0.0;
  const double rho = component == 1 ? 1.0 : d.inner_radius();
  for (int k = 0; k < m; ++k) {
    const double v = std::abs(f(std::polar(rho, kTwoPi * (k + 0.5) / m)));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

// Boundary extrema of |f| at half-step angles.
std::pair<double, double> boundary_range(const AnalyticFn& f, const AnnulusDomain& d, int m = 512) {
  double lo = INFINITY, hi = 0.0;
  for (double rho : {1.0, d.inner_radius()})
    for (int k = 0; k < m; ++k) {
      const double v = std::abs(f(std::polar(rho, kTwoPi * (k + 0.5) / m)));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  return {lo, hi};
}

}  // namespace

TEST_SUITE("inner") {
  TEST_CASE("blaschke factor: period lattice at |a| = e^{-1/2}") {
    const auto d = make_annulus(std::exp(-1.0), 0.7);
    const cplx a = std::polar(std::exp(-0.5), 1.3);
    const auto B = blaschke_factor(d, a);
    CHECK(B.lambda() == doctest::Approx(0.5).epsilon(1e-10));
    const auto [c1, c2] = B.boundary_moduli();
    CHECK(c1 == doctest::Approx(std::exp(0.5)).epsilon(1e-10));
    CHECK(c2 == 1.0);
    const auto rep = verify_inner(B.as_function(), d);
    CHECK(rep.c1 == doctest::Approx(std::exp(0.5)).epsilon(1e-8));
    CHECK(rep.c2 == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("blaschke factor: one zero, constant modulus, single valued") {
    const auto d = make_annulus(0.5, 0.7);
    for (cplx a : {cplx(0.7), cplx(0.0, 0.6), cplx(-0.55, 0.3), cplx(0.1, -0.95)}) {
      const auto B = blaschke_factor(d, a);
      CHECK(std::abs(B(a)) <= 1e-10);
      CHECK(count_zeros(B.as_function(), full_ring(d)) == 1);
      CHECK(modulus_deviation(B, 1) <= 1e-8);
      CHECK(modulus_deviation(B, 2) <= 1e-8);
      CHECK(B.period_residual() <= 1e-8);
      CHECK(B.lambda() > 0.0);
      CHECK(B.lambda() <= d.log_modulus() + 1e-12);
      CHECK(verify_inner(B.as_function(), d).passed);
      // Continuity across the cut on the positive real axis.
      for (double x : {0.6, 0.8, 0.95}) CHECK(std::abs(B(cplx(x, 1e-12)) - B(cplx(x, -1e-12))) <= 1e-9);
    }
    CHECK_THROWS_AS(blaschke_factor(d, 0.5), Error);
  }

  TEST_CASE("lattice shift scales the outer modulus by 1/r") {
    const auto d = make_annulus(0.5, 0.7);
    const auto f0 = inner_function(d, {cplx(0.0, 0.6)}, {}, 0), f1 = inner_function(d, {cplx(0.0, 0.6)}, {}, 1);
    CHECK(f1.lambda() == doctest::Approx(f0.lambda() + std::log(2.0)).epsilon(1e-12));
    CHECK(f1.period_residual() <= 1e-8);
    CHECK(verify_inner(f1.as_function(), d).c1 == doctest::Approx(2 * verify_inner(f0.as_function(), d).c1).epsilon(1e-8));
    CHECK(verify_inner(f1.as_function(), d).c2 == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("blaschke product of a summable sequence converges") {
    const auto d = make_annulus(0.5, 0.7);
    // j starts at 2: the j = 1 point lies on the inner circle.
    const auto zs = ZeroSet::generated([](std::size_t j) { return std::polar(1.0 - std::pow(2.0, -double(j + 2)), double(j + 2)); });
    const auto res = blaschke_product(d, zs, {1e-6});
    CHECK(res.factors <= 40);
    CHECK(res.last_change < 1e-6);
    CHECK(std::isfinite(res.blaschke_sum));
    CHECK(res.product.period_residual() <= 1e-8);
    CHECK(verify_inner(res.product.as_function(), d).passed);
    // Zeros deep inside the ring are counted exactly.
    CHECK(count_zeros(res.product.as_function(), {0.55, 0.95}) ==
          static_cast<int>(std::count_if(res.product.zeros().begin(), res.product.zeros().end(),
                                         [](cplx z) { return std::abs(z) < 0.95; })));
    // Each factor moves the grid by about 1 - |z_j|, and green() rejects poles
    // within 1e-9 of the circle before 1e-8 is reached.
    try {
      blaschke_product(d, zs, {1e-8});
      FAIL("1e-8 reached");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ConvergenceFail);
    }
  }

  TEST_CASE("blaschke product: non-summable sequence and empty set") {
    const auto d = make_annulus(0.5, 0.7);
    const auto bad = ZeroSet::generated([](std::size_t j) { return std::polar(0.7, double(j)); });
    CHECK_THROWS_AS(blaschke_product(d, bad), Error);
    try {
      blaschke_product(d, bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BlaschkeDivergent);
    }
    const auto one = blaschke_product(d, ZeroSet{});
    for (cplx z : {cplx(0.6), cplx(-0.2, 0.9)}) CHECK(std::abs(one.product(z) - 1.0) <= 1e-14);
  }

  TEST_CASE("finite products carry one zero per point") {
    const auto d = make_annulus(0.5, 0.75);
    const std::vector<cplx> pts{0.7, cplx(0, 0.6), cplx(-0.8, 0.1), cplx(0.3, -0.6)};
    for (std::size_t k = 1; k <= pts.size(); ++k) {
      const auto res = blaschke_product(d, ZeroSet(std::vector<cplx>(pts.begin(), pts.begin() + k)));
      CHECK(count_zeros(res.product.as_function(), full_ring(d)) == static_cast<int>(k));
      CHECK(res.product.period_residual() <= 1e-8);
      CHECK(modulus_deviation(res.product, 1) <= 1e-8 * verify_inner(res.product.as_function(), d).c1);
    }
  }

  TEST_CASE("singular inner function with one atom") {
    const auto d = make_annulus(0.5, 0.7);
    const auto S = singular_inner(d, {{{cplx(1.0), -1.0}}});
    // The full ring would pass within 1e-9 of the atom, where |S| underflows.
    CHECK(count_zeros(S.as_function(), {0.5 + 1e-9, 0.95}) == 0);
    CHECK(modulus_deviation(S, 2, 512) <= 1e-7);
    CHECK(S.period_residual() <= 1e-8);
    // Away from the atom the outer modulus is constant too.
    double lo = INFINITY, hi = 0.0;
    for (int k = 0; k < 256; ++k) {
      const double t = 0.5 + (kTwoPi - 1.0) * k / 255.0;
      const double v = std::abs(S(std::polar(1.0, t)));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(hi - lo <= 1e-7 * hi);
    const double cmax = std::max(S.boundary_moduli().first, S.boundary_moduli().second);
    for (int i = 1; i < 20; ++i)
      for (int k = 0; k < 20; ++k) CHECK(std::abs(S(std::polar(0.5 + 0.5 * i / 20, kTwoPi * k / 20))) <= cmax * (1 + 1e-12));
    CHECK_THROWS_AS(singular_inner(d, {{{cplx(1.0), 0.5}}}), Error);
  }

  TEST_CASE("empty measure gives the period remover, a multiple of z") {
    const auto d = make_annulus(0.5, 0.7);
    const auto S = singular_inner(d, {});
    CHECK(S.lambda() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(S.boundary_moduli().first == doctest::Approx(2.0).epsilon(1e-12));
    const cplx c = S(0.7) / 0.7;
    for (cplx z : {cplx(0.6, 0.3), cplx(-0.9, 0.1), cplx(0.0, -0.55)}) CHECK(std::abs(S(z) / z - c) <= 1e-12);
    CHECK(std::abs(c) == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("verify_inner examples") {
    const double r = 0.5;
    const auto d = make_annulus(r, 0.7);
    const auto z2 = verify_inner([](cplx z) { return z * z; }, d);
    CHECK(z2.c1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(z2.c2 == doctest::Approx(r * r).epsilon(1e-14));
    CHECK(z2.dev1 <= 1e-15);
    CHECK(z2.dev2 <= 1e-15);
    CHECK(z2.passed);
    const auto bad = verify_inner([](cplx z) { return z + 2.0; }, d);
    CHECK_FALSE(bad.passed);
    CHECK(bad.dev1 > 0.5);
  }

  TEST_CASE("orthogonality test") {
    const double r = 0.5;
    const auto d = make_annulus(r, 0.7);
    for (int k : {1, 2, 5}) CHECK(check_orthogonality(LaurentPolynomial::monomial(k), d, 8) <= 1e-12);
    // Negative powers: moments of size ||z^-3||^2 r^-8 cancel to rounding.
    CHECK(check_orthogonality(LaurentPolynomial::monomial(-3), d, 8) <= 1e-12 * oracle::smirnov_norm2(-3, r) * 256);
    // f = 1 + z/2: the n = -1 moment is pi (1 + r) in closed form, the largest.
    const LaurentPolynomial f(0, {1.0, 0.5});
    CHECK(check_orthogonality(f, d, 8) == doctest::Approx(oracle::kPi * (1 + r)).epsilon(1e-12));
    CHECK_FALSE(verify_inner(f, d).passed);

    const auto B = blaschke_factor(d, cplx(0.1, 0.75));
    const auto L = to_laurent(B.as_function(), d, 32);
    CHECK(check_orthogonality(L, d, 8) <= 1e-6);
    CHECK(verify_inner(B.as_function(), d).passed);
  }

  TEST_CASE("inner verification and orthogonality agree on Laurent polynomials") {
    const auto d = make_annulus(0.5, 0.7);
    const std::vector<LaurentPolynomial> cases{LaurentPolynomial::monomial(3), LaurentPolynomial::monomial(-2, 0.4),
                                              LaurentPolynomial(0, {1.0, 0.5}), LaurentPolynomial(-1, {0.2, 0.0, 1.0}),
                                              to_laurent(blaschke_factor(d, 0.7).as_function(), d, 64)};
    for (const auto& f : cases) {
      const bool inner = verify_inner(f, d).passed;
      CHECK(inner == (check_orthogonality(f, d, 8) <= 1e-6));
    }
  }

  TEST_CASE("to_laurent recovers Laurent coefficients") {
    const auto d = make_annulus(0.5, 0.7);
    const LaurentPolynomial p(-3, {0.3, cplx(0, 1), -2.0, 1.0, 0.0, cplx(1, -1)});
    const auto q = to_laurent(p, d, 6, 64);
    for (int n = -6; n <= 6; ++n) CHECK(std::abs(q.coeff(n) - p.coeff(n)) <= 1e-13);
  }

  TEST_CASE("schottky fit of trivial functions") {
    const auto d = make_annulus(0.5, 0.7);
    const auto one = schottky_fit([](cplx) { return cplx(1.0); }, d);
    CHECK(one.lambda1 == 0.0);
    CHECK(one.residual == 0.0);
    const auto z = schottky_fit([](cplx w) { return w; }, d);
    CHECK(z.residual > 1e-3);
  }

  TEST_CASE("quasi-contractive divisor: constant and bounds") {
    const auto d = make_annulus(0.5, 0.7);
    const auto empty = qc_divisor(d, ZeroSet{}, {});
    CHECK(empty.C == doctest::Approx(2.0).epsilon(1e-15));
    const auto [elo, ehi] = boundary_range(empty.G.as_function(), d);
    CHECK(elo == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ehi == doctest::Approx(2.0).epsilon(1e-12));

    const auto q = qc_divisor(d, ZeroSet(std::vector<cplx>{0.7, cplx(0, 0.6)}), {});
    const auto [lo, hi] = boundary_range(q.G.as_function(), d);
    CHECK(lo >= 1.0 - 1e-7);
    CHECK(hi <= 2.0 + 1e-7);

    const auto s = qc_divisor(d, ZeroSet(std::vector<cplx>{cplx(-0.6, 0.2)}), {{{cplx(0.0, 0.5), -0.7}}});
    const auto [slo, shi] = boundary_range(s.G.as_function(), d);
    CHECK(slo >= 1.0 - 1e-7);
    CHECK(shi <= s.C + 1e-7);
  }

  TEST_CASE("division bound check") {
    const auto d = make_annulus(0.5, 0.7);
    const auto q = qc_divisor(d, ZeroSet(std::vector<cplx>{0.7, cplx(0, 0.6)}), {});
    const auto rep = division_bound_check(q.G, q.C, d, 100, 0);
    CHECK(rep.trials == 100);
    CHECK(rep.within_bounds);
    CHECK(rep.max_ratio <= q.C + 1e-6);
    CHECK(rep.min_ratio >= 1 / q.C - 1e-6);
    const auto again = division_bound_check(q.G, q.C, d, 100, 0);
    CHECK(again.max_ratio == rep.max_ratio);

    // Dividing by the unimodular period remover of r = 0.5 with lambda = 0
    // lattice representative: G0 is a constant multiple of 1.
    const auto unit = inner_function(d, {}, {}, -1);
    const auto iso = division_bound_check(unit, 2.0, d, 20, 3);
    CHECK(iso.max_ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(iso.min_ratio == doctest::Approx(1.0).epsilon(1e-9));
  }
}
