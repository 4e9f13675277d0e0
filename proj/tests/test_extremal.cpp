#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "annulus/extremal.hpp"
#include "oracles.hpp"

using namespace annulus;

namespace {

const SpaceTag kE2{SpaceKind::SmirnovArclength, {}};
const SpaceTag kH2{SpaceKind::HardyHarmonicMeasure, {}};
const SpaceTag kA2{SpaceKind::BergmanArea, {}};

double space_norm(const LaurentPolynomial& f, const AnnulusDomain& d, const SpaceTag& tag, int m = 512) {
  return std::sqrt(inner_product(f, f, d, tag, m).real());
}

double grid_deviation(const AnalyticFn& a, const AnalyticFn& b, double r) {
  double dev = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      const cplx z = std::polar(r + (i + 0.5) * (1 - r) / 16, kTwoPi * j / 16);
      dev = std::max(dev, std::abs(a(z) - b(z)));
    }
  return dev;
}

}  // namespace

TEST_SUITE("extremal") {
  TEST_CASE("no zeros: the normalized kernel direction") {
    const auto d = make_annulus(0.5, 0.7);
    for (const auto& tag : {kE2, kA2, kH2}) {
      const ExtremalProblem p{d, tag, 0.7, {}, 24};
      const auto G = solve_extremal(p);
      const auto K = build_kernel(d, tag, 24, 512);
      const auto k = K.section_fn(0.7);
      const cplx k00 = k(0.7);
      CHECK(grid_deviation([&](cplx z) { return G(z); }, [&](cplx z) { return k(z) / k00; }, 0.5) <= 1e-9);
    }
  }

  TEST_CASE("constraints hold and the norm converges to the closed form") {
    const auto d = make_annulus(0.5, 0.7);
    const ExtremalProblem p{d, kA2, 0.7, {-0.7}, 24};
    const auto G = solve_extremal(p);
    CHECK(std::abs(G(-0.7)) <= 1e-12);
    CHECK(std::abs(G(0.7) - 1.0) <= 1e-12);
    // Truncation error decays like (r / 0.7)^{2N}: about 1.6e-7 between 24 and
    // 48, so the doubling check starts at 48.
    auto q = p;
    q.N = 48;
    auto q2 = p;
    q2.N = 96;
    const double n48 = space_norm(solve_extremal(q), d, kA2), n96 = space_norm(solve_extremal(q2), d, kA2);
    CHECK(std::abs(n48 - n96) <= 1e-8);
    // 1 / sqrt(k00 - |k01|^2 / k11), kernel values from mpmath.
    CHECK(n48 == doctest::Approx(0.30856616776109156837).epsilon(1e-9));
  }

  TEST_CASE("closed-form norm from the diagonal kernel series") {
    const double r = 0.5;
    const auto d = make_annulus(r, 0.7);
    const cplx z0(0.6, 0.3), z1(-0.2, -0.75);
    for (auto [tag, nn] : {std::pair{kE2, +[](int n, double rr) { return oracle::smirnov_norm2(n, rr); }},
                           std::pair{kA2, +[](int n, double rr) { return oracle::bergman_norm2(n, rr); }}}) {
      const cplx k00 = oracle::diagonal_kernel(z0, z0, r, 200, nn), k11 = oracle::diagonal_kernel(z1, z1, r, 200, nn),
                 k01 = oracle::diagonal_kernel(z0, z1, r, 200, nn);
      const double expect = 1.0 / std::sqrt(k00.real() - std::norm(k01) / k11.real());
      const auto G = solve_extremal({d, tag, z0, {z1}, 64});
      CHECK(space_norm(G, d, tag) == doctest::Approx(expect).epsilon(1e-9));
    }
  }

  TEST_CASE("optimality: orthogonal to everything vanishing at the nodes") {
    const auto d = make_annulus(0.5, 0.7);
    const int N = 12;
    for (const auto& tag : {kE2, kH2, kA2}) {
      const ExtremalProblem p{d, tag, cplx(0.7, 0.1), {cplx(0, 0.6), cplx(-0.8, 0.2)}, N};
      const auto G = solve_extremal(p);
      // Null space of the evaluation rows in the bounded basis z^n / max(1, r^n).
      Eigen::MatrixXcd C(3, 2 * N + 1);
      Eigen::VectorXd s(2 * N + 1);
      for (int n = -N; n <= N; ++n) s(n + N) = std::max(1.0, std::pow(0.5, n));
      int row = 0;
      for (cplx z : {p.base, p.zeros[0], p.zeros[1]}) {
        for (int n = -N; n <= N; ++n) C(row, n + N) = std::pow(z, n) / s(n + N);
        ++row;
      }
      const Eigen::MatrixXcd Z = Eigen::FullPivLU<Eigen::MatrixXcd>(C).kernel();
      REQUIRE(Z.cols() == 2 * N - 2);
      const double gn = space_norm(G, d, tag);
      double worst = 0.0;
      for (int c = 0; c < Z.cols(); ++c) {
        LaurentPolynomial h = LaurentPolynomial::zero(-N, N);
        for (int n = -N; n <= N; ++n) h[n] = Z(n + N, c) / s(n + N);
        worst = std::max(worst, std::abs(inner_product(G, h, d, tag, 512)) / (gn * space_norm(h, d, tag)));
      }
      CHECK(worst <= 1e-9);
    }
  }

  TEST_CASE("maximizer and minimizer agree after normalization") {
    const auto d = make_annulus(0.5, 0.7);
    for (const auto& tag : {kE2, kH2, kA2}) {
      const ExtremalProblem p{d, tag, 0.7, {cplx(0, 0.6)}, 32};
      const auto G = solve_extremal(p);
      const auto F = solve_extremal_sup(p);
      CHECK(std::abs(F(0.7).imag()) <= 1e-12 * std::abs(F(0.7)));
      CHECK(F(0.7).real() > 0.0);
      CHECK(space_norm(F, d, tag) == doctest::Approx(1.0).epsilon(1e-10));
      const cplx f0 = F(0.7);
      CHECK(grid_deviation([&](cplx z) { return F(z) / f0; }, [&](cplx z) { return G(z); }, 0.5) <= 1e-9);
    }
  }

  TEST_CASE("extremal norm grows with each added constraint") {
    const auto d = make_annulus(0.5, 0.7);
    for (const auto& tag : {kE2, kA2}) {
      std::vector<cplx> zs;
      double last = space_norm(solve_extremal({d, tag, 0.7, zs, 32}), d, tag);
      for (cplx z : {cplx(0, 0.6), cplx(-0.7), cplx(0.2, -0.8)}) {
        zs.push_back(z);
        const double n = space_norm(solve_extremal({d, tag, 0.7, zs, 32}), d, tag);
        CHECK(n > last);
        last = n;
      }
    }
  }

  TEST_CASE("degenerate problems are rejected") {
    const auto d = make_annulus(0.5, 0.7);
    CHECK_THROWS_AS(solve_extremal({d, kA2, 0.7, {0.7}, 16}), Error);
    CHECK_THROWS_AS(solve_extremal({d, kA2, 0.7, {0.3}, 16}), Error);
    CHECK_THROWS_AS(solve_extremal({d, kA2, 0.7, {}, 0}), Error);
    try {
      solve_extremal({d, kA2, 0.7, {cplx(0, 0.6), cplx(0, 0.6)}, 16});
      FAIL("repeated zeros accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularConstraints);
    }
    CHECK_THROWS_AS(extremal_identity_check({d, kA2, 0.7, {}, 16}), Error);
  }

  TEST_CASE("kernel-product identity, resolved truncation") {
    const auto d = make_annulus(0.5, 0.7);
    for (const auto& tag : {kE2, kA2}) CHECK(extremal_identity_check({d, tag, 0.7, {cplx(0, 0.6)}, 64}) <= 1e-6);
  }

  TEST_CASE("reproducing property of the Hardy extremal") {
    const auto d = make_annulus(0.5, 0.7);
    const ExtremalProblem p{d, kH2, 0.7, {cplx(0, 0.6)}, 64};
    const auto G = solve_extremal(p);
    CHECK(repro_fact_check(G, p) <= 1e-7);
    // F = 1 alone: the normalized extremal has unit norm.
    auto q = p;
    q.N = 1;
    CHECK(repro_fact_check(G, q) <= 1e-7);
    const LaurentPolynomial bad(0, {1.0, 1.0});
    CHECK(repro_fact_check(bad, p) > 1e-2);
    CHECK_THROWS_AS(repro_fact_check(G, {d, kA2, 0.7, {}, 8}), Error);
  }

  TEST_CASE("candidate divisor vanishes once, at z1") {
    const auto d = make_annulus(0.5, 0.6);
    const auto c = candidate_divisor(d, 0.8);
    CHECK(count_zeros(c.G, full_ring(d)) == 1);
    const auto loc = locate_zeros(c.G, d, 1);
    REQUIRE(loc.locations.size() == 1);
    CHECK(std::abs(loc.locations[0] - 0.8) <= 1e-8);
    CHECK(std::abs(c.undivided(c.kernel_zero)) <= 1e-9);
    CHECK_FALSE(verify_inner(c.G, d).passed);
    CHECK_THROWS_AS(candidate_divisor(d, 0.6), Error);
  }

  TEST_CASE("kernel zero moves continuously with the base point") {
    std::vector<cplx> path;
    for (int k = 0; k < 5; ++k) path.push_back(candidate_divisor(make_annulus(0.5, 0.6 + 0.02 * k), 0.8).kernel_zero);
    for (std::size_t k = 1; k < path.size(); ++k) CHECK(std::abs(path[k] - path[k - 1]) < 0.1);
  }

  TEST_CASE("operator norm for G = z - z1 against hill climbing") {
    const double r = 0.5;
    const auto d = make_annulus(r, 0.7);
    const cplx z1(0.0, 0.8);
    const int N = 8, n = 2 * N + 1;
    const double est = quasicontract_norm([z1](cplx z) { return z - z1; }, z1, d, N);

    // f = (z - z1) sum a_n z^n and f / G0 = ||G|| sum a_n z^n: both Grams in
    // closed form from the monomial norms.
    auto nn = [r](int k) { return oracle::bergman_norm2(k, r); };
    const double g2 = nn(1) + std::norm(z1) * nn(0);
    Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXd D(n);
    for (int j = -N; j <= N; ++j) {
      D(j + N) = g2 * nn(j);
      T(j + N, j + N) = nn(j + 1) + std::norm(z1) * nn(j);
      if (j < N) {
        // <z^{j+1} - z1 z^j, z^{j+2} - z1 z^{j+1}> = -conj(z1) ||z^{j+1}||^2
        T(j + N, j + N + 1) = -z1 * nn(j + 1);
        T(j + N + 1, j + N) = -std::conj(z1) * nn(j + 1);
      }
    }
    auto rayleigh = [&](const Eigen::VectorXcd& a) {
      return (a.adjoint() * D.cast<cplx>().asDiagonal() * a)(0).real() / (a.adjoint() * T * a)(0).real();
    };
    // (1+1) evolution strategy with the one-fifth success rule, searching in
    // coordinates b = sqrt(diag T) a so the quotient is roughly isotropic.
    const Eigen::VectorXd pre = T.diagonal().real().cwiseSqrt().cwiseInverse();
    std::mt19937 gen(0);
    std::normal_distribution<double> nd;
    auto draw = [&] {
      Eigen::VectorXcd a(n);
      for (auto& x : a) x = {nd(gen), nd(gen)};
      return a;
    };
    auto value = [&](const Eigen::VectorXcd& b) { return rayleigh(pre.cast<cplx>().cwiseProduct(b)); };
    Eigen::VectorXcd best = draw();
    double bv = value(best), step = 0.3;
    for (int it = 0; it < 10000; ++it) {
      const Eigen::VectorXcd c = best + step * best.norm() / std::sqrt(2.0 * n) * draw();
      const double v = value(c);
      if (v > bv) {
        best = c;
        bv = v;
        step *= 1.5;
      } else {
        step *= std::pow(1.5, -0.25);
      }
    }
    const double brute = std::sqrt(bv);
    CHECK(brute <= est * (1 + 1e-9));
    CHECK(brute >= 0.98 * est);
  }

  TEST_CASE("operator norm estimate ignores constant multiples of G") {
    const auto d = make_annulus(0.5, 0.6);
    const cplx z1(0.0, 0.8);
    auto G = [z1](cplx z) { return (z - z1) * (1.0 + 0.2 * z); };
    const double a = quasicontract_norm(G, z1, d, 8);
    const double b = quasicontract_norm([&](cplx z) { return cplx(-3.0, 2.0) * G(z); }, z1, d, 8);
    CHECK(b == doctest::Approx(a).epsilon(1e-10));
  }

  TEST_CASE("ladder reports flag an extraneous zero") {
    const auto d = make_annulus(0.5, 0.6);
    const auto c = candidate_divisor(d, 0.8);
    const auto control = quasicontract_estimate(c.undivided, 0.8, d, {8, 16});
    CHECK(control.extraneous_zero);
    CHECK(control.ring_zero_count == 2);
    CHECK(control.notes.find("EXTRANEOUS_ZERO") != std::string::npos);
    CHECK(control.per_truncation[1].second >= control.per_truncation[0].second);
    const auto cand = quasicontract_estimate(c.G, 0.8, d, {8, 16});
    CHECK_FALSE(cand.extraneous_zero);
    CHECK(cand.ring_zero_count == 1);
    for (const auto& [N, v] : cand.per_truncation) CHECK((std::isfinite(v) && v > 0.0));
  }
}
