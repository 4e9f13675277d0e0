#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "annulus/harmonic.hpp"
#include "annulus/kernels.hpp"

namespace annulus {

/// Zeros with multiplicity by repetition. Either a finite list or a lazily
/// generated sequence (index 0, 1, 2, ...).
class ZeroSet {
public:
  ZeroSet() = default;
  ZeroSet(std::vector<cplx> points) : points_(std::move(points)) {}  // NOLINT(implicit)
  static ZeroSet generated(std::function<cplx(std::size_t)> gen);

  bool finite() const noexcept { return !gen_; }
  bool empty() const noexcept { return finite() && points_.empty(); }
  /// Number of points of a finite set.
  std::size_t size() const noexcept { return points_.size(); }
  cplx operator[](std::size_t j) const { return gen_ ? gen_(j) : points_.at(j); }
  std::vector<cplx> prefix(std::size_t k) const;

  /// sum of g(z_j, z0) over the first k points.
  double blaschke_sum(const AnnulusDomain& domain, cplx z0, std::size_t k, int N = 64) const;

private:
  std::vector<cplx> points_;
  std::function<cplx(std::size_t)> gen_;
};

struct SingularAtom {
  cplx point;   // on |z| = 1 or |z| = r
  double mass;  // <= 0
};

struct AtomicSingularMeasure {
  std::vector<SingularAtom> atoms;
};

/// An inner function on the annulus assembled from finitely many zeros and
/// boundary atoms,
///   f(z) = phase * exp(-sum_j p_j(z) + sum_k m_k F_k(z) + lambda (omega_1 + i omega~_1)),
/// where p_j is the completed Green's function with pole z_j and F_k the
/// completed Poisson kernel at atom k. The Log z parts of all factors are
/// collected into an integer power of z, so evaluation is single-valued.
/// |f| = e^lambda on the outer circle and 1 on the inner circle.
class InnerFunctionSpec {
public:
  const AnnulusDomain& domain() const noexcept { return domain_; }
  const std::vector<cplx>& zeros() const noexcept { return zeros_; }
  const AtomicSingularMeasure& singular() const noexcept { return mu_; }
  double lambda() const noexcept { return lambda_; }
  /// (outer, inner) boundary moduli (c_1, c_2).
  std::pair<double, double> boundary_moduli() const noexcept { return {std::exp(lambda_), 1.0}; }
  int z_power() const noexcept { return kappa_; }
  cplx phase() const noexcept { return phase_; }
  /// Distance of the exponent's conjugate period from 2 pi Z, worst of the
  /// closed-form and loop-integrated values.
  double period_residual() const noexcept { return period_residual_; }
  /// Loop-integrated conjugate period of the exponent (including lambda).
  double measured_period() const noexcept { return measured_period_; }

  cplx operator()(cplx z) const;
  AnalyticFn as_function() const;
  /// Re of the exponent, i.e. log|f| away from the zeros.
  double log_modulus(cplx z) const;
  double log_modulus_radial_derivative(cplx z) const;

private:
  friend InnerFunctionSpec inner_function(const AnnulusDomain&, const std::vector<cplx>&,
                                          const AtomicSingularMeasure&, int, int);
  explicit InnerFunctionSpec(const AnnulusDomain& d) : domain_(d) {}
  cplx raw(cplx z) const;

  AnnulusDomain domain_;
  std::vector<cplx> zeros_;
  AtomicSingularMeasure mu_;
  std::vector<GreenFunction> greens_;
  std::vector<PoissonKernel> poisson_;
  double lambda_ = 0.0;
  int kappa_ = 0;
  cplx phase_{1.0};
  double period_residual_ = 0.0;
  double measured_period_ = 0.0;
};

/// General constructor. lambda is the representative in (0, log(1/r)] of the
/// period-cancelling class, moved by lattice_shift * log(1/r). green_N = 0
/// picks a truncation from r. Phase makes f(base) > 0 when f(base) != 0.
InnerFunctionSpec inner_function(const AnnulusDomain& domain, const std::vector<cplx>& zeros,
                                 const AtomicSingularMeasure& mu, int lattice_shift = 0, int green_N = 0);

/// Green's function truncation giving ~1e-17 corrector tails for this r.
int green_truncation(const AnnulusDomain& domain);

InnerFunctionSpec blaschke_factor(const AnnulusDomain& domain, cplx a);

struct BlaschkeOptions {
  double tol = 1e-8;
  std::size_t max_factors = 400;
  double sum_bound = 100.0;  // on partial sums of g(z_j, base)
};

struct BlaschkeResult {
  InnerFunctionSpec product;
  std::size_t factors;
  double blaschke_sum;
  double last_change;  // grid change caused by the last appended factor
};

/// Infinite (lazy) sets are truncated once an appended factor moves the
/// product by less than tol on a 16x16 interior polar grid; finite sets use every point.
/// ConvergenceFail if the zeros get within 1e-9 of the boundary first.
BlaschkeResult blaschke_product(const AnnulusDomain& domain, const ZeroSet& zeros,
                                const BlaschkeOptions& opt = {});

InnerFunctionSpec singular_inner(const AnnulusDomain& domain, const AtomicSingularMeasure& mu);

struct InnerReport {
  double c1, c2;      // mean modulus on outer / inner circle
  double dev1, dev2;  // max deviation from the mean
  bool passed;        // dev_j <= 1e-6 c_j
};

/// Samples at half-step angles 2 pi (k + 1/2) / m so atoms at multiples of
/// 2 pi / m are never hit.
InnerReport verify_inner(const AnalyticFn& f, const AnnulusDomain& domain, int m = 512);

/// max over 0 < |n| <= N of |<z^n f, f>| in E^2 (arclength).
double check_orthogonality(const LaurentPolynomial& f, const AnnulusDomain& domain, int N);

/// Laurent coefficients -N..N by trapezoid rule on the outer circle (n >= 0)
/// and the inner circle (n < 0). f must be analytic on the closed annulus.
LaurentPolynomial to_laurent(const AnalyticFn& f, const AnnulusDomain& domain, int N, int m = 1024);

struct SchottkyFit {
  double lambda1;
  double residual;  // E^2 boundary norm of |f|^2 - 1 - lambda1 s_1
};

SchottkyFit schottky_fit(const AnalyticFn& f, const AnnulusDomain& domain, int m = 512, int N = 64);

struct QcDivisor {
  InnerFunctionSpec G;
  double C;  // e^{log(1/r)} = 1/r
};

QcDivisor qc_divisor(const AnnulusDomain& domain, const ZeroSet& zeros, const AtomicSingularMeasure& mu);

struct DivisionReport {
  double max_ratio;  // max ||h|| / ||G0 h||
  double min_ratio;
  int trials;
  bool within_bounds;  // 1/C - 1e-6 <= ratio <= C + 1e-6 for every trial
};

/// Random Laurent h (degree window -degree..degree, seeded), f = G0 h with
/// G0 = G / ||G||; ratios of H^2 (harmonic measure) norms.
DivisionReport division_bound_check(const InnerFunctionSpec& G, double C, const AnnulusDomain& domain,
                                    int trials, std::uint64_t seed = 0, int degree = 8, int m = 512);

}  // namespace annulus
