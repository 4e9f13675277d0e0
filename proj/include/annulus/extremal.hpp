#pragma once

#include <string>
#include <utility>
#include <vector>

#include "annulus/inner.hpp"
#include "annulus/kernels.hpp"

namespace annulus {

struct ExtremalProblem {
  AnnulusDomain domain;
  SpaceTag space;
  cplx base;                // value 1 here
  std::vector<cplx> zeros;  // value 0 here
  int N = 32;
};

/// Least-norm g in the Laurent window -N..N with g(base) = 1 and g = 0 at the
/// zeros, from the bordered system of the quadratic form.
LaurentPolynomial solve_extremal(const ExtremalProblem& p, int m = 512);

/// Unit-norm f vanishing at the zeros with f(base) > 0 maximal, computed as
/// the normalized projection of the kernel section at base.
LaurentPolynomial solve_extremal_sup(const ExtremalProblem& p, int m = 512);

/// Max deviation on a 32x32 polar grid between solve_extremal and
/// B k^{|B|^2}(., base) / (B k^{|B|^2})(base), B the Blaschke factor of the single zero.
double extremal_identity_check(const ExtremalProblem& p, int m = 512);

/// max over F = z^n / sup|z^n|, |n| <= N/2, of |integral F |G|^2 d omega - F(base)|
/// with G scaled to unit Hardy norm.
double repro_fact_check(const LaurentPolynomial& G, const ExtremalProblem& p, int m = 512);

struct CandidateDivisor {
  AnalyticFn G;          // B_{z1} k / B_{w*}
  AnalyticFn undivided;  // B_{z1} k
  cplx kernel_zero;      // w*
  cplx z1;
  int truncation = 0;  // kernel truncation actually used
};

/// Bergman tag: weighted kernel with weight |B_{z1}|^2 at the domain's base
/// point, divided by the Blaschke factor of its own zero. N is a starting
/// truncation, doubled (up to 256) until the kernel has one ring zero.
CandidateDivisor candidate_divisor(const AnnulusDomain& domain, cplx z1, int N = 32, int m = 512);

struct DivisorReport {
  double constant_estimate = 0.0;
  std::vector<std::pair<int, double>> per_truncation;
  std::vector<cplx> zero_locations_of_kernel;
  int ring_zero_count = 0;
  bool extraneous_zero = false;
  std::string notes;
};

/// Operator norm of f -> f/G on {f in A^2 : f(z1) = 0}, truncated to the basis
/// (z - z1) z^n, n = -N..N, for each N of the ladder. G is scaled to unit A^2
/// norm first, so the estimate does not depend on constant multiples of G.
DivisorReport quasicontract_estimate(const AnalyticFn& G, cplx z1, const AnnulusDomain& domain,
                                     const std::vector<int>& ladder = {8, 16, 24, 32}, int m = 512);

/// Single truncation of the above.
double quasicontract_norm(const AnalyticFn& G, cplx z1, const AnnulusDomain& domain, int N, int m = 512);

}  // namespace annulus
