#include "annulus/inner.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "annulus/spaces.hpp"

namespace annulus {

ZeroSet ZeroSet::generated(std::function<cplx(std::size_t)> gen) {
  ZeroSet z;
  z.gen_ = std::move(gen);
  return z;
}

std::vector<cplx> ZeroSet::prefix(std::size_t k) const {
  if (finite()) k = std::min(k, points_.size());
  std::vector<cplx> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) out.push_back((*this)[j]);
  return out;
}

double ZeroSet::blaschke_sum(const AnnulusDomain& domain, cplx z0, std::size_t k, int N) const {
  const GreenFunction g = green(domain, z0, N);
  double s = 0.0;
  for (cplx a : prefix(k)) s += g(a);
  return s;
}

int green_truncation(const AnnulusDomain& domain) {
  const double n = std::ceil(std::log(1e-17) / std::log(domain.inner_radius()));
  return static_cast<int>(std::clamp(n, 16.0, 512.0));
}

cplx InnerFunctionSpec::raw(cplx z) const {
  cplx v = std::pow(z, kappa_);
  cplx e = lambda_;
  for (const auto& g : greens_) v *= g.exp_neg_completion_without_log(z);
  for (std::size_t k = 0; k < poisson_.size(); ++k) e += mu_.atoms[k].mass * poisson_[k].completion_without_log(z);
  return v * std::exp(e);
}

cplx InnerFunctionSpec::operator()(cplx z) const { return phase_ * raw(z); }

AnalyticFn InnerFunctionSpec::as_function() const {
  return [self = *this](cplx z) { return self(z); };
}

double InnerFunctionSpec::log_modulus(cplx z) const {
  double s = lambda_ * harmonic_measure(domain_, 1)(z);
  for (const auto& g : greens_) s -= g(z);
  for (std::size_t k = 0; k < poisson_.size(); ++k) s += mu_.atoms[k].mass * poisson_[k](z);
  return s;
}

namespace {

// d/d rho of -sum g_j + sum m_k P_k.
double exponent_radial_derivative(const std::vector<GreenFunction>& greens,
                                  const std::vector<PoissonKernel>& poisson, const AtomicSingularMeasure& mu,
                                  cplx z) {
  const double rho = std::abs(z);
  double s = 0.0;
  for (const auto& g : greens) s -= g.radial_derivative(z);
  for (std::size_t k = 0; k < poisson.size(); ++k)
    s += mu.atoms[k].mass * (poisson[k].derivative(z) * z).real() / rho;
  return s;
}

// Midpoint of the widest radial gap between r, the zero moduli, and 1.
double loop_radius(const AnnulusDomain& domain, const std::vector<cplx>& zeros) {
  std::vector<double> radii{domain.inner_radius(), 1.0};
  for (cplx a : zeros) radii.push_back(std::abs(a));
  std::sort(radii.begin(), radii.end());
  double best = 0.0, at = 0.5 * (domain.inner_radius() + 1.0);
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (radii[i + 1] - radii[i] > best) {
      best = radii[i + 1] - radii[i];
      at = 0.5 * (radii[i] + radii[i + 1]);
    }
  return at;
}

double distance_to_lattice(double x, double spacing) { return std::abs(x - spacing * std::round(x / spacing)); }

}  // namespace

double InnerFunctionSpec::log_modulus_radial_derivative(cplx z) const {
  return exponent_radial_derivative(greens_, poisson_, mu_, z) + lambda_ / (domain_.log_modulus() * std::abs(z));
}

InnerFunctionSpec inner_function(const AnnulusDomain& domain, const std::vector<cplx>& zeros,
                                 const AtomicSingularMeasure& mu, int lattice_shift, int green_N) {
  InnerFunctionSpec f(domain);
  const int N = green_N > 0 ? green_N : green_truncation(domain);
  const double L = domain.log_modulus();

  f.zeros_ = zeros;
  f.mu_ = mu;
  double log_coeff = 0.0;  // coefficient of Log z in the exponent, before lambda
  for (cplx a : zeros) {
    f.greens_.push_back(green(domain, a, N));
    log_coeff -= f.greens_.back().log_coefficient();
  }
  for (const auto& atom : mu.atoms) {
    if (!(atom.mass <= 0.0) || !std::isfinite(atom.mass))
      throw Error(ErrorCode::RejectArgument, "singular measure masses must be finite and non-positive");
    f.poisson_.emplace_back(domain, atom.point);
    log_coeff += atom.mass * f.poisson_.back().clog();
  }

  // lambda cancels the loop-integrated period; the closed-form Log
  // coefficient then has to come out integral.
  const double rho = loop_radius(domain, zeros);
  double residual = INFINITY;
  for (int m = std::max(2048, 4 * N); m <= std::max(8192, 16 * N) && residual > 1e-8; m *= 4) {
    const double phi = loop_period(
        [&](cplx z) { return exponent_radial_derivative(f.greens_, f.poisson_, f.mu_, z); }, rho, m);
    double frac = -phi / kTwoPi - std::floor(-phi / kTwoPi);
    if (frac < 1e-10 || frac > 1.0 - 1e-10) frac = 1.0;
    f.lambda_ = L * (frac + lattice_shift);
    f.measured_period_ = phi + kTwoPi * f.lambda_ / L;
    const double total = log_coeff + f.lambda_ / L;
    f.kappa_ = static_cast<int>(std::lround(total));
    residual = std::max(distance_to_lattice(f.measured_period_, kTwoPi), kTwoPi * std::abs(total - f.kappa_));
  }
  f.period_residual_ = residual;
  if (residual > 1e-8) {
    std::ostringstream os;
    os << "period residual " << residual << " above 1e-8";
    throw Error(ErrorCode::PeriodUnresolved, os.str());
  }

  const cplx v = f.raw(domain.base_point());
  if (std::abs(v) > 0.0 && std::isfinite(std::abs(v))) f.phase_ = std::conj(v) / std::abs(v);
  return f;
}

InnerFunctionSpec blaschke_factor(const AnnulusDomain& domain, cplx a) { return inner_function(domain, {a}, {}); }

BlaschkeResult blaschke_product(const AnnulusDomain& domain, const ZeroSet& zeros, const BlaschkeOptions& opt) {
  const double r = domain.inner_radius();
  if (zeros.empty()) return {inner_function(domain, {}, {}, -1), 0, 0.0, 0.0};

  std::vector<cplx> grid;
  for (int i = 0; i < 16; ++i)
    for (int k = 0; k < 16; ++k) grid.push_back(std::polar(r + (i + 0.5) * (1.0 - r) / 16, kTwoPi * (k + 0.5) / 16));
  std::vector<cplx> P(grid.size(), cplx{1.0});

  const GreenFunction g0 = green(domain, domain.base_point(), green_truncation(domain));
  double sum = 0.0, change = INFINITY;
  std::size_t used = 0;
  for (std::size_t j = 0;; ++j) {
    if (zeros.finite() && j >= zeros.size()) break;
    if (j >= opt.max_factors) {
      std::ostringstream os;
      os << "no convergence after " << j << " factors (last change " << change << ")";
      throw Error(ErrorCode::BlaschkeDivergent, os.str());
    }
    const cplx a = zeros[j];
    if (!zeros.finite() && domain.contains(a) && domain.boundary_distance(a) < 1e-9) {
      std::ostringstream os;
      os << "zeros reached within 1e-9 of the boundary after " << j << " factors before the tolerance " << opt.tol
         << " was met (last change " << change << ")";
      throw Error(ErrorCode::ConvergenceFail, os.str());
    }
    const InnerFunctionSpec b = blaschke_factor(domain, a);
    sum += g0(a);
    if (sum > opt.sum_bound) {
      std::ostringstream os;
      os << "partial Blaschke sum " << sum << " exceeds " << opt.sum_bound << " after " << j + 1 << " zeros";
      throw Error(ErrorCode::BlaschkeDivergent, os.str());
    }
    change = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const cplx v = b(grid[i]);
      change = std::max(change, std::abs(P[i]) * std::abs(v - 1.0));
      P[i] *= v;
    }
    used = j + 1;
    if (!zeros.finite() && change < opt.tol) break;
  }
  return {inner_function(domain, zeros.prefix(used), {}), used, sum, change};
}

InnerFunctionSpec singular_inner(const AnnulusDomain& domain, const AtomicSingularMeasure& mu) {
  return inner_function(domain, {}, mu);
}

InnerReport verify_inner(const AnalyticFn& f, const AnnulusDomain& domain, int m) {
  if (m < 4) throw Error(ErrorCode::RejectArgument, "verify_inner needs m >= 4");
  InnerReport rep{};
  for (int c = 1; c <= 2; ++c) {
    const double rho = c == 1 ? 1.0 : domain.inner_radius();
    std::vector<double> mod(static_cast<std::size_t>(m));
    double mean = 0.0;
    for (int k = 0; k < m; ++k) {
      mod[static_cast<std::size_t>(k)] = std::abs(f(std::polar(rho, kTwoPi * (k + 0.5) / m)));
      mean += mod[static_cast<std::size_t>(k)];
    }
    mean /= m;
    double dev = 0.0;
    for (double v : mod) dev = std::max(dev, std::abs(v - mean));
    (c == 1 ? rep.c1 : rep.c2) = mean;
    (c == 1 ? rep.dev1 : rep.dev2) = dev;
  }
  rep.passed = rep.dev1 <= 1e-6 * rep.c1 && rep.dev2 <= 1e-6 * rep.c2;
  return rep;
}

double check_orthogonality(const LaurentPolynomial& f, const AnnulusDomain& domain, int N) {
  if (N < 1) throw Error(ErrorCode::RejectArgument, "check_orthogonality needs N >= 1");
  const int deg = std::max(std::abs(f.lo()), std::abs(f.hi()));
  const int m = 4 * (N + deg) + 16;
  std::vector<cplx> moments(static_cast<std::size_t>(2 * N + 1));
  for (int c = 1; c <= 2; ++c) {
    const double rho = c == 1 ? 1.0 : domain.inner_radius();
    for (const auto& node : circle_nodes(rho, m)) {
      const double w = node.w * std::norm(f(node.z));
      cplx p = 1.0, q = 1.0;
      const cplx iz = 1.0 / node.z;
      for (int n = 1; n <= N; ++n) {
        p *= node.z;
        q *= iz;
        moments[static_cast<std::size_t>(N + n)] += w * p;
        moments[static_cast<std::size_t>(N - n)] += w * q;
      }
    }
  }
  double worst = 0.0;
  for (int n = -N; n <= N; ++n)
    if (n != 0) worst = std::max(worst, std::abs(moments[static_cast<std::size_t>(N + n)]));
  return worst;
}

LaurentPolynomial to_laurent(const AnalyticFn& f, const AnnulusDomain& domain, int N, int m) {
  if (m < 2 * N + 2) throw Error(ErrorCode::RejectArgument, "to_laurent needs m >= 2N+2");
  LaurentPolynomial L = LaurentPolynomial::zero(-N, N);
  for (int c = 1; c <= 2; ++c) {
    const double rho = c == 1 ? 1.0 : domain.inner_radius();
    for (int k = 0; k < m; ++k) {
      const double t = kTwoPi * k / m;
      const cplx v = f(std::polar(rho, t)) / static_cast<double>(m);
      if (c == 1)
        for (int n = 0; n <= N; ++n) L[n] += v * std::polar(1.0, -n * t);
      else
        for (int n = 1; n <= N; ++n) L[-n] += v * std::polar(std::pow(rho, n), n * t);
    }
  }
  return L;
}

SchottkyFit schottky_fit(const AnalyticFn& f, const AnnulusDomain& domain, int m, int N) {
  const GreenFunction g = green(domain, domain.base_point(), N);
  const auto nodes = boundary_nodes(domain, m);
  std::vector<double> s(nodes.size()), d(nodes.size());
  double ss = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    s[i] = schottky(g, 1, nodes[i]);
    d[i] = std::norm(f(nodes[i].point)) - 1.0;
    ss += nodes[i].weight * s[i] * s[i];
    sd += nodes[i].weight * s[i] * d[i];
  }
  SchottkyFit fit{sd / ss, 0.0};
  double res = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double e = d[i] - fit.lambda1 * s[i];
    res += nodes[i].weight * e * e;
  }
  fit.residual = std::sqrt(res);
  return fit;
}

QcDivisor qc_divisor(const AnnulusDomain& domain, const ZeroSet& zeros, const AtomicSingularMeasure& mu) {
  std::vector<cplx> pts;
  if (zeros.finite())
    pts = zeros.prefix(zeros.size());
  else
    pts = zeros.prefix(blaschke_product(domain, zeros).factors);
  return {inner_function(domain, pts, mu), std::exp(domain.log_modulus())};
}

DivisionReport division_bound_check(const InnerFunctionSpec& G, double C, const AnnulusDomain& domain,
                                    int trials, std::uint64_t seed, int degree, int m) {
  if (trials < 1) throw Error(ErrorCode::RejectArgument, "division_bound_check needs trials >= 1");
  SpaceTag hardy{SpaceKind::HardyHarmonicMeasure, {}};
  const auto measure = space_measure(domain, hardy, m);
  std::vector<cplx> gv(measure.size());
  double gn = 0.0;
  for (std::size_t i = 0; i < measure.size(); ++i) {
    gv[i] = G(measure[i].z);
    gn += measure[i].w * std::norm(gv[i]);
  }
  gn = std::sqrt(gn);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  DivisionReport rep{0.0, INFINITY, trials, false};
  for (int t = 0; t < trials; ++t) {
    std::vector<cplx> c(static_cast<std::size_t>(2 * degree + 1));
    for (auto& x : c) x = {nd(rng), nd(rng)};
    const LaurentPolynomial h(-degree, c);
    double hn = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < measure.size(); ++i) {
      const cplx hv = h(measure[i].z);
      hn += measure[i].w * std::norm(hv);
      fn += measure[i].w * std::norm(gv[i] / gn * hv);
    }
    const double ratio = std::sqrt(hn / fn);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    rep.min_ratio = std::min(rep.min_ratio, ratio);
  }
  rep.within_bounds = rep.max_ratio <= C + 1e-6 && rep.min_ratio >= 1.0 / C - 1e-6;
  return rep;
}

}  // namespace annulus
