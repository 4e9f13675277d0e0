#include "annulus/harmonic.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace annulus {

namespace {

cplx log_branch(cplx z) {
  double t = std::arg(z);
  if (t < 0.0) t += kTwoPi;
  return {std::log(std::abs(z)), t};
}

LaurentPolynomial laurent_from_modes(const HarmonicRepresentation::Modes& modes) {
  int top = 0;
  for (const auto& [n, ab] : modes) top = std::max(top, std::abs(n));
  LaurentPolynomial L = LaurentPolynomial::zero(-top, top);
  for (const auto& [n, ab] : modes) {
    const auto& [A, B] = ab;
    const int k = std::abs(n);
    if (n > 0) {
      L[k] += A;
      L[-k] += std::conj(B);
    } else {
      // Re[(A rho^k + B rho^-k) e^{-ik theta}] = Re[conj(A) z^k + B z^-k]
      L[k] += std::conj(A);
      L[-k] += B;
    }
  }
  return L;
}

}  // namespace

cplx AnalyticCompletion::operator()(cplx z) const { return c0 + clog * log_branch(z) + laurent(z); }

cplx AnalyticCompletion::derivative(cplx z) const { return clog / z + laurent.derivative()(z); }

bool AnalyticCompletion::exp_single_valued(double k, double tol) const noexcept {
  const double p = k * clog;
  return std::abs(p - std::round(p)) <= tol;
}

HarmonicRepresentation::HarmonicRepresentation(double c0, double clog, Modes modes)
    : c0_(c0), clog_(clog), modes_(std::move(modes)) {
  modes_.erase(0);
  completion_.c0 = c0_;
  completion_.clog = clog_;
  completion_.laurent = laurent_from_modes(modes_);
  dlaurent_ = completion_.laurent.derivative();
}

double HarmonicRepresentation::operator()(cplx z) const {
  return c0_ + clog_ * std::log(std::abs(z)) + completion_.laurent(z).real();
}

double HarmonicRepresentation::radial_derivative(cplx z) const {
  const double rho = std::abs(z);
  return clog_ / rho + (dlaurent_(z) * z).real() / rho;
}

HarmonicRepresentation HarmonicRepresentation::scaled(double s) const {
  Modes m;
  for (const auto& [n, ab] : modes_) m[n] = {s * ab.first, s * ab.second};
  return {s * c0_, s * clog_, std::move(m)};
}

HarmonicRepresentation operator+(const HarmonicRepresentation& a, const HarmonicRepresentation& b) {
  auto m = a.modes_;
  for (const auto& [n, ab] : b.modes_) {
    auto& slot = m[n];
    slot.first += ab.first;
    slot.second += ab.second;
  }
  return {a.c0_ + b.c0_, a.clog_ + b.clog_, std::move(m)};
}

HarmonicRepresentation solve_dirichlet(const AnnulusDomain& domain, const FourierData& outer,
                                       const FourierData& inner, int N) {
  if (N < 0) throw Error(ErrorCode::RejectArgument, "truncation N must be non-negative");
  const auto size = static_cast<std::size_t>(2 * N + 1);
  if (outer.size() != size || inner.size() != size)
    throw Error(ErrorCode::RejectArgument, "Fourier data must have 2N+1 entries");

  double scale = 0.0;
  for (std::size_t i = 0; i < size; ++i) scale = std::max({scale, std::abs(outer[i]), std::abs(inner[i])});
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (int n = 0; n <= N; ++n) {
    const auto p = static_cast<std::size_t>(N + n), q = static_cast<std::size_t>(N - n);
    if (std::abs(outer[p] - std::conj(outer[q])) > tol || std::abs(inner[p] - std::conj(inner[q])) > tol) {
      std::ostringstream os;
      os << "boundary data not conjugate-symmetric at frequency " << n;
      throw Error(ErrorCode::RejectArgument, os.str());
    }
  }

  const double r = domain.inner_radius();
  const double f0_out = outer[static_cast<std::size_t>(N)].real();
  const double f0_in = inner[static_cast<std::size_t>(N)].real();
  const double c0 = f0_out;
  const double clog = (f0_in - f0_out) / std::log(r);

  // For n >= 1 the real data 2 Re(f_n e^{in theta}) is matched by
  //   A + B = 2 f_out,  A r^n + B r^-n = 2 f_in,
  // written in a form that never forms r^-n.
  HarmonicRepresentation::Modes modes;
  for (int n = 1; n <= N; ++n) {
    const cplx fo = outer[static_cast<std::size_t>(N + n)];
    const cplx fi = inner[static_cast<std::size_t>(N + n)];
    if (fo == cplx{} && fi == cplx{}) continue;
    const double rn = std::pow(r, n);
    const double den = 1.0 - rn * rn;
    assert(den > 0.0);
    const cplx A = (2.0 * fo - 2.0 * fi * rn) / den;
    const cplx B = (2.0 * fi * rn - 2.0 * fo * rn * rn) / den;
    modes[n] = {A, B};
  }
  return {c0, clog, std::move(modes)};
}

HarmonicRepresentation harmonic_measure(const AnnulusDomain& domain, int j) {
  const double L = domain.log_modulus();
  if (j == 1) return {1.0, 1.0 / L, {}};
  if (j == 2) return {0.0, -1.0 / L, {}};
  throw Error(ErrorCode::RejectArgument, "harmonic measure index must be 1 or 2");
}

GreenFunction::GreenFunction(const AnnulusDomain& domain, cplx pole, HarmonicRepresentation corrector)
    : domain_(domain),
      pole_(pole),
      image_(domain.inner_radius() * domain.inner_radius() / std::conj(pole)),
      corrector_(std::move(corrector)) {}

double GreenFunction::operator()(cplx z) const {
  const double s = -std::log(std::abs(z - pole_)) + std::log(std::abs(1.0 - std::conj(pole_) * z)) +
                   std::log(std::abs(z - image_));
  return s + corrector_(z);
}

double GreenFunction::radial_derivative(cplx z) const {
  const cplx u = z / std::abs(z);
  const cplx ab = std::conj(pole_);
  const cplx d = -1.0 / (z - pole_) - ab / (1.0 - ab * z) + 1.0 / (z - image_);
  return (d * u).real() + corrector_.radial_derivative(z);
}

cplx GreenFunction::completion(cplx z) const {
  // Principal logs for the pole and reflected factors, Log z on the cut
  // branch; the Log z coefficient 1 + clog carries the inner period.
  const cplx ab = std::conj(pole_);
  return -std::log(z - pole_) + std::log(1.0 - ab * z) + std::log(1.0 - image_ / z) + log_branch(z) +
         corrector_.completion()(z);
}

cplx GreenFunction::exp_neg_completion_without_log(cplx z) const {
  const cplx ab = std::conj(pole_);
  const auto& c = corrector_.completion();
  return (z - pole_) / ((1.0 - ab * z) * (1.0 - image_ / z)) * std::exp(-c.c0 - c.laurent(z));
}

GreenFunction green(const AnnulusDomain& domain, cplx pole, int N) {
  if (N < 8) throw Error(ErrorCode::RejectArgument, "green needs N >= 8");
  if (!domain.contains(pole) || domain.boundary_distance(pole) < 1e-9) {
    std::ostringstream os;
    os << "pole " << pole << " not strictly interior";
    throw Error(ErrorCode::RejectGeometry, os.str());
  }
  const double r = domain.inner_radius();
  const cplx ab = std::conj(pole);
  const cplx b = r * r / ab;

  FourierData outer(static_cast<std::size_t>(2 * N + 1));
  FourierData inner(outer.size());
  inner[static_cast<std::size_t>(N)] = std::log(std::abs(pole) / r);
  cplx pb{1.0}, pi{1.0};
  for (int n = 1; n <= N; ++n) {
    pb *= std::conj(b);
    pi *= ab * r;
    const cplx fo = pb / (2.0 * n);
    const cplx fi = pi / (2.0 * n);
    outer[static_cast<std::size_t>(N + n)] = fo;
    outer[static_cast<std::size_t>(N - n)] = std::conj(fo);
    inner[static_cast<std::size_t>(N + n)] = fi;
    inner[static_cast<std::size_t>(N - n)] = std::conj(fi);
  }
  return {domain, pole, solve_dirichlet(domain, outer, inner, N)};
}

double normal_derivative(const HarmonicRepresentation& h, const BoundarySample& s) {
  const double d = h.radial_derivative(s.point);
  return s.component == 1 ? d : -d;
}

double normal_derivative(const GreenFunction& g, const BoundarySample& s) {
  const double d = g.radial_derivative(s.point);
  return s.component == 1 ? d : -d;
}

double schottky(const GreenFunction& g_base, int j, const BoundarySample& s) {
  if (j != 1) throw Error(ErrorCode::RejectArgument, "the annulus has a single Schottky function (j = 1)");
  const double dg = normal_derivative(g_base, s);
  assert(std::abs(dg) >= 1e-14);
  return normal_derivative(harmonic_measure(g_base.domain(), 1), s) / dg;
}

double schottky(const AnnulusDomain& domain, int j, const BoundarySample& s, int N) {
  return schottky(green(domain, domain.base_point(), N), j, s);
}

double conjugate_period(const HarmonicRepresentation& h) { return kTwoPi * h.clog(); }

AnalyticCompletion analytic_completion(const HarmonicRepresentation& h) { return h.completion(); }

PoissonKernel::PoissonKernel(const AnnulusDomain& domain, cplx zeta) : r_(domain.inner_radius()), zeta_(zeta) {
  const double a = std::abs(zeta);
  if (std::abs(a - 1.0) < 1e-12) {
    component_ = 1;
    c0_ = 1.0 / kTwoPi;
    clog_ = 1.0 / (kTwoPi * domain.log_modulus());
  } else if (std::abs(a - r_) < 1e-12 * std::max(r_, 1e-300)) {
    component_ = 2;
    c0_ = 0.0;
    clog_ = -1.0 / (kTwoPi * r_ * domain.log_modulus());
  } else {
    throw Error(ErrorCode::RejectArgument, "Poisson kernel atom must lie on a boundary circle");
  }
}

cplx PoissonKernel::completion_without_log(cplx z) const {
  const double r2 = r_ * r_;
  cplx sum{};
  double q = 1.0;  // r^{2k}
  const bool outer = component_ == 1;
  for (int k = 0; k < 4000; ++k) {
    const cplx p = outer ? z * q / zeta_ : zeta_ * q / z;
    const cplx m = outer ? zeta_ * q * r2 / z : z * q * r2 / zeta_;
    const cplx t = p / (1.0 - p) - m / (1.0 - m);
    sum += t;
    if (k > 0 && std::abs(t) < 1e-17 * (1.0 + std::abs(sum))) break;
    q *= r2;
  }
  const double pref = outer ? 1.0 / std::numbers::pi : 1.0 / (std::numbers::pi * r_);
  return c0_ + pref * sum;
}

cplx PoissonKernel::derivative(cplx z) const {
  const double r2 = r_ * r_;
  cplx sum{};
  double q = 1.0;
  const bool outer = component_ == 1;
  for (int k = 0; k < 4000; ++k) {
    const cplx p = outer ? z * q / zeta_ : zeta_ * q / z;
    const cplx m = outer ? zeta_ * q * r2 / z : z * q * r2 / zeta_;
    // p is proportional to z^{+1} (outer) or z^{-1} (inner); m the opposite.
    const cplx dp = outer ? p / z : -p / z;
    const cplx dm = outer ? -m / z : m / z;
    const cplx t = dp / ((1.0 - p) * (1.0 - p)) - dm / ((1.0 - m) * (1.0 - m));
    sum += t;
    if (k > 0 && std::abs(t) < 1e-17 * (1.0 + std::abs(sum))) break;
    q *= r2;
  }
  const double pref = outer ? 1.0 / std::numbers::pi : 1.0 / (std::numbers::pi * r_);
  return pref * sum + clog_ / z;
}

cplx PoissonKernel::completion(cplx z) const { return completion_without_log(z) + clog_ * log_branch(z); }

double loop_period(const std::function<double(cplx)>& radial_derivative, double rho, int m) {
  if (m < 4) throw Error(ErrorCode::RejectArgument, "loop_period needs m >= 4");
  double s = 0.0;
  for (int k = 0; k < m; ++k) s += radial_derivative(std::polar(rho, kTwoPi * k / m));
  return s * kTwoPi * rho / m;
}

}  // namespace annulus
