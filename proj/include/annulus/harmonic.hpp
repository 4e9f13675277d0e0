#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/laurent.hpp"

namespace annulus {

/// Multi-valued analytic function  c0 + clog * Log z + L(z)  on the annulus,
/// with the branch of Log cut along the positive real axis (arg in [0, 2pi)).
/// Going once around the inner circle adds period() to the value.
struct AnalyticCompletion {
  double c0 = 0.0;
  double clog = 0.0;
  LaurentPolynomial laurent;

  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;
  cplx period() const noexcept { return cplx(0.0, kTwoPi * clog); }
  /// exp(k * completion) is single-valued iff k * clog is an integer.
  bool exp_single_valued(double k = 1.0, double tol = 1e-12) const noexcept;
};

/// Real harmonic function on the annulus
///   c0 + clog log|z| + sum_n Re[(A_n rho^|n| + B_n rho^-|n|) e^{i n theta}].
class HarmonicRepresentation {
public:
  using Modes = std::map<int, std::pair<cplx, cplx>>;

  HarmonicRepresentation() = default;
  HarmonicRepresentation(double c0, double clog, Modes modes);

  double c0() const noexcept { return c0_; }
  double clog() const noexcept { return clog_; }
  const Modes& modes() const noexcept { return modes_; }

  double operator()(cplx z) const;
  /// d/d rho at z.
  double radial_derivative(cplx z) const;
  const AnalyticCompletion& completion() const noexcept { return completion_; }

  HarmonicRepresentation scaled(double s) const;
  friend HarmonicRepresentation operator+(const HarmonicRepresentation& a,
                                          const HarmonicRepresentation& b);

private:
  double c0_ = 0.0;
  double clog_ = 0.0;
  Modes modes_;
  AnalyticCompletion completion_;
  LaurentPolynomial dlaurent_;
};

/// Complex Fourier coefficients f_n for |n| <= N, stored at index n + N.
using FourierData = std::vector<cplx>;

/// Dirichlet problem by matching each Fourier mode on both circles.
HarmonicRepresentation solve_dirichlet(const AnnulusDomain& domain, const FourierData& outer,
                                       const FourierData& inner, int N);

/// j = 1: outer circle, j = 2: inner circle. Closed form.
HarmonicRepresentation harmonic_measure(const AnnulusDomain& domain, int j);

/// Green's function with a logarithmic pole,
///   g(z) = -log|z - a| + log|1 - conj(a) z| + log|z - r^2/conj(a)| + corrector(z).
/// The two reflected logs make the corrector's boundary data decay like r^n
/// wherever the pole sits.
class GreenFunction {
public:
  GreenFunction(const AnnulusDomain& domain, cplx pole, HarmonicRepresentation corrector);

  cplx pole() const noexcept { return pole_; }
  const AnnulusDomain& domain() const noexcept { return domain_; }
  const HarmonicRepresentation& corrector() const noexcept { return corrector_; }

  double operator()(cplx z) const;
  double radial_derivative(cplx z) const;
  /// Multi-valued completion p = g + i g~ (Log branch as in AnalyticCompletion).
  cplx completion(cplx z) const;
  /// Everything in exp(-p) except the Log z power: the single-valued factor
  ///   (z - a) / ((1 - conj(a) z)(1 - b/z)) * exp(-c0 - L(z)).
  cplx exp_neg_completion_without_log(cplx z) const;
  /// Coefficient of Log z in p; the conjugate period around the inner circle is 2 pi times this.
  double log_coefficient() const noexcept { return 1.0 + corrector_.clog(); }

private:
  AnnulusDomain domain_;
  cplx pole_;
  cplx image_;  // r^2 / conj(pole)
  HarmonicRepresentation corrector_;
};

GreenFunction green(const AnnulusDomain& domain, cplx pole, int N = 64);

/// Outward normal derivative: +d/d rho on the outer circle, -d/d rho on the inner one.
double normal_derivative(const HarmonicRepresentation& h, const BoundarySample& s);
double normal_derivative(const GreenFunction& g, const BoundarySample& s);

/// s_1 = (d omega_1 / dn) / (dg / dn) with g the Green's function at the base point.
double schottky(const AnnulusDomain& domain, int j, const BoundarySample& s, int N = 64);
double schottky(const GreenFunction& g_base, int j, const BoundarySample& s);

/// Period of the harmonic conjugate around the inner circle: 2 pi clog.
double conjugate_period(const HarmonicRepresentation& h);

AnalyticCompletion analytic_completion(const HarmonicRepresentation& h);

/// Poisson kernel of the annulus with respect to arclength for a boundary
/// point zeta, P(z, zeta) = -(1/2pi) dg(z, zeta)/dn_zeta, together with its
/// analytic completion. Evaluated by a reflection series that converges
/// geometrically (ratio r^2) up to the boundary.
class PoissonKernel {
public:
  PoissonKernel(const AnnulusDomain& domain, cplx zeta);

  int component() const noexcept { return component_; }
  cplx zeta() const noexcept { return zeta_; }
  double operator()(cplx z) const { return completion(z).real(); }
  cplx completion(cplx z) const;
  /// Completion with the clog * Log z term removed (single-valued).
  cplx completion_without_log(cplx z) const;
  /// d/dz of the completion.
  cplx derivative(cplx z) const;
  double clog() const noexcept { return clog_; }

private:
  double r_;
  cplx zeta_;
  int component_;
  double c0_;
  double clog_;
};

/// Integral over |z| = rho of d h / d rho, i.e. the period of the conjugate
/// of h around that circle, by an m-point trapezoid rule.
double loop_period(const std::function<double(cplx)>& radial_derivative, double rho, int m);

}  // namespace annulus
