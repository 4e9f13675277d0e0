#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "annulus/geometry.hpp"
#include "annulus/laurent.hpp"
#include "annulus/quadrature.hpp"

namespace annulus {

enum class SpaceKind {
  SmirnovArclength,      // E^2: arclength on both circles
  HardyHarmonicMeasure,  // H^2: harmonic measure at the base point
  BergmanArea,           // A^2: dA = dx dy / pi
};

std::string_view to_string(SpaceKind kind);
/// Accepts "smirnov"/"szego"/"e2", "hardy"/"h2", "bergman"/"a2".
SpaceKind parse_space_kind(std::string_view name);

struct SpaceTag {
  SpaceKind kind = SpaceKind::SmirnovArclength;
  /// The weight is |u|^2 for this analytic u; empty means unweighted.
  std::function<cplx(cplx)> weight_root;

  bool weighted() const noexcept { return static_cast<bool>(weight_root); }
  bool on_boundary() const noexcept { return kind != SpaceKind::BergmanArea; }
  SpaceTag with_weight(std::function<cplx(cplx)> u) const { return {kind, std::move(u)}; }
};

/// Discrete measure of the space, weight included. Boundary kinds use m
/// trapezoid nodes per circle (outer first); the area kind uses m angles on
/// each of 64 Gauss-Legendre radii. green_N is the truncation of the Green's
/// function that supplies the harmonic-measure density.
std::vector<MeasureNode> space_measure(const AnnulusDomain& domain, const SpaceTag& tag, int m,
                                       int green_N = 64);

/// Squared norms ||z^n||^2 for n = -N..N (index n + N). Unweighted tags only.
std::vector<double> monomial_norms(const AnnulusDomain& domain, const SpaceTag& tag, int N);

/// G_jk = <z^j, z^k> = integral of z^j conj(z^k), j, k = -N..N (index n + N).
Eigen::MatrixXcd gram_matrix(const AnnulusDomain& domain, const SpaceTag& tag, int N, int m);

/// Column scales s_n = max(1, r^n); the basis e_n = z^n / s_n is bounded by 1
/// on the annulus and keeps Gram matrices well conditioned.
Eigen::VectorXd basis_scales(const AnnulusDomain& domain, int N);
Eigen::VectorXcd basis_values(const Eigen::VectorXd& scales, int N, cplx z);

/// Gram of the scaled basis: G_jk / (s_j s_k).
Eigen::MatrixXcd scaled_gram_matrix(const AnnulusDomain& domain, const SpaceTag& tag, int N, int m);

/// <f, g> = integral of f conj(g) by direct quadrature.
cplx inner_product(const LaurentPolynomial& f, const LaurentPolynomial& g, const AnnulusDomain& domain,
                   const SpaceTag& tag, int m);
cplx inner_product(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g,
                   const std::vector<MeasureNode>& measure);
double norm(const std::function<cplx(cplx)>& f, const std::vector<MeasureNode>& measure);

}  // namespace annulus
