#pragma once

#include <vector>

#include "annulus/geometry.hpp"

namespace annulus {

/// A weighted point of a discrete measure.
struct MeasureNode {
  cplx z;
  double w;
};

/// 64-point Gauss-Legendre nodes and weights mapped to [a, b].
void gauss_legendre_64(double a, double b, std::vector<double>& nodes, std::vector<double>& weights);

/// Tensor rule for the normalized area measure dA = dx dy / pi on
/// {rho_lo < |z| < rho_hi}: Gauss-Legendre in radius, n_theta-point trapezoid in angle.
std::vector<MeasureNode> area_nodes(double rho_lo, double rho_hi, int n_theta);

/// Arclength trapezoid on one circle |z| = rho, first node at angle offset.
std::vector<MeasureNode> circle_nodes(double rho, int m, double offset = 0.0);

}  // namespace annulus
