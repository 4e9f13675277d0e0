#include "annulus/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

namespace annulus {

void gauss_legendre_64(double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  using rule = boost::math::quadrature::gauss<double, 64>;
  // Boost stores the non-negative abscissae only (64 is even, so no zero node).
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  nodes.clear();
  weights.clear();
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes.push_back(c - h * x[i]);
    weights.push_back(h * w[i]);
    nodes.push_back(c + h * x[i]);
    weights.push_back(h * w[i]);
  }
}

std::vector<MeasureNode> area_nodes(double rho_lo, double rho_hi, int n_theta) {
  std::vector<double> rho, wr;
  gauss_legendre_64(rho_lo, rho_hi, rho, wr);
  std::vector<MeasureNode> out;
  out.reserve(rho.size() * static_cast<std::size_t>(n_theta));
  const double dt = kTwoPi / n_theta;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double w = wr[i] * rho[i] * dt / std::numbers::pi;
    for (int k = 0; k < n_theta; ++k) out.push_back({std::polar(rho[i], k * dt), w});
  }
  return out;
}

std::vector<MeasureNode> circle_nodes(double rho, int m, double offset) {
  std::vector<MeasureNode> out;
  out.reserve(static_cast<std::size_t>(m));
  const double w = kTwoPi * rho / m;
  for (int k = 0; k < m; ++k) out.push_back({std::polar(rho, offset + kTwoPi * k / m), w});
  return out;
}

}  // namespace annulus
