#include "annulus/spaces.hpp"

#include <cmath>
#include <sstream>

#include "annulus/harmonic.hpp"

namespace annulus {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::SmirnovArclength: return "smirnov";
    case SpaceKind::HardyHarmonicMeasure: return "hardy";
    case SpaceKind::BergmanArea: return "bergman";
  }
  return "unknown";
}

SpaceKind parse_space_kind(std::string_view name) {
  if (name == "smirnov" || name == "szego" || name == "e2") return SpaceKind::SmirnovArclength;
  if (name == "hardy" || name == "h2") return SpaceKind::HardyHarmonicMeasure;
  if (name == "bergman" || name == "a2") return SpaceKind::BergmanArea;
  throw Error(ErrorCode::RejectArgument, "unknown space '" + std::string(name) + "'");
}

namespace {

void check_resolution(int N, int m) {
  if (N < 0) throw Error(ErrorCode::RejectArgument, "truncation N must be non-negative");
  if (m < 4 * N + 4) {
    std::ostringstream os;
    os << "m = " << m << " below 4N+4 = " << 4 * N + 4 << " (aliasing)";
    throw Error(ErrorCode::RejectArgument, os.str());
  }
}

}  // namespace

std::vector<MeasureNode> space_measure(const AnnulusDomain& domain, const SpaceTag& tag, int m, int green_N) {
  if (m < 4) throw Error(ErrorCode::RejectArgument, "quadrature needs m >= 4");
  const double r = domain.inner_radius();
  std::vector<MeasureNode> nodes;
  switch (tag.kind) {
    case SpaceKind::SmirnovArclength: {
      nodes = circle_nodes(1.0, m);
      auto in = circle_nodes(r, m);
      nodes.insert(nodes.end(), in.begin(), in.end());
      break;
    }
    case SpaceKind::HardyHarmonicMeasure: {
      const GreenFunction g = green(domain, domain.base_point(), green_N);
      for (const auto& s : boundary_nodes(domain, m))
        nodes.push_back({s.point, -normal_derivative(g, s) / kTwoPi * s.weight});
      break;
    }
    case SpaceKind::BergmanArea:
      nodes = area_nodes(r, 1.0, m);
      break;
  }
  if (tag.weighted())
    for (auto& n : nodes) n.w *= std::norm(tag.weight_root(n.z));
  return nodes;
}

std::vector<double> monomial_norms(const AnnulusDomain& domain, const SpaceTag& tag, int N) {
  if (tag.weighted())
    throw Error(ErrorCode::RejectArgument, "weighted Gram matrices are not diagonal; use gram_matrix");
  if (N < 0) throw Error(ErrorCode::RejectArgument, "truncation N must be non-negative");
  const double r = domain.inner_radius();
  std::vector<double> out(static_cast<std::size_t>(2 * N + 1));

  // Harmonic measure: |z^n|^2 is constant on each circle, so only the mass
  // of each circle enters.
  double mass_outer = 0.0, mass_inner = 0.0;
  if (tag.kind == SpaceKind::HardyHarmonicMeasure) {
    const int m = std::max(512, 4 * N + 4);
    for (const auto& node : space_measure(domain, tag, m))
      (std::abs(node.z) > 0.5 * (1.0 + r) ? mass_outer : mass_inner) += node.w;
  }

  for (int n = -N; n <= N; ++n) {
    const double r2n = std::pow(r, 2.0 * n);
    double v = 0.0;
    switch (tag.kind) {
      case SpaceKind::SmirnovArclength: v = kTwoPi * (1.0 + r2n * r); break;
      case SpaceKind::HardyHarmonicMeasure: v = mass_outer + mass_inner * r2n; break;
      case SpaceKind::BergmanArea:
        v = n == -1 ? 2.0 * std::log(1.0 / r) : (1.0 - r2n * r * r) / (n + 1.0);
        break;
    }
    out[static_cast<std::size_t>(n + N)] = v;
  }
  return out;
}

Eigen::VectorXd basis_scales(const AnnulusDomain& domain, int N) {
  Eigen::VectorXd s(2 * N + 1);
  for (int n = -N; n <= N; ++n) s(n + N) = n < 0 ? std::pow(domain.inner_radius(), n) : 1.0;
  return s;
}

Eigen::VectorXcd basis_values(const Eigen::VectorXd& scales, int N, cplx z) {
  Eigen::VectorXcd e(2 * N + 1);
  e(N) = 1.0;
  cplx p = 1.0, q = 1.0;
  const cplx w = 1.0 / z;
  for (int n = 1; n <= N; ++n) {
    p *= z;
    q *= w;
    e(N + n) = p / scales(N + n);
    e(N - n) = q / scales(N - n);
  }
  return e;
}

namespace {

// sum_i w_i e(z_i) e(z_i)^H, i.e. entries integral of e_j conj(e_k).
Eigen::MatrixXcd assemble(const std::vector<MeasureNode>& nodes, const Eigen::VectorXd& scales, int N) {
  const int d = 2 * N + 1;
  Eigen::MatrixXcd B(static_cast<Eigen::Index>(nodes.size()), d);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    B.row(static_cast<Eigen::Index>(i)) = basis_values(scales, N, nodes[i].z).transpose() * std::sqrt(nodes[i].w);
  }
  Eigen::MatrixXcd G = B.transpose() * B.conjugate();
  return 0.5 * (G + G.adjoint());
}

}  // namespace

Eigen::MatrixXcd scaled_gram_matrix(const AnnulusDomain& domain, const SpaceTag& tag, int N, int m) {
  check_resolution(N, m);
  return assemble(space_measure(domain, tag, m), basis_scales(domain, N), N);
}

Eigen::MatrixXcd gram_matrix(const AnnulusDomain& domain, const SpaceTag& tag, int N, int m) {
  const Eigen::VectorXd s = basis_scales(domain, N);
  Eigen::MatrixXcd G = scaled_gram_matrix(domain, tag, N, m);
  return s.asDiagonal() * G * s.asDiagonal();
}

cplx inner_product(const std::function<cplx(cplx)>& f, const std::function<cplx(cplx)>& g,
                   const std::vector<MeasureNode>& measure) {
  cplx s{};
  for (const auto& n : measure) s += n.w * f(n.z) * std::conj(g(n.z));
  return s;
}

double norm(const std::function<cplx(cplx)>& f, const std::vector<MeasureNode>& measure) {
  double s = 0.0;
  for (const auto& n : measure) s += n.w * std::norm(f(n.z));
  return std::sqrt(s);
}

cplx inner_product(const LaurentPolynomial& f, const LaurentPolynomial& g, const AnnulusDomain& domain,
                   const SpaceTag& tag, int m) {
  const int N = std::max({std::abs(f.lo()), std::abs(f.hi()), std::abs(g.lo()), std::abs(g.hi())});
  check_resolution(N, m);
  return inner_product([&](cplx z) { return f(z); }, [&](cplx z) { return g(z); },
                       space_measure(domain, tag, m));
}

}  // namespace annulus
