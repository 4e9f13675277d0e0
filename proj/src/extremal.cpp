#include "annulus/extremal.hpp"

#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace annulus {

namespace {

constexpr int kCandidateMaxN = 256;

void validate(const ExtremalProblem& p) {
  if (p.N < 1) throw Error(ErrorCode::RejectArgument, "extremal truncation N must be >= 1");
  auto interior = [&](cplx z) { return p.domain.contains(z) && p.domain.boundary_distance(z) >= 1e-9; };
  if (!interior(p.base)) throw Error(ErrorCode::RejectGeometry, "extremal base point not interior");
  for (cplx z : p.zeros) {
    if (!interior(z)) throw Error(ErrorCode::RejectGeometry, "extremal zero not interior");
    if (std::abs(z - p.base) < 1e-12) throw Error(ErrorCode::RejectArgument, "base point among the zeros");
  }
}

// Quadratic form of the scaled basis: ||sum a_j e_j||^2 = a^H M a, M = conj(Gram).
struct Form {
  Eigen::VectorXd scales;
  Eigen::LLT<Eigen::MatrixXcd> chol;
};

Form make_form(const ExtremalProblem& p, int m) {
  Form f;
  f.scales = basis_scales(p.domain, p.N);
  const Eigen::MatrixXcd M = scaled_gram_matrix(p.domain, p.space, p.N, m).conjugate();
  f.chol.compute(M);
  if (f.chol.info() != Eigen::Success) throw Error(ErrorCode::SingularGram, "Gram matrix not positive definite");
  return f;
}

LaurentPolynomial to_poly(const Eigen::VectorXcd& a, const Eigen::VectorXd& s, int N) {
  LaurentPolynomial L = LaurentPolynomial::zero(-N, N);
  for (int n = -N; n <= N; ++n) L[n] = a(n + N) / s(n + N);
  return L;
}

LaurentPolynomial unit_normalized(const LaurentPolynomial& G, const std::vector<MeasureNode>& measure) {
  const double n = norm([&](cplx z) { return G(z); }, measure);
  return G * cplx(1.0 / n);
}

}  // namespace

LaurentPolynomial solve_extremal(const ExtremalProblem& p, int m) {
  validate(p);
  const Form f = make_form(p, m);
  const int d = 2 * p.N + 1;
  const int k = 1 + static_cast<int>(p.zeros.size());
  Eigen::MatrixXcd C(k, d);
  C.row(0) = basis_values(f.scales, p.N, p.base).transpose();
  for (int i = 1; i < k; ++i) C.row(i) = basis_values(f.scales, p.N, p.zeros[static_cast<std::size_t>(i - 1)]).transpose();

  // a = M^-1 C^H (C M^-1 C^H)^-1 e_1
  const Eigen::MatrixXcd Y = f.chol.solve(C.adjoint());
  const Eigen::MatrixXcd S = C * Y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-13 * hi)) throw Error(ErrorCode::SingularConstraints, "evaluation constraints linearly dependent");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(k);
  rhs(0) = 1.0;
  const Eigen::VectorXcd mu = S.ldlt().solve(rhs);
  return to_poly(Y * mu, f.scales, p.N);
}

LaurentPolynomial solve_extremal_sup(const ExtremalProblem& p, int m) {
  validate(p);
  const Form f = make_form(p, m);
  // Kernel sections in coefficient space: M k_w = conj(e(w)).
  auto section = [&](cplx w) -> Eigen::VectorXcd {
    return f.chol.solve(basis_values(f.scales, p.N, w).conjugate());
  };
  auto inner = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) -> cplx {
    // <a, b> = b^H M a
    return b.dot(f.chol.matrixL() * (f.chol.matrixU() * a));
  };
  Eigen::VectorXcd v = section(p.base);
  // Modified Gram-Schmidt against the sections at the zeros.
  std::vector<Eigen::VectorXcd> q;
  for (cplx z : p.zeros) {
    Eigen::VectorXcd u = section(z);
    const double n0 = std::sqrt(inner(u, u).real());
    for (const auto& e : q) u -= inner(u, e) * e;
    const double n1 = std::sqrt(inner(u, u).real());
    if (!(n1 > 1e-10 * n0)) throw Error(ErrorCode::SingularConstraints, "evaluation constraints linearly dependent");
    q.push_back(u / n1);
  }
  for (const auto& e : q) v -= inner(v, e) * e;
  v /= std::sqrt(inner(v, v).real());
  LaurentPolynomial F = to_poly(v, f.scales, p.N);
  const cplx at = F(p.base);
  return F * (std::conj(at) / std::abs(at));
}

double extremal_identity_check(const ExtremalProblem& p, int m) {
  validate(p);
  if (p.zeros.size() != 1) throw Error(ErrorCode::RejectArgument, "extremal identity needs exactly one zero");
  const LaurentPolynomial G = solve_extremal(p, m);
  const AnnulusDomain dom = p.domain.with_base(p.base);
  const InnerFunctionSpec B = blaschke_factor(dom, p.zeros[0]);
  const KernelEvaluator K = build_kernel(dom, p.space.with_weight(B.as_function()), p.N, m);
  const AnalyticFn k = K.section_fn(p.base);
  const cplx scale = 1.0 / (B(p.base) * k(p.base));

  const double r = p.domain.inner_radius();
  double dev = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) {
      const cplx z = std::polar(r + (i + 0.5) * (1.0 - r) / 32, kTwoPi * j / 32);
      dev = std::max(dev, std::abs(B(z) * k(z) * scale - G(z)));
    }
  return dev;
}

double repro_fact_check(const LaurentPolynomial& G, const ExtremalProblem& p, int m) {
  if (p.space.kind != SpaceKind::HardyHarmonicMeasure || p.space.weighted())
    throw Error(ErrorCode::RejectArgument, "repro_fact_check needs the unweighted Hardy tag");
  const AnnulusDomain dom = p.domain.with_base(p.base);
  const auto measure = space_measure(dom, p.space, m);
  const LaurentPolynomial U = unit_normalized(G, measure);
  double worst = 0.0;
  const double r = p.domain.inner_radius();
  for (int n = -p.N / 2; n <= p.N / 2; ++n) {
    // z^n scaled to unit sup norm on the closed annulus
    const double c = n < 0 ? std::pow(r, -n) : 1.0;
    cplx s{};
    for (const auto& node : measure) s += node.w * c * std::pow(node.z, n) * std::norm(U(node.z));
    worst = std::max(worst, std::abs(s - c * std::pow(p.base, n)));
  }
  return worst;
}

CandidateDivisor candidate_divisor(const AnnulusDomain& domain, cplx z1, int N, int m) {
  const cplx z0 = domain.base_point();
  if (std::abs(z1 - z0) < 1e-12) throw Error(ErrorCode::RejectArgument, "z1 coincides with the base point");
  if (N < 1) throw Error(ErrorCode::RejectArgument, "candidate divisor truncation must be >= 1");
  const InnerFunctionSpec B1 = blaschke_factor(domain, z1);
  const SpaceTag tag{SpaceKind::BergmanArea, B1.as_function()};
  // A truncated kernel picks up spurious zeros near the inner circle; double N
  // until the ring holds exactly one.
  std::optional<AnalyticFn> kk;
  int used = N;
  for (int n = N; n <= std::max(N, kCandidateMaxN); n *= 2) {
    const AnalyticFn k = build_kernel(domain, tag, n, std::max(m, 4 * n + 4)).section_fn(z0);
    int count = -1;
    try {
      count = count_zeros(k, full_ring(domain));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConvergenceFail && e.code() != ErrorCode::ZeroOnContour) throw;
    }
    if (count == 1) {
      kk = k;
      used = n;
      break;
    }
  }
  if (!kk) throw Error(ErrorCode::ConvergenceFail, "weighted kernel never showed a single ring zero");
  const AnalyticFn k = *kk;
  const cplx w = locate_zeros(k, domain, 1).locations.front();
  const InnerFunctionSpec BG = blaschke_factor(domain, w);
  CandidateDivisor out;
  out.kernel_zero = w;
  out.z1 = z1;
  out.truncation = used;
  out.undivided = [B1, k](cplx z) { return B1(z) * k(z); };
  out.G = [B1, BG, k](cplx z) { return B1(z) * k(z) / BG(z); };
  return out;
}

double quasicontract_norm(const AnalyticFn& G, cplx z1, const AnnulusDomain& domain, int N, int m) {
  if (N < 1) throw Error(ErrorCode::RejectArgument, "quasicontract truncation must be >= 1");
  if (m < 4 * N + 4) throw Error(ErrorCode::RejectArgument, "quasicontract quadrature below 4N+4");
  const auto nodes = area_nodes(domain.inner_radius(), 1.0, m);
  const double gn = norm(G, nodes);
  const Eigen::VectorXd s = basis_scales(domain, N);
  const int d = 2 * N + 1;
  Eigen::MatrixXcd P(static_cast<Eigen::Index>(nodes.size()), d), Q(P.rows(), d);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cplx z = nodes[i].z;
    const Eigen::VectorXcd e = basis_values(s, N, z) * ((z - z1) * std::sqrt(nodes[i].w));
    P.row(static_cast<Eigen::Index>(i)) = e.transpose();
    Q.row(static_cast<Eigen::Index>(i)) = e.transpose() * (gn / G(z));
  }
  // Quadratic forms a^H A a = ||f||^2 and a^H D a = ||f / G||^2.
  const Eigen::MatrixXcd A = P.adjoint() * P, D = Q.adjoint() * Q;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ea(A, Eigen::EigenvaluesOnly);
  const double cond = ea.eigenvalues().maxCoeff() / ea.eigenvalues().minCoeff();
  if (!(ea.eigenvalues().minCoeff() > 0.0) || cond > 1e14) {
    std::ostringstream os;
    os << "subspace Gram condition " << cond << " exceeds 1e14";
    throw Error(ErrorCode::SingularGram, os.str());
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> ge(0.5 * (D + D.adjoint()), 0.5 * (A + A.adjoint()),
                                                                Eigen::EigenvaluesOnly);
  if (ge.info() != Eigen::Success) throw Error(ErrorCode::SolverFail, "generalized eigenvalue solve failed");
  return std::sqrt(ge.eigenvalues().maxCoeff());
}

DivisorReport quasicontract_estimate(const AnalyticFn& G, cplx z1, const AnnulusDomain& domain,
                                     const std::vector<int>& ladder, int m) {
  if (ladder.empty()) throw Error(ErrorCode::RejectArgument, "empty truncation ladder");
  DivisorReport rep;
  for (int N : ladder) rep.per_truncation.emplace_back(N, quasicontract_norm(G, z1, domain, N, std::max(m, 4 * N + 4)));
  rep.constant_estimate = rep.per_truncation.back().second;
  rep.ring_zero_count = count_zeros(G, full_ring(domain));
  rep.extraneous_zero = rep.ring_zero_count > 1;
  const double r = domain.inner_radius();
  if (rep.extraneous_zero) {
    // Only used for reporting where the extra zeros are.
    try {
      rep.zero_locations_of_kernel = locate_zeros(G, domain, rep.ring_zero_count, {r, 1.0}).locations;
    } catch (const Error&) {
    }
  }

  std::ostringstream os;
  os << std::setprecision(6);
  bool monotone = true;
  for (std::size_t i = 1; i < rep.per_truncation.size(); ++i)
    monotone = monotone && rep.per_truncation[i].second >= rep.per_truncation[i - 1].second * (1.0 - 1e-12);
  const std::size_t n = rep.per_truncation.size();
  const double last_change =
      n > 1 ? std::abs(rep.per_truncation[n - 1].second / rep.per_truncation[n - 2].second - 1.0) : 0.0;
  os << (rep.extraneous_zero ? "EXTRANEOUS_ZERO: " : "") << "ring zeros " << rep.ring_zero_count
     << "; ladder " << (monotone ? "non-decreasing" : "not monotone") << "; last relative change " << last_change;
  if (rep.extraneous_zero)
    os << "; division by a function with an extra zero, estimates are expected to grow with N";
  rep.notes = os.str();
  return rep;
}

}  // namespace annulus
