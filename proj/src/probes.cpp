#include "annulus/probes.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace annulus {

HarmonicL2Kernel::HarmonicL2Kernel(const AnnulusDomain& domain, int N) : r_(domain.inner_radius()), N_(N) {
  const double r = r_, lr = std::log(r), r2 = r * r;
  // Radial integrals against rho d rho on [r, 1].
  const double a = 0.5 * (1.0 - r2);
  const double b = -0.25 - (0.5 * r2 * lr - 0.25 * r2);
  const double c = 0.25 - (0.5 * r2 * lr * lr - 0.5 * r2 * lr + 0.25 * r2);
  Eigen::Matrix2d G0;
  G0 << a, b, b, c;
  inv0_ = (2.0 * G0).inverse();  // angular factor 2 for k = 0
  invk_.reserve(static_cast<std::size_t>(N));
  for (int k = 1; k <= N; ++k) {
    const double rk = std::pow(r, k);
    const double g11 = (1.0 - rk * rk * r2) / (2.0 * k + 2.0);
    const double g12 = rk * a;
    const double g22 = k == 1 ? -r2 * lr : (r2 - rk * rk) / (2.0 * k - 2.0);
    Eigen::Matrix2d G;
    G << g11, g12, g12, g22;
    invk_.push_back(G.inverse());
  }
}

double HarmonicL2Kernel::operator()(cplx z, cplx w) const {
  const double pz = std::abs(z), pw = std::abs(w);
  const double dt = std::arg(z) - std::arg(w);
  Eigen::Vector2d vz(1.0, std::log(pz)), vw(1.0, std::log(pw));
  double s = vz.dot(inv0_ * vw);
  double az = 1.0, bz = 1.0, aw = 1.0, bw = 1.0;
  for (int k = 1; k <= N_; ++k) {
    az *= pz;
    aw *= pw;
    bz *= r_ / pz;
    bw *= r_ / pw;
    const Eigen::Vector2d uz(az, bz), uw(aw, bw);
    const double t = uz.dot(invk_[static_cast<std::size_t>(k - 1)] * uw) * std::cos(k * dt);
    s += t;
    if (std::max(az * aw, bz * bw) * k < 1e-18) break;
  }
  return s;
}

std::function<double(cplx)> harmonic_l2_kernel(const AnnulusDomain& domain, cplx z0, int N) {
  if (!domain.contains(z0)) throw Error(ErrorCode::RejectGeometry, "harmonic kernel point not interior");
  return [H = HarmonicL2Kernel(domain, N), z0](cplx z) { return H(z, z0); };
}

std::function<double(cplx)> bergman_harmonic_formula(const AnnulusDomain& domain, cplx z0, int N) {
  const KernelEvaluator K = build_kernel(domain, {SpaceKind::BergmanArea, {}}, N, 4 * N + 4);
  return [k = K.section_fn(z0)](cplx z) { return 2.0 * k(z).real() - 1.0; };
}

double defect_constant(const AnnulusDomain& domain) {
  std::vector<double> x, w;
  gauss_legendre_64(domain.inner_radius(), 1.0, x, w);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i] * std::log(x[i]);
  return kTwoPi * s;
}

DecompositionFit bergman_decomposition_residual(const AnalyticFn& G, const AnnulusDomain& domain, cplx z0, int m,
                                                int degree, int proj_N) {
  const auto nodes = area_nodes(domain.inner_radius(), 1.0, m);
  const auto n = static_cast<Eigen::Index>(nodes.size());
  const HarmonicL2Kernel H(domain);
  const Eigen::VectorXd s = basis_scales(domain, proj_N);

  Eigen::VectorXd sw(n), logr(n), defect(n);
  double gnorm = 0.0;
  std::vector<double> g2(nodes.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& q = nodes[static_cast<std::size_t>(i)];
    sw(i) = std::sqrt(q.w);
    logr(i) = std::log(std::abs(q.z));
    g2[static_cast<std::size_t>(i)] = std::norm(G(q.z));
    gnorm += q.w * g2[static_cast<std::size_t>(i)];
  }
  for (Eigen::Index i = 0; i < n; ++i)
    defect(i) = g2[static_cast<std::size_t>(i)] / gnorm - H(nodes[static_cast<std::size_t>(i)].z, z0);

  // nu_1: residual of log|z| after weighted least squares on Re/Im of the scaled monomials.
  const int d = 2 * proj_N + 1;
  Eigen::MatrixXd P(n, 2 * d - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXcd e = basis_values(s, proj_N, nodes[static_cast<std::size_t>(i)].z);
    int c = 0;
    for (int k = 0; k < d; ++k) {
      P(i, c++) = e(k).real();
      if (k != proj_N) P(i, c++) = e(k).imag();
    }
  }
  const Eigen::MatrixXd Pw = sw.asDiagonal() * P;
  const Eigen::VectorXd coef = Pw.colPivHouseholderQr().solve(sw.cwiseProduct(logr));
  const Eigen::VectorXd proj = P * coef;
  const Eigen::VectorXd nu = logr - proj;

  DecompositionFit fit{};
  double pm = 0.0, wsum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    pm += nodes[static_cast<std::size_t>(i)].w * proj(i);
    wsum += nodes[static_cast<std::size_t>(i)].w;
  }
  fit.projection_mean = pm / wsum;

  // Test family, each scaled to unit norm.
  std::vector<std::function<double(cplx)>> family{[](cplx) { return 1.0; },
                                                  [](cplx z) { return std::log(std::abs(z)); }};
  for (int k = 1; k <= degree; ++k) {
    family.push_back([k](cplx z) { return std::pow(z, k).real(); });
    family.push_back([k](cplx z) { return std::pow(z, k).imag(); });
    family.push_back([k](cplx z) { return std::pow(z, -k).real(); });
    family.push_back([k](cplx z) { return std::pow(z, -k).imag(); });
  }
  std::vector<double> pp, qq;
  for (const auto& u : family) {
    double uu = 0.0, pu = 0.0, qu = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& q = nodes[static_cast<std::size_t>(i)];
      const double v = u(q.z);
      uu += q.w * v * v;
      pu += q.w * defect(i) * v;
      qu += q.w * nu(i) * v;
    }
    pp.push_back(pu / std::sqrt(uu));
    qq.push_back(qu / std::sqrt(uu));
  }
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pp.size(); ++i) {
    num += pp[i] * qq[i];
    den += qq[i] * qq[i];
  }
  fit.lambda1 = num / den;
  for (std::size_t i = 0; i < pp.size(); ++i)
    fit.residual = std::max(fit.residual, std::abs(pp[i] - fit.lambda1 * qq[i]));
  return fit;
}

namespace {

struct PolarLayout {
  bool disk;
  int nr, nt;
  double h, dt;
  std::vector<double> radii;
  int first, last;  // interior radial index range [first, last]

  int interior_count() const { return (last - first + 1) * nt; }
  int id(int k, int j) const { return (k - first) * nt + ((j % nt) + nt) % nt; }
  bool interior(int k) const { return k >= first && k <= last; }
};

PolarLayout layout(double r, int nr, int nt) {
  PolarLayout g{};
  g.disk = r <= 0.0;
  g.nr = nr;
  g.nt = nt;
  g.dt = kTwoPi / nt;
  if (g.disk) {
    g.h = 1.0 / (nr - 0.5);
    for (int k = 0; k < nr; ++k) g.radii.push_back((k + 0.5) * g.h);
    g.first = 0;
  } else {
    g.h = (1.0 - r) / (nr - 1);
    for (int k = 0; k < nr; ++k) g.radii.push_back(r + k * g.h);
    g.first = 1;
  }
  g.last = nr - 2;
  return g;
}

using Trip = Eigen::Triplet<double>;

// Five-point polar Laplacian at interior node (k, j). col(k', j') gives the
// column of a neighbouring value or -1 when it is a known zero.
template <class Col>
void laplacian_row(const PolarLayout& g, int row, int k, int j, Col col, std::vector<Trip>& t) {
  const double rho = g.radii[static_cast<std::size_t>(k)];
  const double h2 = g.h * g.h, cr = 1.0 / (2.0 * g.h * rho), ct = 1.0 / (rho * rho * g.dt * g.dt);
  auto add = [&](int c, double v) {
    if (c >= 0) t.emplace_back(row, c, v);
  };
  add(col(k, j), -2.0 / h2 - 2.0 * ct);
  add(col(k, j + 1), ct);
  add(col(k, j - 1), ct);
  add(col(k + 1, j), 1.0 / h2 + cr);
  if (g.disk && k == 0)
    add(col(0, j + g.nt / 2), 1.0 / h2 - cr);  // reflection through the origin
  else
    add(col(k - 1, j), 1.0 / h2 - cr);
}

}  // namespace

BiharmonicSolution biharmonic_green(double inner_radius, cplx pole, int n_rho, int n_theta) {
  if (n_rho < 32 || n_theta < 32) throw Error(ErrorCode::RejectArgument, "biharmonic grid needs >= 32 points per direction");
  if (n_theta % 2 != 0) throw Error(ErrorCode::RejectArgument, "biharmonic grid needs an even angular count");
  if (inner_radius < 0.0 || inner_radius >= 1.0) throw Error(ErrorCode::RejectGeometry, "inner radius outside [0,1)");
  const PolarLayout g = layout(inner_radius, n_rho, n_theta);

  const double pr = std::abs(pole);
  const double lo = g.disk ? 0.0 : inner_radius;
  if (pr > 1.0 - 2.0 * g.h || (!g.disk && pr < lo + 2.0 * g.h))
    throw Error(ErrorCode::RejectArgument, "pole closer than two grid cells to the boundary");

  const int nI = g.interior_count();
  const int nAll = g.nr * g.nt;
  auto all_id = [&](int k, int j) { return k * g.nt + ((j % g.nt) + g.nt) % g.nt; };

  // E: interior u -> v = Lap u on every node; boundary rows use the mirrored
  // ghost u_ghost = u_adjacent, which makes du/drho = 0 to second order.
  std::vector<Trip> te;
  auto ucol = [&](int k, int j) { return g.interior(k) ? g.id(k, j) : -1; };
  for (int k = 0; k < g.nr; ++k)
    for (int j = 0; j < g.nt; ++j) {
      if (g.interior(k)) {
        laplacian_row(g, all_id(k, j), k, j, ucol, te);
      } else {
        const int adj = k == g.nr - 1 ? k - 1 : k + 1;
        te.emplace_back(all_id(k, j), g.id(adj, j), 2.0 / (g.h * g.h));
      }
    }
  Eigen::SparseMatrix<double> E(nAll, nI);
  E.setFromTriplets(te.begin(), te.end());

  std::vector<Trip> tl;
  auto vcol = [&](int k, int j) { return all_id(k, j); };
  for (int k = g.first; k <= g.last; ++k)
    for (int j = 0; j < g.nt; ++j) laplacian_row(g, g.id(k, j), k, j, vcol, tl);
  Eigen::SparseMatrix<double> Lint(nI, nAll);
  Lint.setFromTriplets(tl.begin(), tl.end());

  Eigen::SparseMatrix<double> A = Lint * E;
  A.makeCompressed();

  // Discrete delta at the nearest interior node, scaled by the inverse cell area.
  int kp = g.first;
  for (int k = g.first; k <= g.last; ++k)
    if (std::abs(g.radii[static_cast<std::size_t>(k)] - pr) < std::abs(g.radii[static_cast<std::size_t>(kp)] - pr)) kp = k;
  double tp = std::arg(pole);
  if (tp < 0.0) tp += kTwoPi;
  const int jp = static_cast<int>(std::lround(tp / g.dt)) % g.nt;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nI);
  b(g.id(kp, jp)) = 1.0 / (g.radii[static_cast<std::size_t>(kp)] * g.h * g.dt);

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SolverFail, "sparse LU factorization failed");
  Eigen::VectorXd u = lu.solve(b);
  if (lu.info() != Eigen::Success || !u.allFinite()) throw Error(ErrorCode::SolverFail, "sparse solve failed");
  for (int it = 0; it < 3; ++it) u += lu.solve(b - A * u);  // iterative refinement
  if (!u.allFinite()) throw Error(ErrorCode::SolverFail, "sparse solve failed");

  BiharmonicSolution sol;
  sol.pole = std::polar(g.radii[static_cast<std::size_t>(kp)], jp * g.dt);
  double a_norm = 0.0;  // max row sum
  {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
    for (int k = 0; k < A.outerSize(); ++k)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it) rows[it.row()] += std::abs(it.value());
    a_norm = rows.maxCoeff();
  }
  sol.residual = (A * u - b).lpNorm<Eigen::Infinity>() /
                 (a_norm * u.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  sol.grid.radii = g.radii;
  for (int j = 0; j < g.nt; ++j) sol.grid.angles.push_back(j * g.dt);
  sol.grid.values = Eigen::MatrixXd::Zero(g.nr, g.nt);
  for (int k = g.first; k <= g.last; ++k)
    for (int j = 0; j < g.nt; ++j) sol.grid.values(k, j) = u(g.id(k, j));
  sol.min_value = sol.grid.values.minCoeff();
  sol.max_value = sol.grid.values.maxCoeff();

  const double tau = 1e-13 * std::max(std::abs(sol.max_value), std::abs(sol.min_value));
  for (int k = 0; k + 1 < g.nr; ++k)
    for (int j = 0; j < g.nt; ++j) {
      bool pos = false, neg = false;
      for (int dk = 0; dk <= 1; ++dk)
        for (int dj = 0; dj <= 1; ++dj) {
          const double v = sol.grid.values(k + dk, (j + dj) % g.nt);
          pos = pos || v > tau;
          neg = neg || v < -tau;
        }
      if (pos && neg) {
        sol.sign_change_cells.emplace_back(k, j);
        const double rc = 0.5 * (g.radii[static_cast<std::size_t>(k)] + g.radii[static_cast<std::size_t>(k + 1)]);
        sol.sign_change_locations.push_back(std::polar(rc, (j + 0.5) * g.dt));
      }
    }
  return sol;
}

namespace {

// Every cell of a has a cell of b within one coarse cell (coarse spacings dr, dt).
bool covered(const std::vector<cplx>& a, const std::vector<cplx>& b, double dr, double dt) {
  for (cplx p : a) {
    bool hit = false;
    for (cplx q : b) {
      double da = std::abs(std::arg(p / q));
      if (std::abs(std::abs(p) - std::abs(q)) <= 1.5 * dr && da <= 1.5 * dt) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

}  // namespace

RefinementReport biharmonic_refinement(double inner_radius, cplx pole, int n_rho, int n_theta) {
  RefinementReport rep{biharmonic_green(inner_radius, pole, n_rho, n_theta),
                       biharmonic_green(inner_radius, pole, 2 * n_rho, 2 * n_theta), 0.0, false, false};
  const double scale = std::max(std::abs(rep.coarse.min_value), 1e-6 * rep.coarse.max_value);
  rep.min_value_change = std::abs(rep.fine.min_value - rep.coarse.min_value) / scale;
  rep.resolution_warning = rep.min_value_change > 0.1;
  const double dr = rep.coarse.grid.radii[1] - rep.coarse.grid.radii[0];
  const double dt = rep.coarse.grid.angles[1] - rep.coarse.grid.angles[0];
  rep.sign_changes_stable = covered(rep.coarse.sign_change_locations, rep.fine.sign_change_locations, dr, dt) &&
                            covered(rep.fine.sign_change_locations, rep.coarse.sign_change_locations, dr, dt);
  return rep;
}

}  // namespace annulus
