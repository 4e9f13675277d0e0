#include "annulus/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace annulus {

Eigen::VectorXcd KernelEvaluator::dual(cplx w) const {
  const Eigen::VectorXcd e = basis_values(scales_, N_, w);
  if (form_ == KernelForm::DiagonalSeries) return e.cwiseQuotient(diag_.cast<cplx>());
  return chol_.solve(e);
}

cplx KernelEvaluator::operator()(cplx z, cplx w) const {
  return basis_values(scales_, N_, z).transpose() * dual(w).conjugate();
}

LaurentPolynomial KernelEvaluator::section(cplx w) const {
  const Eigen::VectorXcd y = dual(w);
  LaurentPolynomial L = LaurentPolynomial::zero(-N_, N_);
  for (int n = -N_; n <= N_; ++n) L[n] = std::conj(y(n + N_)) / scales_(n + N_);
  return L;
}

AnalyticFn KernelEvaluator::section_fn(cplx w) const {
  Eigen::VectorXcd y = dual(w).conjugate();
  return [y, s = scales_, N = N_](cplx z) -> cplx { return basis_values(s, N, z).transpose() * y; };
}

KernelEvaluator build_kernel(const AnnulusDomain& domain, const SpaceTag& tag, int N, int m) {
  KernelEvaluator K(domain, tag, N, m);
  K.scales_ = basis_scales(domain, N);
  if (!tag.weighted() && tag.kind != SpaceKind::HardyHarmonicMeasure) {
    const auto d = monomial_norms(domain, tag, N);
    K.diag_.resize(2 * N + 1);
    for (int i = 0; i < 2 * N + 1; ++i) K.diag_(i) = d[static_cast<std::size_t>(i)] / (K.scales_(i) * K.scales_(i));
    K.form_ = KernelForm::DiagonalSeries;
    K.condition_ = 1.0;
    return K;
  }
  const Eigen::MatrixXcd G = scaled_gram_matrix(domain, tag, N, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  K.condition_ = lo > 0.0 ? hi / lo : INFINITY;
  if (!(K.condition_ <= 1e14)) {
    std::ostringstream os;
    os << "Gram condition number " << K.condition_ << " exceeds 1e14";
    throw Error(ErrorCode::SingularGram, os.str());
  }
  K.chol_.compute(G);
  if (K.chol_.info() != Eigen::Success) throw Error(ErrorCode::SingularGram, "Cholesky factorization failed");
  K.form_ = KernelForm::GramInverse;
  return K;
}

ReproduceResult reproduce_check(const KernelEvaluator& K, const LaurentPolynomial& f, cplx w) {
  const int N = K.truncation();
  ReproduceResult res{};
  const LaurentPolynomial ft = f.trimmed();
  res.out_of_window = ft.lo() < -N || ft.hi() > N;
  const auto measure = space_measure(K.domain(), K.tag(), std::max(K.quadrature(), 4 * N + 4));
  const AnalyticFn k = K.section_fn(w);
  res.residual = std::abs(inner_product([&](cplx z) { return f(z); }, k, measure) - f(w));
  return res;
}

namespace {

constexpr double kContourFloor = 1e-10;

// Total change of arg f along |z| = rho (counterclockwise), in turns.
double winding_on_circle(const AnalyticFn& f, double rho, int m) {
  for (int mm = std::max(m, 16);; mm *= 2) {
    std::vector<cplx> v(static_cast<std::size_t>(mm));
    for (int k = 0; k < mm; ++k) {
      v[static_cast<std::size_t>(k)] = f(std::polar(rho, kTwoPi * k / mm));
      if (std::abs(v[static_cast<std::size_t>(k)]) < kContourFloor) {
        std::ostringstream os;
        os << "|f| < 1e-10 on the circle |z| = " << rho;
        throw Error(ErrorCode::ZeroOnContour, os.str());
      }
    }
    double total = 0.0, worst = 0.0;
    for (int k = 0; k < mm; ++k) {
      const double d = std::arg(v[static_cast<std::size_t>((k + 1) % mm)] / v[static_cast<std::size_t>(k)]);
      total += d;
      worst = std::max(worst, std::abs(d));
    }
    if (worst <= 0.5 * std::numbers::pi) return total / kTwoPi;
    if (mm >= (1 << 18)) throw Error(ErrorCode::ConvergenceFail, "phase unwrapping did not resolve");
  }
}

}  // namespace

int count_zeros(const AnalyticFn& f, std::pair<double, double> ring, int m) {
  const auto [lo, hi] = ring;
  if (!(lo > 0.0 && lo < hi)) throw Error(ErrorCode::RejectArgument, "ring needs 0 < rho_lo < rho_hi");
  const double w = winding_on_circle(f, hi, m) - winding_on_circle(f, lo, m);
  const double n = std::round(w);
  if (std::abs(w - n) > 0.25) throw Error(ErrorCode::ConvergenceFail, "winding number not near an integer");
  return static_cast<int>(n);
}

std::pair<double, double> full_ring(const AnnulusDomain& domain) {
  const double r = domain.inner_radius(), eps = 1e-9 * (1.0 - r);
  return {r + eps, 1.0 - eps};
}

cplx newton_refine(const AnalyticFn& f, cplx z, int max_iter) {
  for (int it = 0; it < max_iter; ++it) {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const cplx fz = f(z);
    const cplx d = (f(z + h) - f(z - h)) / (2.0 * h);
    if (d == cplx{}) break;
    cplx step = fz / d;
    if (std::abs(step) > 0.1) step *= 0.1 / std::abs(step);
    z -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

ZeroReport locate_zeros(const AnalyticFn& f, const AnnulusDomain& domain, int expected,
                        std::pair<double, double> ring) {
  const double r = domain.inner_radius();
  if (ring.first <= 0.0 && ring.second <= 0.0) ring = {r, 1.0};
  if (expected < 0) throw Error(ErrorCode::RejectArgument, "expected zero count must be non-negative");

  ZeroReport rep;
  {
    const double eps = 1e-9 * (ring.second - ring.first);
    rep.contour_count = count_zeros(f, {ring.first + eps, ring.second - eps});
  }

  constexpr int n = 64;
  const double dr = (ring.second - ring.first) / n;
  std::vector<double> mag(n * n);
  std::vector<cplx> pts(n * n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const cplx z = std::polar(ring.first + (i + 0.5) * dr, kTwoPi * k / n);
      pts[i * n + k] = z;
      mag[i * n + k] = std::abs(f(z));
    }
  std::vector<double> sorted = mag;
  std::nth_element(sorted.begin(), sorted.begin() + n * n / 2, sorted.end());
  const double tol = 1e-10 * std::max(1.0, sorted[n * n / 2]);

  std::vector<int> cand;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double v = mag[i * n + k];
      bool local_min = true;
      for (int di = -1; di <= 1 && local_min; ++di)
        for (int dk = -1; dk <= 1; ++dk) {
          if ((di == 0 && dk == 0) || i + di < 0 || i + di >= n) continue;
          if (mag[(i + di) * n + (k + dk + n) % n] < v) {
            local_min = false;
            break;
          }
        }
      if (local_min) cand.push_back(i * n + k);
    }
  std::sort(cand.begin(), cand.end(), [&](int a, int b) { return mag[a] < mag[b]; });

  double best = INFINITY;
  for (int c : cand) {
    if (static_cast<int>(rep.locations.size()) >= expected) break;
    const cplx z = newton_refine(f, pts[c]);
    const double res = std::abs(f(z));
    const double az = std::abs(z);
    if (az <= ring.first || az >= ring.second) continue;
    best = std::min(best, res);
    if (res > tol) continue;
    bool dup = false;
    for (cplx p : rep.locations) dup = dup || std::abs(p - z) < 1e-7;
    if (dup) continue;
    rep.locations.push_back(z);
    rep.residual = std::max(rep.residual, res);
  }
  if (static_cast<int>(rep.locations.size()) < expected) {
    std::ostringstream os;
    os << "located " << rep.locations.size() << " of " << expected << " zeros; best residual " << best;
    throw Error(ErrorCode::ConvergenceFail, os.str());
  }
  return rep;
}

KernelZeroStudy kernel_zero_study(const AnnulusDomain& domain, const SpaceTag& tag, cplx w, int N0, int N_max,
                                  int m, double tol) {
  if (N0 < 1 || N_max < N0) throw Error(ErrorCode::RejectArgument, "kernel zero ladder needs 1 <= N0 <= N_max");
  if (!domain.contains(w)) throw Error(ErrorCode::RejectGeometry, "kernel point not interior");
  KernelZeroStudy st;
  std::optional<ZeroReport> prev;
  for (int N = N0; N <= N_max; N *= 2) {
    const KernelEvaluator K = build_kernel(domain, tag, N, std::max(m, 4 * N + 4));
    const AnalyticFn k = K.section_fn(w);
    std::optional<ZeroReport> cur;
    int count = -1;
    try {
      count = count_zeros(k, full_ring(domain));
      cur = locate_zeros(k, domain, count);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ConvergenceFail && e.code() != ErrorCode::ZeroOnContour) throw;
    }
    st.ladder.emplace_back(N, count);
    if (cur && prev && cur->contour_count == prev->contour_count) {
      double change = 0.0;
      for (cplx z : cur->locations) {
        double d = INFINITY;
        for (cplx p : prev->locations) d = std::min(d, std::abs(z - p));
        change = std::max(change, d);
      }
      st.truncation = N;
      st.zeros = *cur;
      st.location_change = change;
      if (change <= tol) {
        st.stable = true;
        return st;
      }
    }
    prev = cur;
  }
  if (st.truncation == 0) throw Error(ErrorCode::ConvergenceFail, "kernel zero count did not stabilize over the ladder");
  return st;
}

}  // namespace annulus
