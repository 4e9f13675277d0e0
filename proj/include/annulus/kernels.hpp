#pragma once

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "annulus/spaces.hpp"

namespace annulus {

using AnalyticFn = std::function<cplx(cplx)>;

enum class KernelForm { DiagonalSeries, GramInverse };

/// Truncated reproducing kernel K(z, w) of a tagged space in the Laurent
/// window -N..N.
class KernelEvaluator {
public:
  const AnnulusDomain& domain() const noexcept { return domain_; }
  const SpaceTag& tag() const noexcept { return tag_; }
  int truncation() const noexcept { return N_; }
  int quadrature() const noexcept { return m_; }
  KernelForm form() const noexcept { return form_; }
  /// Condition number of the scaled Gram (1 for the diagonal form).
  double condition() const noexcept { return condition_; }

  cplx operator()(cplx z, cplx w) const;
  /// K(., w) as a Laurent polynomial.
  LaurentPolynomial section(cplx w) const;
  AnalyticFn section_fn(cplx w) const;

private:
  friend KernelEvaluator build_kernel(const AnnulusDomain&, const SpaceTag&, int, int);
  KernelEvaluator(const AnnulusDomain& d, SpaceTag t, int N, int m)
      : domain_(d), tag_(std::move(t)), N_(N), m_(m) {}

  Eigen::VectorXcd dual(cplx w) const;  // conj of the scaled coefficients of K(., w)

  AnnulusDomain domain_;
  SpaceTag tag_;
  int N_;
  int m_;
  KernelForm form_ = KernelForm::DiagonalSeries;
  double condition_ = 1.0;
  Eigen::VectorXd scales_;
  Eigen::VectorXd diag_;  // scaled squared norms (diagonal form)
  Eigen::LLT<Eigen::MatrixXcd> chol_;
};

/// E^2 and A^2 without weight use the diagonal series; H^2 (whose monomials
/// are not orthogonal for harmonic measure) and all weighted tags invert the Gram.
KernelEvaluator build_kernel(const AnnulusDomain& domain, const SpaceTag& tag, int N = 64, int m = 512);

struct ReproduceResult {
  double residual;
  bool out_of_window;  // f has powers outside -N..N
};

/// |<f, K(., w)> - f(w)| by quadrature in the kernel's space.
ReproduceResult reproduce_check(const KernelEvaluator& K, const LaurentPolynomial& f, cplx w);

/// Winding number of f along the boundary of {rho_lo < |z| < rho_hi}.
int count_zeros(const AnalyticFn& f, std::pair<double, double> ring, int m = 512);
/// The whole domain as a ring, pulled in by 1e-9 relative to its width.
std::pair<double, double> full_ring(const AnnulusDomain& domain);

struct ZeroReport {
  int contour_count = 0;
  std::vector<cplx> locations;
  double residual = 0.0;
};

/// Polar grid scan for minima of |f| followed by Newton refinement.
ZeroReport locate_zeros(const AnalyticFn& f, const AnnulusDomain& domain, int expected,
                        std::pair<double, double> ring = {0.0, 0.0});

/// Newton with a central-difference derivative; returns the final point.
struct KernelZeroStudy {
  std::vector<std::pair<int, int>> ladder;  // (N, contour count) per truncation tried
  int truncation = 0;                       // first N whose count and zeros agree with the previous one
  ZeroReport zeros;
  double location_change = 0.0;  // max zero movement between the last two truncations
  bool stable = false;
};

/// Zeros of K(., w) over a doubling truncation ladder N0, 2 N0, ... <= N_max.
/// Near-boundary zeros need the tail of the kernel series resolved, so the
/// count at a single truncation is not trusted.
KernelZeroStudy kernel_zero_study(const AnnulusDomain& domain, const SpaceTag& tag, cplx w, int N0 = 64,
                                  int N_max = 256, int m = 512, double tol = 1e-8);

cplx newton_refine(const AnalyticFn& f, cplx z, int max_iter = 60);

}  // namespace annulus
