#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "annulus/error.hpp"

namespace annulus {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// The ring {r < |z| < 1} together with a base point used by harmonic measure,
/// Green's functions and the Hardy norm. Outer radius is normalized to 1;
/// rescale externally for other annuli.
class AnnulusDomain {
public:
  double inner_radius() const noexcept { return r_; }
  cplx base_point() const noexcept { return base_; }

  bool contains(cplx z) const noexcept;
  /// Distance from z to the nearest boundary circle (negative outside).
  double boundary_distance(cplx z) const noexcept;
  /// Same domain with a different base point; validated.
  AnnulusDomain with_base(cplx base) const;

  double log_modulus() const noexcept;  // log(1/r)

private:
  friend AnnulusDomain make_annulus(double r, cplx base);
  AnnulusDomain(double r, cplx base) : r_(r), base_(base) {}

  double r_;
  cplx base_;
};

/// Throws Error(RejectGeometry) unless 0 < r < 1 and r < |base| < 1.
AnnulusDomain make_annulus(double r, cplx base);

/// Component 1 is the outer circle, 2 the inner one.
struct BoundarySample {
  int component;
  double angle;
  cplx point;
  double weight;  // arclength trapezoid weight

  double radius() const noexcept { return std::abs(point); }
};

/// m equally spaced trapezoid nodes on one boundary circle.
std::vector<BoundarySample> boundary_nodes(const AnnulusDomain& domain, int component, int m);

/// Nodes on both circles, outer first.
std::vector<BoundarySample> boundary_nodes(const AnnulusDomain& domain, int m);

struct ExhaustionStage {
  double inner_radius;
  double outer_radius;

  bool contains(cplx z) const noexcept {
    const double a = std::abs(z);
    return a > inner_radius && a < outer_radius;
  }
};

struct Exhaustion {
  std::vector<ExhaustionStage> stages;
};

/// Stage k (1-based) is {r + d_k < |z| < 1 - d_k} with d_k = (1 - r) / (4 (k + 1)).
Exhaustion exhaustion_of(const AnnulusDomain& domain, int stages);

}  // namespace annulus
