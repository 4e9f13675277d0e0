#include "annulus/geometry.hpp"

#include <cmath>
#include <sstream>

namespace annulus {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::RejectGeometry: return "REJECT_GEOMETRY";
    case ErrorCode::RejectArgument: return "REJECT_ARGUMENT";
    case ErrorCode::SingularGram: return "SINGULAR_GRAM";
    case ErrorCode::SingularConstraints: return "SINGULAR_CONSTRAINTS";
    case ErrorCode::ZeroOnContour: return "ZERO_ON_CONTOUR";
    case ErrorCode::ConvergenceFail: return "CONVERGENCE_FAIL";
    case ErrorCode::BlaschkeDivergent: return "BLASCHKE_DIVERGENT";
    case ErrorCode::PeriodUnresolved: return "PERIOD_UNRESOLVED";
    case ErrorCode::SolverFail: return "SOLVER_FAIL";
    case ErrorCode::UsageError: return "USAGE_ERROR";
  }
  return "UNKNOWN";
}

bool AnnulusDomain::contains(cplx z) const noexcept {
  const double a = std::abs(z);
  return a > r_ && a < 1.0;
}

double AnnulusDomain::boundary_distance(cplx z) const noexcept {
  const double a = std::abs(z);
  return std::min(a - r_, 1.0 - a);
}

AnnulusDomain AnnulusDomain::with_base(cplx base) const { return make_annulus(r_, base); }

double AnnulusDomain::log_modulus() const noexcept { return -std::log(r_); }

AnnulusDomain make_annulus(double r, cplx base) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "inner radius " << r << " outside (0,1)";
    throw Error(ErrorCode::RejectGeometry, os.str());
  }
  const double a = std::abs(base);
  if (!(a > r && a < 1.0)) {
    std::ostringstream os;
    os << "base point " << base << " not inside the open annulus r=" << r;
    throw Error(ErrorCode::RejectGeometry, os.str());
  }
  return AnnulusDomain(r, base);
}

std::vector<BoundarySample> boundary_nodes(const AnnulusDomain& domain, int component, int m) {
  if (m < 4) throw Error(ErrorCode::RejectArgument, "boundary_nodes needs m >= 4");
  if (component != 1 && component != 2)
    throw Error(ErrorCode::RejectArgument, "component must be 1 (outer) or 2 (inner)");

  const double radius = component == 1 ? 1.0 : domain.inner_radius();
  const double w = kTwoPi * radius / m;
  std::vector<BoundarySample> out;
  out.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double t = kTwoPi * k / m;
    out.push_back({component, t, std::polar(radius, t), w});
  }
  return out;
}

std::vector<BoundarySample> boundary_nodes(const AnnulusDomain& domain, int m) {
  auto out = boundary_nodes(domain, 1, m);
  auto inner = boundary_nodes(domain, 2, m);
  out.insert(out.end(), inner.begin(), inner.end());
  return out;
}

Exhaustion exhaustion_of(const AnnulusDomain& domain, int stages) {
  if (stages < 1) throw Error(ErrorCode::RejectArgument, "exhaustion needs at least one stage");
  const double r = domain.inner_radius();
  Exhaustion ex;
  for (int k = 1; k <= stages; ++k) {
    const double delta = (1.0 - r) / (4.0 * (k + 1));
    ExhaustionStage s{r + delta, 1.0 - delta};
    if (!s.contains(domain.base_point())) {
      std::ostringstream os;
      os << "base point " << domain.base_point() << " excluded from exhaustion stage " << k;
      throw Error(ErrorCode::RejectGeometry, os.str());
    }
    ex.stages.push_back(s);
  }
  return ex;
}

}  // namespace annulus
