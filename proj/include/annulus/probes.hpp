#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "annulus/kernels.hpp"

namespace annulus {

struct PolarGrid {
  std::vector<double> radii;
  std::vector<double> angles;
  Eigen::MatrixXd values;  // radii.size() x angles.size()
};

/// Reproducing kernel of real harmonic functions in L^2(dA), dA = dx dy / pi,
/// on the annulus. Closed form: each angular frequency k contributes a 2x2
/// block in {rho^k, rho^-k}, and k = 0 the block {1, log rho}.
class HarmonicL2Kernel {
public:
  HarmonicL2Kernel(const AnnulusDomain& domain, int N = 256);
  double operator()(cplx z, cplx w) const;

private:
  double r_;
  int N_;
  Eigen::Matrix2d inv0_;               // block {1, log rho}
  std::vector<Eigen::Matrix2d> invk_;  // blocks {rho^k, (r/rho)^k}, k = 1..N
};

/// H(., z0) as a real evaluator.
std::function<double(cplx)> harmonic_l2_kernel(const AnnulusDomain& domain, cplx z0, int N = 256);

/// 2 Re K(z, z0) - 1 with K the Bergman kernel. On the disk this is the
/// harmonic kernel; on the annulus it does not even reproduce constants.
std::function<double(cplx)> bergman_harmonic_formula(const AnnulusDomain& domain, cplx z0, int N = 64);

/// 2 pi * integral_r^1 rho log rho d rho, by Gauss-Legendre.
double defect_constant(const AnnulusDomain& domain);

struct DecompositionFit {
  double lambda1;
  double residual;          // max |pairing - lambda1 * <nu_1, u>| over unit-norm test functions
  double projection_mean;   // constant removed from log|z| by the projection
};

/// Pairings <|G|^2 - H(., z0), u> in A^2 for real harmonic u of degree <= degree
/// (1, log rho, Re/Im z^{+-k}) fitted by lambda1 <nu_1, u>, where
/// nu_1 = log|z| - P log|z| and P projects onto real parts of z^n, |n| <= proj_N.
DecompositionFit bergman_decomposition_residual(const AnalyticFn& G, const AnnulusDomain& domain, cplx z0,
                                                int m = 512, int degree = 8, int proj_N = 16);

struct BiharmonicSolution {
  PolarGrid grid;
  cplx pole;
  double min_value = 0.0;
  double max_value = 0.0;
  std::vector<std::pair<int, int>> sign_change_cells;  // (radial, angular) lower-corner indices
  std::vector<cplx> sign_change_locations;             // cell centers
  double residual = 0.0;                               // normwise backward error |Au-b| / (|A||u| + |b|)
};

/// Clamped biharmonic Green's function by finite differences on a polar grid.
/// inner_radius = 0 selects the disk grid (half-shifted radii through the origin).
BiharmonicSolution biharmonic_green(double inner_radius, cplx pole, int n_rho, int n_theta);

struct RefinementReport {
  BiharmonicSolution coarse, fine;
  double min_value_change;    // relative change of min_value (scaled by max_value)
  bool resolution_warning;    // change above 10%
  bool sign_changes_stable;   // every cell has a partner within one coarse cell
};

RefinementReport biharmonic_refinement(double inner_radius, cplx pole, int n_rho, int n_theta);

}  // namespace annulus
