#pragma once

#include <functional>
#include <vector>

#include "ctm/clifford.hpp"

namespace ctm {

// Quadrature rule on the unit sphere S^m in R^{m+1}, normalized so the
// weights sum to 1: sums against it approximate (1/omega_m) * surface
// integrals.  Exact for spherical polynomials up to the requested degree.
struct SphereGrid {
  int m = 0;
  int degree = 0;
  std::vector<Paravector> nodes;
  std::vector<double> weights;
};

// omega_m = 2 pi^{(m+1)/2} / Gamma((m+1)/2), the area of S^m.
double sphere_area(int m);

// (1/omega_m) * integral of x^alpha over S^m, alpha = (alpha_0..alpha_m):
// 0 when any alpha_i is odd, else prod_i (2b_i-1)!! / prod_{j=1}^{|b|} (d+2j-2)
// with d = m+1 and b_i = alpha_i/2.
double monomial_moment(int m, const std::vector<int>& alpha);

// Product rule: Gauss quadrature in each polar cosine against its surface
// weight (1-t^2)^{(m-i-1)/2}, equispaced points in the final azimuth.  The
// half-integer weights at the outer levels for even m-i need Gauss-Jacobi
// nodes; the plain Legendre rule is the special case of an exponent of zero.
SphereGrid build_grid(int m, int degree);

// sum_j weights[j] * samples[j], pairwise summation for reproducibility.
Multivector integrate(const SphereGrid& grid, const std::vector<Multivector>& samples);
double integrate_scalar(const SphereGrid& grid, const std::vector<double>& samples);

// Same sum with samples generated on the fly; avoids materializing large grids.
Multivector integrate(const SphereGrid& grid,
                      const std::function<Multivector(const Paravector&)>& f);

// Gauss nodes/weights on [-1,1] for the weight (1-t^2)^gamma, gamma >= 0,
// exact through polynomial degree 2n-1.  Exposed for the half-space lift.
void gauss_gegenbauer(int n, double gamma, std::vector<double>& nodes,
                      std::vector<double>& weights);

// Tensor-product quadrature over the box [-radius, radius]^m in the vector
// variables y_1..y_m (nodes have no e_0 component).  Weights are plain
// Lebesgue weights, so sums against it approximate integrals dy_1..dy_m.
struct FlatGrid {
  int m = 0;
  double radius = 0.0;
  std::vector<Paravector> nodes;
  std::vector<double> weights;
};

// Composite Gauss-Legendre: `panels` equal panels per axis, `points` nodes
// per panel.  Throws InvalidArgument when the tensor grid would exceed 2^21
// nodes.
FlatGrid build_flat_grid(int m, double radius, int panels, int points);

}  // namespace ctm
