#pragma once

#include <vector>

#include "ctm/afd.hpp"
#include "ctm/clifford.hpp"
#include "ctm/sphere_quad.hpp"

namespace ctm {

// Real samples on a sphere grid: boundary data for the ball.
struct BoundarySignal {
  SphereGrid grid;
  std::vector<double> samples;
};

// Real samples on a truncated flat grid: boundary data for the half space.
struct FlatSignal {
  FlatGrid grid;
  std::vector<double> samples;
};

// P(x, w) = (1/omega_m) (1 - |x|^2) / |x - w|^{m+1} for |x| < 1, |w| = 1.
// Throws EvaluationSingularity when |x - w| < 1e-12.
double poisson_kernel(int m, const Paravector& x, const Paravector& omega);

// Harmonic conjugate of the Poisson kernel:
//   Q(x, w) = [ (1/omega_m) int_0^1 (m+1) t^{m-1} (1 - t^2|x|^2)
//                                   / |tx - w|^{m+3} dt ] . NSc(conj(w) x),
// the radial integral by adaptive Gauss-Legendre to 1e-10.  Has no scalar
// part.
Multivector conjugate_kernel(int m, const Paravector& x, const Paravector& omega);

// S = P + Q, the monogenic completion kernel: integrating S against real
// boundary data yields a monogenic function whose scalar part converges to
// the data at the boundary.
Multivector schwarz_kernel(int m, const Paravector& x, const Paravector& omega);

// F(x) = sum_j w_j omega_m S(x, node_j) f_j.  Left monogenic; linear in f;
// Sc(F) is a Poisson average of f, so |Sc(F)| <= max |f|.
HardyFunction schwarz_lift(const BoundarySignal& f);

// Sc of the lift at x, by the plain Poisson sum (the conjugate kernel
// carries no scalar part, so this equals Sc(schwarz_lift(f).eval(x)) at a
// fraction of the cost).
double poisson_integral(const BoundarySignal& f, const Paravector& x);

// Samples F(rho . node) of a boundary-backed Hardy function on its own grid
// and returns them as the boundary values of the dilate x -> F(rho x).  The
// dilate supports exact inner products, so this is the bridge from a Schwarz
// lift to the greedy decomposition.
HardyFunction ring_resample(const HardyFunction& f, double rho);

// F(x) = (-1/omega_m) sum_j w_j conj(y_j - x)/|y_j - x|^{m+1} f_j for
// Sc(x) > 0: the half-space Cauchy integral over the truncated grid.
// 2 Sc(F) converges to f at the boundary.  Throws TruncationWarning when the
// outer eighth of the grid (per axis) holds more than 1% of the signal
// energy, i.e. the truncation radius is too small for the data.
HardyFunction cauchy_lift_halfspace(const FlatSignal& f);

}  // namespace ctm
