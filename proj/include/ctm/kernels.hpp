#pragma once

#include <optional>

#include "ctm/clifford.hpp"

namespace ctm {

enum class Domain { Ball, HalfSpace };

// Szego kernel S_a, or its first directional pole-derivative when
// `derivative` holds a unit direction: the atom nabla_omega S_y |_{y=pole}.
struct KernelAtom {
  Domain domain = Domain::Ball;
  Paravector pole;
  std::optional<Paravector> derivative;
};

// Throws PoleOutsideDomain / InvalidArgument on a bad pole or direction.
void validate_atom(const KernelAtom& atom);

// Ball:      S_a(x) = conj(1 - conj(a)x) / |1 - conj(a)x|^{m+1}
// HalfSpace: S_a(x) = conj(x + conj(a)) / |x + conj(a)|^{m+1}
Multivector szego_eval(Domain domain, const Paravector& a, const Paravector& x);

// Plain atoms via szego_eval; derivative atoms by Richardson-extrapolated
// central differences in the pole (steps h, h/2), h = 1e-4 * distance of the
// pole to the domain boundary.
Multivector atom_eval(const KernelAtom& atom, const Paravector& x);

// E(x) = conj(x) / |x|^{m+1}
Multivector cauchy_kernel(const Paravector& x);

// <atom_i, atom_j> by the reproducing identity, no quadrature: a plain atom
// with pole b reproduces values, <f, S_b> = f(b); a derivative atom
// reproduces the directional derivative, <f, grad_w S_y|_b> = (grad_w f)(b).
// All four plain/derivative combinations are closed forms assembled from the
// directional derivatives of w -> conj(w)/|w|^{m+1}; this keeps Hermitian
// symmetry at machine precision where nested finite differences would lose
// two orders.  Cross-checked against finite differences and boundary
// quadrature in tests.
Multivector gram_entry(const KernelAtom& ai, const KernelAtom& aj);

// Directional derivative of S_a(x) in the argument x along unit omega,
// closed form; used by gram_entry and exposed for the lift diagnostics.
Multivector szego_arg_derivative(Domain domain, const Paravector& a, const Paravector& x,
                                 const Paravector& omega);

namespace detail {
// N(w) = conj(w)/|w|^{m+1} and its first and second directional derivatives.
Multivector kernel_shape(const Multivector& w, int m);
Multivector kernel_shape_d(const Multivector& w, const Multivector& u, int m);
Multivector kernel_shape_dd(const Multivector& w, const Multivector& u, const Multivector& v,
                            int m);
// w(a, x) for the domain, as a multivector
Multivector kernel_w(Domain domain, const Paravector& a, const Paravector& x);
}  // namespace detail

}  // namespace ctm
