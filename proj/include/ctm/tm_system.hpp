#pragma once

#include <utility>
#include <vector>

#include "ctm/cmodule.hpp"
#include "ctm/kernels.hpp"

namespace ctm {

// Orthogonal rational system built by Gram-Schmidt over Szego-kernel atoms:
//   T_n = sum_{i<=n} atom_i * lambda[n][i],  lambda[n][n] = 1,
//   B_n = T_n / ||T_n||,  ||T_n|| = sqrt(Sc<T_n,T_n>).
// All Gram data comes from the reproducing identity (gram_entry); quadrature
// never enters the construction.
struct TMSystem {
  Domain domain = Domain::Ball;
  int m = 0;
  std::vector<KernelAtom> atoms;
  GramSchmidtResult gs;       // lambda rows + self_grams <T_n,T_n>
  std::vector<double> norms;  // ||T_n||
  // cached pairings gram[i][j] = <atom_i, atom_j>, kept square for extension
  std::vector<std::vector<Multivector>> gram;

  int size() const { return static_cast<int>(atoms.size()); }
};

TMSystem make_tm(Domain domain, int m);

// Append the atom for pole a: a plain kernel atom when a is new (Euclidean
// distance > 1e-9 from every existing pole), else a first-derivative atom.
// The k-th repeat of a pole differentiates along e_{k-1} by default; pass
// dup_direction to override.  Repeats beyond m+1 total occurrences would need
// higher-order derivatives and raise UnsupportedMultiplicity.
TMSystem extend(const TMSystem& tm, const Paravector& a);
TMSystem extend(const TMSystem& tm, const Paravector& a, const Paravector& dup_direction);

// (T_n(x), B_n(x)); n is 1-based.
std::pair<Multivector, Multivector> evaluate(const TMSystem& tm, int n, const Paravector& x);

// T_1(x) .. T_N(x) sharing one atom evaluation per atom.
std::vector<Multivector> evaluate_T_all(const TMSystem& tm, const Paravector& x);

// |NSc<T_n,T_n>| / Sc<T_n,T_n> for each n: how far each self-pairing is from
// being a positive real number.
std::vector<double> scalar_gram_report(const TMSystem& tm);

}  // namespace ctm
