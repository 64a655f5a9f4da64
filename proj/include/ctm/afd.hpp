#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ctm/clifford.hpp"
#include "ctm/kernels.hpp"
#include "ctm/sphere_quad.hpp"
#include "ctm/tm_system.hpp"

namespace ctm {

struct AtomTerm {
  KernelAtom atom;
  Multivector coeff;
};

// Hardy-space function under one of four representations:
//   AtomCombo       f = sum_k atom_k . c_k, coefficients on the right
//   BoundarySzego   boundary values on a sphere grid; interior evaluation by
//                   one kernel quadrature, f(x) = <f, S_x>
//   BoundarySchwarz real boundary data; evaluation through the monogenic
//                   completion kernel (Poisson + conjugate part)
//   FlatCauchy      real data on a truncated flat grid; evaluation by the
//                   half-space Cauchy integral
// The squared norm is cached: atom combinations use the exact pairwise Gram
// table, sphere samples the weighted sum of squared sample norms.  The two
// real-data representations compute it lazily from a resampling pass (the
// 0.99-dilate for Schwarz, a thin slice above the boundary for FlatCauchy)
// since their boundary values are not stored directly.
//
// inner_atom is exact for AtomCombo (Gram table) and BoundarySzego (one
// quadrature).  The real-data representations do not support it: restrict
// them through ring_resample first, which pins down the approximation
// explicitly instead of hiding it here.
class HardyFunction {
 public:
  enum class Rep { AtomCombo, BoundarySzego, BoundarySchwarz, FlatCauchy };

  static HardyFunction atom_combo(Domain domain, int m, std::vector<AtomTerm> terms);
  static HardyFunction boundary(Domain domain, int m, SphereGrid grid,
                                std::vector<Multivector> samples);
  static HardyFunction boundary_schwarz(int m, SphereGrid grid, std::vector<double> samples);
  static HardyFunction flat_cauchy(int m, FlatGrid grid, std::vector<double> samples);

  Rep rep() const { return rep_; }
  Domain domain() const { return domain_; }
  int m() const { return m_; }
  double norm_sq() const;

  // f(x) at an interior point of the domain.
  Multivector eval(const Paravector& x) const;

  // <f, atom>.
  Multivector inner_atom(const KernelAtom& atom) const;

  // Non-null only for the matching representation.
  const std::vector<AtomTerm>* atoms() const;
  const SphereGrid* boundary_grid() const;
  const std::vector<Multivector>* boundary_samples() const;
  const std::vector<double>* real_samples() const;
  const FlatGrid* flat_grid() const;

 private:
  HardyFunction() = default;
  Domain domain_ = Domain::Ball;
  int m_ = 0;
  Rep rep_ = Rep::AtomCombo;
  std::vector<AtomTerm> terms_;
  SphereGrid grid_;
  std::vector<Multivector> samples_;
  std::vector<double> real_samples_;
  FlatGrid flat_;
  mutable std::optional<double> norm_sq_;
};

// Candidate poles for the greedy search: radial levels times a product grid
// of spherical angles, radius-major so the flat index orders (radius, angles)
// lexicographically.  Argmax ties keep the lowest flat index.  The direction
// list doubles as the search grid for derivative directions at repeated
// poles.
struct SearchGrid {
  int m = 0;
  std::vector<double> radii;
  std::vector<int> angle_counts;               // m counts; last angle spans [0, 2pi)
  int refine_rounds = 2;
  double radial_spacing = 0.05;
  std::vector<Paravector> directions;          // unit vectors, angle-lexicographic
  std::vector<Paravector> candidates;          // radii x directions, radius-major
  std::vector<std::array<double, 7>> params;   // (r, theta_1..theta_m) per candidate
};

// Radii {0, dr, ..., <= r_max}; default angle counts are 24 per angle for
// m <= 2 and 12 for m >= 3.
SearchGrid make_search_grid(int m, double dr = 0.05, double r_max = 0.95,
                            std::vector<int> angle_counts = {});

// Greedy decomposition state.  Everything derivable from (tm, f) is cached:
// <f, atom_k> per atom, e_n = <f, T_n>, the self-Gram inverses, the running
// projection coefficients, and per-candidate residual values and Gram sums
// on the search grid so each sweep costs O(candidates x steps) instead of
// O(candidates x steps^2).
struct AfdState {
  TMSystem tm;
  SearchGrid grid;
  double f_norm_sq = 0.0;
  std::vector<Multivector> atom_inners;    // <f, atom_k>
  std::vector<Multivector> cross;          // e_n = <f, T_n>
  std::vector<Multivector> gram_inv;       // <T_n, T_n>^{-1}
  std::vector<Multivector> proj;           // gram_inv[n] . e_n
  std::vector<Multivector> coeffs;         // c_n = ||T_n|| . proj[n]
  std::vector<double> term_energies;       // ||B_n c_n||^2
  double residual_energy = 0.0;
  std::vector<Paravector> poles;           // selection history
  // per-candidate caches, aligned with grid.candidates
  std::vector<Multivector> cand_f;         // f(a_c)
  std::vector<Multivector> cand_res;       // f_n(a_c)
  std::vector<Multivector> cand_gramsum;   // sum_i T_i(a_c) g_i^{-1} conj(T_i(a_c))
};

// Ball only; throws InvalidArgument for half-space or Schwarz-backed
// functions (restrict the latter with ring_resample first) and
// DimensionMismatch when grid and f disagree.  Passing a default-constructed
// grid builds the standard one for f's dimension.
AfdState afd_init(const HardyFunction& f, SearchGrid grid = {});

// Energy captured by appending pole `a` next: with e = f_n(a) the residual
// value and G = 1 - (1-|a|^2)^m sum_i T_i(a) g_i^{-1} conj(T_i(a)) the scaled
// candidate Gram, returns (1-|a|^2)^m Sc(conj(e) G^{-1} e).  Throws
// InvalidArgument when `a` coincides with a selected pole (that limit is the
// derivative atom's energy, handled inside the search).
double term_energy(const AfdState& state, const Paravector& a, const HardyFunction& f);

// Argmax of term_energy over the grid, then `refine_rounds` local rounds with
// halved spacing around the incumbent.  A candidate at an already-selected
// pole scores the best derivative-direction energy there; candidates within
// 1e-4 of a selected pole (but not at it) are skipped as 0/0 cancellation
// noise.  Ties keep the lowest candidate index.  When every candidate scores
// <= 1e-14 * ||f||^2 the first grid point is returned.
Paravector msp_search(const AfdState& state, const HardyFunction& f, const SearchGrid& grid);

// One greedy step: search (a repeated pole enters through a derivative atom
// in its best direction), extend the system, and fold <f, T_n> into the
// coefficient, energy, and residual bookkeeping.  residual_energy is
// recomputed as ||f||^2 - sum of term energies.
AfdState afd_step(const AfdState& state, const HardyFunction& f);

// Steps until residual_energy < stop_tol * ||f||^2, the best candidate energy
// is below 1e-14 * ||f||^2, or n_max terms.
AfdState afd_run(const HardyFunction& f, int n_max, double stop_tol = 1e-8,
                 SearchGrid grid = {});

// sum_n T_n(x) proj[n]  ( = sum_n B_n(x) c_n ).
Multivector reconstruct(const AfdState& state, const Paravector& x);

// Builds the orthogonal system for the poles as given and reversed, projects
// f onto both, and returns the norm of the difference of the two projections
// (zero in exact arithmetic: both span the same space).
double reorder_projection_check(const std::vector<Paravector>& poles, const HardyFunction& f);

}  // namespace ctm
