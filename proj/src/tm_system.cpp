#include "ctm/tm_system.hpp"

#include <cmath>
#include <optional>

namespace ctm {

namespace {

int pole_occurrences(const TMSystem& tm, const Paravector& a) {
  int occ = 0;
  for (const auto& atom : tm.atoms) {
    double d2 = 0;
    for (int i = 0; i <= tm.m; ++i) {
      const double d = atom.pole.x[i] - a.x[i];
      d2 += d * d;
    }
    if (std::sqrt(d2) <= 1e-9) ++occ;
  }
  return occ;
}

TMSystem extend_impl(const TMSystem& tm, const Paravector& a,
                     const std::optional<Paravector>& dup_direction) {
  if (a.m != tm.m) throw DimensionMismatch(tm.m, a.m);
  const int occ = pole_occurrences(tm, a) + 1;
  KernelAtom atom{tm.domain, a, std::nullopt};
  if (occ > 1) {
    if (occ > tm.m + 1) throw UnsupportedMultiplicity(occ, tm.m + 1);
    if (dup_direction) {
      atom.derivative = *dup_direction;
    } else {
      Paravector omega{tm.m, {}};
      omega.x[occ - 2] = 1.0;
      atom.derivative = omega;
    }
  }
  validate_atom(atom);

  TMSystem out = tm;
  const int j = out.size();
  out.atoms.push_back(atom);
  std::vector<Multivector> row;
  row.reserve(j + 1);
  for (int i = 0; i < j; ++i) row.push_back(gram_entry(atom, out.atoms[i]));
  row.push_back(gram_entry(atom, atom));
  for (int i = 0; i < j; ++i) out.gram[i].push_back(conj(row[i]));
  out.gram.push_back(std::move(row));

  gram_schmidt_step(out.m, out.gram, out.gs);
  const Multivector& self = out.gs.self_grams.back();
  if (!try_inverse(self)) throw NotInvertible();
  out.norms.push_back(std::sqrt(Sc(self)));
  return out;
}

}  // namespace

TMSystem make_tm(Domain domain, int m) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  TMSystem tm;
  tm.domain = domain;
  tm.m = m;
  return tm;
}

TMSystem extend(const TMSystem& tm, const Paravector& a) { return extend_impl(tm, a, {}); }

TMSystem extend(const TMSystem& tm, const Paravector& a, const Paravector& dup_direction) {
  return extend_impl(tm, a, dup_direction);
}

std::pair<Multivector, Multivector> evaluate(const TMSystem& tm, int n, const Paravector& x) {
  if (n < 1 || n > tm.size()) throw InvalidArgument("evaluate: index out of range");
  Multivector T(tm.m);
  for (int i = 0; i < n; ++i)
    T += mul(atom_eval(tm.atoms[i], x), tm.gs.lambda[n - 1][i]);
  return {T, T * (1.0 / tm.norms[n - 1])};
}

std::vector<Multivector> evaluate_T_all(const TMSystem& tm, const Paravector& x) {
  const int n = tm.size();
  std::vector<Multivector> atom_vals;
  atom_vals.reserve(n);
  for (const auto& atom : tm.atoms) atom_vals.push_back(atom_eval(atom, x));
  std::vector<Multivector> out;
  out.reserve(n);
  for (int j = 0; j < n; ++j) {
    Multivector T(tm.m);
    for (int i = 0; i <= j; ++i) T += mul(atom_vals[i], tm.gs.lambda[j][i]);
    out.push_back(std::move(T));
  }
  return out;
}

std::vector<double> scalar_gram_report(const TMSystem& tm) {
  std::vector<double> out;
  out.reserve(tm.size());
  for (const auto& g : tm.gs.self_grams) out.push_back(norm(NSc(g)) / Sc(g));
  return out;
}

}  // namespace ctm
