#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ctm/clifford.hpp"
#include "ctm/cmodule.hpp"

namespace ctm {

// Polynomial in x_0..x_m with Multivector coefficients.  Stored as
// terms/den with a shared scalar denominator: polynomials assembled from
// integer data (the hypercomplex variables and their symmetrized products)
// keep exactly integer term maps, so linear identities like the vanishing
// under the generalized Cauchy-Riemann operator cancel exactly.
class HyperPoly {
 public:
  // exponent key: byte i holds the exponent of x_i
  using Key = std::uint64_t;

  explicit HyperPoly(int m) : m_(m) {}
  static HyperPoly constant(int m, const Multivector& c) {
    HyperPoly p(m);
    p.add_term(0, c);
    return p;
  }

  int m() const { return m_; }
  double den() const { return den_; }
  const std::map<Key, Multivector>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  static Key key_add(Key a, Key b) { return a + b; }  // exponents stay < 256
  static int key_exp(Key k, int i) { return int((k >> (8 * i)) & 0xff); }
  static Key key_bump(Key k, int i, int delta) {
    return Key(std::int64_t(k) + std::int64_t(delta) * (std::int64_t(1) << (8 * i)));
  }

  HyperPoly& operator+=(const HyperPoly& o);
  HyperPoly& operator-=(const HyperPoly& o) { return *this += o * -1.0; }
  friend HyperPoly operator+(HyperPoly a, const HyperPoly& b) { return a += b; }
  friend HyperPoly operator-(HyperPoly a, const HyperPoly& b) { return a -= b; }
  friend HyperPoly operator*(HyperPoly a, double s) {
    for (auto& [k, c] : a.terms_) c *= s;
    a.prune();
    return a;
  }

  friend HyperPoly mul(const HyperPoly& a, const HyperPoly& b);
  // right-multiply every coefficient: p(x) * lambda
  friend HyperPoly mul(const HyperPoly& a, const Multivector& lambda);
  friend HyperPoly conj(const HyperPoly& a);

  Multivector eval(const Paravector& x) const;

  // raw term insertion: adds c to terms_[k] (the semantic coefficient gains c/den)
  void add_term(Key k, const Multivector& c) {
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) it->second += c;
    if (norm(it->second) == 0.0) terms_.erase(it);
  }
  void set_den(double den) { den_ = den; }

 private:
  void prune();
  int m_;
  double den_ = 1.0;
  std::map<Key, Multivector> terms_;
};

// z_l = x_l e_0 - x_0 e_l
HyperPoly hyper_variable(int m, int l);

// Symmetrized product over the distinguishable orderings of (l_1..l_k),
// divided by their count; the empty index gives e_0.
HyperPoly fueter(int m, const std::vector<int>& idx);

// D p = sum_{i=0..m} e_i * dp/dx_i (left multiplication by e_i, e_0 = 1).
HyperPoly dirac_apply(const HyperPoly& p);

// <p,q> = (1/omega_m) int_{S^m} conj(q) p dS via closed-form monomial moments.
Multivector exact_inner(const HyperPoly& p, const HyperPoly& q);

// Sorted index multisets of {1..m}^k in lexicographic order; size C(m+k-1, k).
std::vector<std::vector<int>> enumerate_Mk(int m, int k);

struct MonogenicBasis {
  std::vector<std::vector<int>> indices;  // enumeration order of the inputs
  std::vector<HyperPoly> basis;           // orthogonal U_j
  std::vector<Multivector> self_grams;    // <U_j, U_j>, each invertible
};

// Orthogonal basis of the degree-k inner spherical monogenics via
// gram_schmidt over the exact inner products.
MonogenicBasis orthobasis_Mk(int m, int k);

}  // namespace ctm
