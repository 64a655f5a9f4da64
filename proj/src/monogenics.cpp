#include "ctm/monogenics.hpp"

#include "ctm/sphere_quad.hpp"

#include <algorithm>
#include <functional>
#include <cmath>

namespace ctm {

int HyperPoly::degree() const {
  int deg = 0;
  for (const auto& [k, c] : terms_) {
    int d = 0;
    for (int i = 0; i <= m_; ++i) d += key_exp(k, i);
    deg = std::max(deg, d);
  }
  return deg;
}

void HyperPoly::prune() {
  for (auto it = terms_.begin(); it != terms_.end();)
    it = (norm(it->second) == 0.0) ? terms_.erase(it) : std::next(it);
}

HyperPoly& HyperPoly::operator+=(const HyperPoly& o) {
  if (m_ != o.m_) throw DimensionMismatch(m_, o.m_);
  if (den_ == o.den_) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
  } else {
    // common denominator den * o.den, with a guard against runaway growth
    for (auto& [k, c] : terms_) c *= o.den_;
    const double scale = den_;
    den_ *= o.den_;
    for (const auto& [k, c] : o.terms_) add_term(k, c * scale);
    if (den_ > 1e15) {
      for (auto& [k, c] : terms_) c *= 1.0 / den_;
      den_ = 1.0;
    }
  }
  prune();
  return *this;
}

HyperPoly mul(const HyperPoly& a, const HyperPoly& b) {
  if (a.m_ != b.m_) throw DimensionMismatch(a.m_, b.m_);
  HyperPoly out(a.m_);
  out.den_ = a.den_ * b.den_;
  for (const auto& [ka, ca] : a.terms_)
    for (const auto& [kb, cb] : b.terms_)
      out.add_term(HyperPoly::key_add(ka, kb), mul(ca, cb));
  return out;
}

HyperPoly mul(const HyperPoly& a, const Multivector& lambda) {
  HyperPoly out(a.m_);
  out.den_ = a.den_;
  for (const auto& [k, c] : a.terms_) out.add_term(k, mul(c, lambda));
  return out;
}

HyperPoly conj(const HyperPoly& a) {
  HyperPoly out(a.m_);
  out.den_ = a.den_;
  for (const auto& [k, c] : a.terms_) out.add_term(k, conj(c));
  return out;
}

Multivector HyperPoly::eval(const Paravector& x) const {
  if (x.m != m_) throw DimensionMismatch(x.m, m_);
  Multivector acc(m_);
  for (const auto& [k, c] : terms_) {
    double mono = 1.0;
    for (int i = 0; i <= m_; ++i)
      for (int e = 0; e < key_exp(k, i); ++e) mono *= x.x[i];
    acc += mono * c;
  }
  return acc * (1.0 / den_);
}

HyperPoly hyper_variable(int m, int l) {
  if (l < 1 || l > m) throw InvalidArgument("hypercomplex variable index out of range");
  HyperPoly p(m);
  p.add_term(HyperPoly::key_bump(0, l, 1), Multivector::scalar(m, 1.0));  // x_l e_0
  p.add_term(HyperPoly::key_bump(0, 0, 1),
             -Multivector::basis(m, BladeMask(1) << (l - 1)));  // -x_0 e_l
  return p;
}

HyperPoly fueter(int m, const std::vector<int>& idx) {
  if (!std::is_sorted(idx.begin(), idx.end()))
    throw InvalidArgument("index multiset must be sorted nondecreasing");
  for (int l : idx)
    if (l < 1 || l > m) throw InvalidArgument("index entry out of range");
  if (idx.empty()) return HyperPoly::constant(m, Multivector::scalar(m, 1.0));

  HyperPoly sum(m);
  std::vector<int> perm = idx;
  long count = 0;
  do {
    HyperPoly prod = hyper_variable(m, perm[0]);
    for (std::size_t i = 1; i < perm.size(); ++i) prod = mul(prod, hyper_variable(m, perm[i]));
    sum += prod;  // integer terms, den 1 throughout
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  sum.set_den(double(count));
  return sum;
}

HyperPoly dirac_apply(const HyperPoly& p) {
  HyperPoly out(p.m());
  out.set_den(p.den());
  for (const auto& [k, c] : p.terms()) {
    for (int i = 0; i <= p.m(); ++i) {
      const int e = HyperPoly::key_exp(k, i);
      if (e == 0) continue;
      const Multivector ei = (i == 0) ? Multivector::scalar(p.m(), 1.0)
                                      : Multivector::basis(p.m(), BladeMask(1) << (i - 1));
      out.add_term(HyperPoly::key_bump(k, i, -1), double(e) * mul(ei, c));
    }
  }
  return out;
}

Multivector exact_inner(const HyperPoly& p, const HyperPoly& q) {
  if (p.m() != q.m()) throw DimensionMismatch(p.m(), q.m());
  const int m = p.m();
  const HyperPoly prod = mul(conj(q), p);
  Multivector acc(m);
  std::vector<int> alpha(m + 1);
  for (const auto& [k, c] : prod.terms()) {
    for (int i = 0; i <= m; ++i) alpha[i] = HyperPoly::key_exp(k, i);
    const double mom = monomial_moment(m, alpha);
    if (mom != 0.0) acc += mom * c;
  }
  return acc * (1.0 / prod.den());
}

std::vector<std::vector<int>> enumerate_Mk(int m, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  const std::function<void(int)> rec = [&](int lo) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int l = lo; l <= m; ++l) {
      cur.push_back(l);
      rec(l);
      cur.pop_back();
    }
  };
  rec(1);
  return out;
}

MonogenicBasis orthobasis_Mk(int m, int k) {
  if (k < 0) throw InvalidArgument("negative degree");
  MonogenicBasis out;
  out.indices = enumerate_Mk(m, k);
  std::vector<HyperPoly> V;
  V.reserve(out.indices.size());
  for (const auto& idx : out.indices) V.push_back(fueter(m, idx));

  const int n = static_cast<int>(V.size());
  std::vector<std::vector<Multivector>> G(n, std::vector<Multivector>(n, Multivector(m)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G[i][j] = exact_inner(V[i], V[j]);
  DenseGramOracle oracle(m, std::move(G));
  const GramSchmidtResult gs = gram_schmidt(oracle, n);

  for (int j = 0; j < n; ++j) {
    HyperPoly u(m);
    for (int i = 0; i <= j; ++i) u += mul(V[i], gs.lambda[j][i]);
    out.basis.push_back(std::move(u));
    if (!try_inverse(gs.self_grams[j]))
      throw Error("self inner product of basis element " + std::to_string(j + 1) +
                  " is not invertible");
  }
  out.self_grams = gs.self_grams;
  return out;
}

}  // namespace ctm
