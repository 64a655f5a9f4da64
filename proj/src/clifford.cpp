#include "ctm/clifford.hpp"

#include <bit>
#include <cmath>

namespace ctm {

namespace {

// sign(a,b) = (-1)^{#(a&b)} * (-1)^{p(a,b)} with p(a,b) counting, for each
// generator in b, the generators of a with larger index that it must pass.
int8_t blade_sign(BladeMask a, BladeMask b) {
  int swaps = 0;
  for (BladeMask rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  swaps += std::popcount(a & b);  // squares e_i e_i = -1
  return (swaps & 1) ? int8_t{-1} : int8_t{1};
}

struct SignTable {
  std::array<std::array<int8_t, kMaxDim>, kMaxDim> s{};
  SignTable() {
    for (BladeMask a = 0; a < kMaxDim; ++a)
      for (BladeMask b = 0; b < kMaxDim; ++b) s[a][b] = blade_sign(a, b);
  }
};

const SignTable& signs() {
  static const SignTable t;
  return t;
}

int8_t conj_sign(BladeMask mask) {
  const int l = std::popcount(mask);
  return ((l * (l + 1) / 2) & 1) ? int8_t{-1} : int8_t{1};
}

}  // namespace

double Paravector::norm() const { return std::sqrt(norm_sq()); }

std::pair<double, BladeMask> blade_product(BladeMask a, BladeMask b) {
  if (a >= kMaxDim || b >= kMaxDim) throw InvalidArgument("blade mask out of range");
  return {double(signs().s[a][b]), a ^ b};
}

Multivector mul(const Multivector& x, const Multivector& y) {
  x.require_same(y);
  const int d = x.dim();
  Multivector out(x.m());
  const auto& tab = signs().s;
  for (int a = 0; a < d; ++a) {
    const double xa = x[BladeMask(a)];
    if (xa == 0.0) continue;
    const auto& row = tab[a];
    for (int b = 0; b < d; ++b) out[BladeMask(a ^ b)] += row[b] * xa * y[BladeMask(b)];
  }
  return out;
}

Multivector conj(const Multivector& x) {
  Multivector out(x.m());
  for (int i = 0; i < x.dim(); ++i) out[BladeMask(i)] = conj_sign(BladeMask(i)) * x[BladeMask(i)];
  return out;
}

Multivector NSc(const Multivector& x) {
  Multivector out = x;
  out[0] = 0.0;
  return out;
}

double norm_sq(const Multivector& x) {
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) s += x[BladeMask(i)] * x[BladeMask(i)];
  return s;
}

double norm(const Multivector& x) { return std::sqrt(norm_sq(x)); }

Parts parts(const Multivector& x) { return {Sc(x), NSc(x), norm(x)}; }

Eigen::MatrixXd left_mul_matrix(const Multivector& a) {
  const int d = a.dim();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(d, d);
  const auto& tab = signs().s;
  for (int i = 0; i < d; ++i) {
    const double ai = a[BladeMask(i)];
    if (ai == 0.0) continue;
    for (int t = 0; t < d; ++t) L(i ^ t, t) += tab[i][t] * ai;
  }
  return L;
}

Eigen::MatrixXd right_mul_matrix(const Multivector& a) {
  const int d = a.dim();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(d, d);
  const auto& tab = signs().s;
  for (int t = 0; t < d; ++t)
    for (int i = 0; i < d; ++i) {
      const double ai = a[BladeMask(i)];
      if (ai != 0.0) R(t ^ i, t) += tab[t][i] * ai;
    }
  return R;
}

std::optional<Multivector> try_inverse(const Multivector& a) {
  // m <= 2 is a division algebra (complex numbers, quaternions): conj(a)*a is
  // the real scalar |a|^2, every singular value of left_mul_matrix(a) equals
  // |a|, and the relative singular-value test reduces to a != 0.
  if (a.m() <= 2) {
    const double n2 = norm_sq(a);
    if (n2 == 0.0) return std::nullopt;
    return conj(a) * (1.0 / n2);
  }
  const Eigen::MatrixXd L = left_mul_matrix(a);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smax <= 0.0 || smin <= 1e-12 * smax) return std::nullopt;
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(a.dim());
  e0[0] = 1.0;
  const Multivector b = from_vec(a.m(), svd.solve(e0));
  const Multivector one = Multivector::scalar(a.m(), 1.0);
  if (norm(mul(a, b) - one) > 1e-10 || norm(mul(b, a) - one) > 1e-10)
    throw Error("inverse verification failed");
  return b;
}

Multivector inverse(const Multivector& a) {
  auto b = try_inverse(a);
  if (!b) throw NotInvertible();
  return *b;
}

}  // namespace ctm
