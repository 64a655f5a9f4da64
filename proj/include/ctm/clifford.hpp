#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "ctm/errors.hpp"

namespace ctm {

inline constexpr int kMinM = 1;
inline constexpr int kMaxM = 6;
inline constexpr int kMaxDim = 1 << kMaxM;

// Bitmask over generator indices {1..m}: bit i-1 set <=> e_i is a factor.
// Mask 0 is the unit e_0.
using BladeMask = unsigned;

// Element of the real Clifford algebra A_m generated by e_1..e_m with
// e_i e_j + e_j e_i = -2 delta_ij.  Coefficients are indexed by BladeMask.
// Fixed-capacity storage keeps arithmetic allocation-free.
class Multivector {
 public:
  explicit Multivector(int m) : m_(check_m(m)), dim_(1 << m) { c_.fill(0.0); }

  static Multivector scalar(int m, double s) {
    Multivector x(m);
    x.c_[0] = s;
    return x;
  }
  static Multivector basis(int m, BladeMask mask) {
    Multivector x(m);
    if (mask >= static_cast<BladeMask>(x.dim_))
      throw InvalidArgument("blade mask out of range for algebra dimension");
    x.c_[mask] = 1.0;
    return x;
  }

  int m() const { return m_; }
  int dim() const { return dim_; }

  double operator[](BladeMask mask) const { return c_[mask]; }
  double& operator[](BladeMask mask) { return c_[mask]; }

  Multivector& operator+=(const Multivector& o) {
    require_same(o);
    for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Multivector& operator-=(const Multivector& o) {
    require_same(o);
    for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Multivector& operator*=(double s) {
    for (int i = 0; i < dim_; ++i) c_[i] *= s;
    return *this;
  }
  friend Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend Multivector operator*(Multivector a, double s) { return a *= s; }
  friend Multivector operator*(double s, Multivector a) { return a *= s; }
  friend Multivector operator/(Multivector a, double s) { return a *= 1.0 / s; }
  friend Multivector operator-(Multivector a) { return a *= -1.0; }

  void require_same(const Multivector& o) const {
    if (m_ != o.m_) throw DimensionMismatch(m_, o.m_);
  }

 private:
  static int check_m(int m) {
    if (m < kMinM || m > kMaxM)
      throw InvalidArgument("algebra dimension m must be in [1,6], got " + std::to_string(m));
    return m;
  }
  int m_;
  int dim_;
  std::array<double, kMaxDim> c_;
};

// Vector-form Clifford number x = x_0 e_0 + x_1 e_1 + ... + x_m e_m.
struct Paravector {
  int m = 0;
  std::array<double, kMaxM + 1> x{};

  Multivector to_multivector() const {
    Multivector v(m);
    v[0] = x[0];
    for (int i = 1; i <= m; ++i) v[BladeMask(1) << (i - 1)] = x[i];
    return v;
  }
  double norm_sq() const {
    double s = 0.0;
    for (int i = 0; i <= m; ++i) s += x[i] * x[i];
    return s;
  }
  double norm() const;
  Paravector conj() const {
    Paravector p = *this;
    for (int i = 1; i <= m; ++i) p.x[i] = -p.x[i];
    return p;
  }
};

// Signed product of basis blades: e_a e_b = sign * e_{a XOR b}.
std::pair<double, BladeMask> blade_product(BladeMask a, BladeMask b);

Multivector mul(const Multivector& x, const Multivector& y);
inline Multivector operator*(const Multivector& x, const Multivector& y) { return mul(x, y); }

// Clifford conjugation: anti-automorphism with conj(e_i) = -e_i, conj(e_0) = e_0.
Multivector conj(const Multivector& x);

inline double Sc(const Multivector& x) { return x[0]; }
Multivector NSc(const Multivector& x);
double norm(const Multivector& x);       // Euclidean norm of the coefficient vector
double norm_sq(const Multivector& x);

struct Parts {
  double sc;
  Multivector nsc;
  double norm;
};
Parts parts(const Multivector& x);

// Matrix of left multiplication on coefficient vectors: column T holds a * e_T.
Eigen::MatrixXd left_mul_matrix(const Multivector& a);
// Matrix of right multiplication: column T holds e_T * a.
Eigen::MatrixXd right_mul_matrix(const Multivector& a);

inline Eigen::VectorXd to_vec(const Multivector& x) {
  Eigen::VectorXd v(x.dim());
  for (int i = 0; i < x.dim(); ++i) v[i] = x[i];
  return v;
}
inline Multivector from_vec(int m, const Eigen::VectorXd& v) {
  Multivector x(m);
  for (int i = 0; i < x.dim(); ++i) x[i] = v[i];
  return x;
}

// Two-sided inverse, or nullopt when left_mul_matrix(a) is singular
// (smallest singular value <= 1e-12 x largest; a is zero or a zero divisor).
std::optional<Multivector> try_inverse(const Multivector& a);

// Throwing variant of try_inverse.
Multivector inverse(const Multivector& a);

}  // namespace ctm
