#pragma once

#include <vector>

#include "ctm/clifford.hpp"

namespace ctm {

// Abstract pairing over an indexed family alpha_1..alpha_n of elements of a
// right A_m-module inner-product space, with the conventions
//   <f*lambda, g> = <f,g>*lambda,   <f, g*lambda> = conj(lambda)*<f,g>,
//   <f,g> = conj(<g,f>),            Sc<f,f> >= 0.
// external_cross(i) = <f, alpha_i> for one distinguished external element f
// (used when projecting f onto the orthogonalized system); optional.
class InnerProductOracle {
 public:
  virtual ~InnerProductOracle() = default;
  virtual int size() const = 0;
  virtual int algebra_m() const = 0;
  virtual Multivector pair(int i, int j) const = 0;  // <alpha_i, alpha_j>, 0-based
  virtual Multivector external_cross(int /*i*/) const {
    throw InvalidArgument("oracle has no external element");
  }
};

// Oracle over precomputed values.
class DenseGramOracle final : public InnerProductOracle {
 public:
  DenseGramOracle(int m, std::vector<std::vector<Multivector>> gram,
                  std::vector<Multivector> external = {})
      : m_(m), g_(std::move(gram)), ext_(std::move(external)) {}
  int size() const override { return static_cast<int>(g_.size()); }
  int algebra_m() const override { return m_; }
  Multivector pair(int i, int j) const override { return g_[i][j]; }
  Multivector external_cross(int i) const override {
    if (ext_.empty()) return InnerProductOracle::external_cross(i);
    return ext_[i];
  }

 private:
  int m_;
  std::vector<std::vector<Multivector>> g_;
  std::vector<Multivector> ext_;
};

// Least-squares / minimal-norm solution c of  mul(gram, c) = cross,
// gram = <beta,beta>, cross = <alpha,beta>; then beta*c is the orthogonal
// projection of alpha onto span(beta).  The pseudo-inverse of
// left_mul_matrix(gram) (cutoff 1e-12 relative) resolves the zero-divisor
// case deterministically with the minimal-Euclidean-norm coefficient.
// Throws InconsistentSystem if the least-squares residual exceeds 1e-10
// relative to the cross-product scale.
Multivector solve_coefficient(const Multivector& gram, const Multivector& cross);

struct GramSchmidtResult {
  // lambda[j] holds j+1 coefficients: beta_j = sum_{i<=j} alpha_i * lambda[j][i],
  // with lambda[j][j] = 1.
  std::vector<std::vector<Multivector>> lambda;
  // self_grams[j] = <beta_j, beta_j>
  std::vector<Multivector> self_grams;
};

// Orthogonalize alpha_1..alpha_n against the oracle's pairing.  Throws
// DegenerateElement (1-based index) when Sc<beta_j,beta_j> <= 1e-12 *
// Sc<alpha_j,alpha_j>, i.e. alpha_j lies in the span of its predecessors.
GramSchmidtResult gram_schmidt(const InnerProductOracle& oracle, int n);

// One orthogonalization step: append element j = gs.lambda.size() to gs.
// G[i][k] = <alpha_i, alpha_k> must be filled for all 0 <= i,k <= j.
// Same degeneracy rule as gram_schmidt.
void gram_schmidt_step(int m, const std::vector<std::vector<Multivector>>& G,
                       GramSchmidtResult& gs);

// <beta_j, beta_l> reconstructed from oracle pair values and the coefficient
// table; used to verify orthogonality of a computed system.
Multivector orthogonal_pair(const InnerProductOracle& oracle, const GramSchmidtResult& gs,
                            int j, int l);

// <f, beta_i> for the oracle's external element, for every i.
std::vector<Multivector> external_crosses(const InnerProductOracle& oracle,
                                          const GramSchmidtResult& gs);

}  // namespace ctm
