#include "ctm/cmodule.hpp"

#include <cmath>

namespace ctm {

Multivector solve_coefficient(const Multivector& gram, const Multivector& cross) {
  gram.require_same(cross);
  const Eigen::MatrixXd L = left_mul_matrix(gram);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-12);
  const Eigen::VectorXd b = to_vec(cross);
  const Eigen::VectorXd c = svd.solve(b);
  const double residual = (L * c - b).norm();
  if (residual > 1e-10 * std::max(1.0, b.norm())) throw InconsistentSystem(residual);
  return from_vec(gram.m(), c);
}

void gram_schmidt_step(int m, const std::vector<std::vector<Multivector>>& G,
                       GramSchmidtResult& gs) {
  const int j = static_cast<int>(gs.lambda.size());

  // projection coefficients of alpha_j onto each beta_i, i < j
  std::vector<Multivector> lam(j + 1, Multivector(m));
  lam[j] = Multivector::scalar(m, 1.0);
  for (int i = 0; i < j; ++i) {
    Multivector cross(m);  // <alpha_j, beta_i>
    for (int k = 0; k <= i; ++k) cross += mul(conj(gs.lambda[i][k]), G[j][k]);
    const Multivector c = solve_coefficient(gs.self_grams[i], cross);
    for (int k = 0; k <= i; ++k) lam[k] -= mul(gs.lambda[i][k], c);
  }

  // <beta_j, beta_j> as the full quadratic form of the coefficient table
  Multivector self(m);
  for (int k = 0; k <= j; ++k) {
    Multivector inner(m);
    for (int i = 0; i <= j; ++i) inner += mul(G[i][k], lam[i]);
    self += mul(conj(lam[k]), inner);
  }
  if (Sc(self) <= 1e-12 * Sc(G[j][j])) throw DegenerateElement(j + 1);

  gs.lambda.push_back(std::move(lam));
  gs.self_grams.push_back(std::move(self));
}

GramSchmidtResult gram_schmidt(const InnerProductOracle& oracle, int n) {
  if (n < 1 || n > oracle.size()) throw InvalidArgument("gram_schmidt: bad element count");
  const int m = oracle.algebra_m();
  GramSchmidtResult out;
  out.lambda.reserve(n);
  out.self_grams.reserve(n);

  // G[i][k] = <alpha_i, alpha_k> for i,k <= current step; the upper triangle
  // is filled by Hermitian symmetry to spare oracle calls.
  std::vector<std::vector<Multivector>> G;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < j; ++i) G[i].push_back(conj(oracle.pair(j, i)));
    G.emplace_back();
    for (int k = 0; k <= j; ++k) G[j].push_back(oracle.pair(j, k));
    gram_schmidt_step(m, G, out);
  }
  return out;
}

Multivector orthogonal_pair(const InnerProductOracle& oracle, const GramSchmidtResult& gs,
                            int j, int l) {
  const int m = oracle.algebra_m();
  Multivector out(m);
  for (int k = 0; k <= l; ++k) {
    Multivector inner(m);
    for (int i = 0; i <= j; ++i) inner += mul(oracle.pair(i, k), gs.lambda[j][i]);
    out += mul(conj(gs.lambda[l][k]), inner);
  }
  return out;
}

std::vector<Multivector> external_crosses(const InnerProductOracle& oracle,
                                          const GramSchmidtResult& gs) {
  const int m = oracle.algebra_m();
  const int n = static_cast<int>(gs.lambda.size());
  std::vector<Multivector> raw;
  raw.reserve(n);
  for (int k = 0; k < n; ++k) raw.push_back(oracle.external_cross(k));
  std::vector<Multivector> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Multivector v(m);
    for (int k = 0; k <= i; ++k) v += mul(conj(gs.lambda[i][k]), raw[k]);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace ctm
