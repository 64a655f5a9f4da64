#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ctm/cmodule.hpp"
#include "test_util.hpp"

using namespace ctm;
using testutil::approx_eq;
using testutil::random_mv;

namespace {

Multivector e(int m, BladeMask mask) { return Multivector::basis(m, mask); }

// Free right A_m-module with S orthonormal slots: elements are S-tuples,
// <u,v> = sum_s conj(v_s) u_s, (u*lam)_s = u_s*lam.  Every inner-product
// axiom holds by construction, which makes it a reference model for the
// abstract oracle machinery.
struct FreeModule {
  int m, S;
  using Elem = std::vector<Multivector>;

  Elem zero() const { return Elem(S, Multivector(m)); }
  Elem random(std::mt19937_64& rng) const {
    Elem u;
    for (int s = 0; s < S; ++s) u.push_back(random_mv(m, rng));
    return u;
  }
  Multivector ip(const Elem& u, const Elem& v) const {
    Multivector out(m);
    for (int s = 0; s < S; ++s) out += mul(conj(v[s]), u[s]);
    return out;
  }
  Elem act(Elem u, const Multivector& lam) const {
    for (auto& c : u) c = mul(c, lam);
    return u;
  }
  Elem sub(Elem u, const Elem& v) const {
    for (int s = 0; s < S; ++s) u[s] -= v[s];
    return u;
  }
  Elem add(Elem u, const Elem& v) const {
    for (int s = 0; s < S; ++s) u[s] += v[s];
    return u;
  }
  double norm(const Elem& u) const { return std::sqrt(Sc(ip(u, u))); }

  DenseGramOracle oracle(const std::vector<Elem>& alphas, const Elem* f = nullptr) const {
    const int n = static_cast<int>(alphas.size());
    std::vector<std::vector<Multivector>> G(n, std::vector<Multivector>(n, Multivector(m)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) G[i][j] = ip(alphas[i], alphas[j]);
    std::vector<Multivector> ext;
    if (f)
      for (int k = 0; k < n; ++k) ext.push_back(ip(*f, alphas[k]));
    return DenseGramOracle(m, std::move(G), std::move(ext));
  }
};

}  // namespace

TEST_CASE("solve_coefficient: scalar and worked cases") {
  const Multivector c1 = solve_coefficient(Multivector::scalar(2, 2.0), e(2, 0b01));
  CHECK(approx_eq(c1, e(2, 0b01) * 0.5, 1e-14));

  // first-degree orthogonalization data for m = 2
  const Multivector c2 = solve_coefficient(Multivector::scalar(2, 2.0 / 3.0), -e(2, 0b11) / 3.0);
  CHECK(approx_eq(c2, -e(2, 0b11) * 0.5, 1e-14));
}

TEST_CASE("solve_coefficient: zero-divisor gram, minimal-norm coefficient") {
  const Multivector z = Multivector::scalar(3, 1.0) + e(3, 0b111);  // zero divisor
  const Multivector c = solve_coefficient(z, z);
  CHECK(approx_eq(mul(z, c), z, 1e-12));

  // minimal Euclidean norm among all solutions c + k, k in ker(left_mul_matrix(z))
  const Eigen::MatrixXd L = left_mul_matrix(z);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto& sv = svd.singularValues();
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::VectorXd k = Eigen::VectorXd::Zero(8);
    for (int i = 0; i < 8; ++i)
      if (sv(i) <= 1e-12 * sv(0)) k += u(rng) * svd.matrixV().col(i);
    if (k.norm() == 0.0) continue;
    const Multivector alt = c + from_vec(3, k);
    CHECK(approx_eq(mul(z, alt), z, 1e-10));  // still a solution
    CHECK(norm(c) <= norm(alt) + 1e-12);      // but not shorter
  }
}

TEST_CASE("solve_coefficient: inconsistent pair throws") {
  const Multivector z = Multivector::scalar(3, 1.0) + e(3, 0b111);
  CHECK_THROWS_AS(solve_coefficient(z, Multivector::scalar(3, 1.0)), InconsistentSystem);
}

TEST_CASE("gram_schmidt: single element") {
  const Multivector g = Multivector::scalar(2, 0.7) + e(2, 0b11) * 0.0;
  DenseGramOracle oracle(2, {{g}});
  const auto gs = gram_schmidt(oracle, 1);
  REQUIRE(gs.lambda.size() == 1);
  CHECK(approx_eq(gs.lambda[0][0], Multivector::scalar(2, 1.0), 0.0));
  CHECK(approx_eq(gs.self_grams[0], g, 0.0));
}

TEST_CASE("gram_schmidt: first-degree monogenic data, m = 2") {
  // exact Gram of the two degree-1 building blocks over the unit sphere
  const Multivector s = Multivector::scalar(2, 2.0 / 3.0);
  const Multivector g01 = e(2, 0b11) / 3.0;   // <alpha_1, alpha_2>
  const Multivector g10 = -e(2, 0b11) / 3.0;  // <alpha_2, alpha_1>
  DenseGramOracle oracle(2, {{s, g01}, {g10, s}});
  const auto gs = gram_schmidt(oracle, 2);
  CHECK(approx_eq(gs.lambda[1][0], e(2, 0b11) * 0.5, 1e-14));
  CHECK(approx_eq(gs.self_grams[0], Multivector::scalar(2, 2.0 / 3.0), 1e-15));
  CHECK(approx_eq(gs.self_grams[1], Multivector::scalar(2, 0.5), 1e-14));
  CHECK(norm(orthogonal_pair(oracle, gs, 1, 0)) < 1e-14);
}

TEST_CASE("gram_schmidt: duplicated input is degenerate") {
  FreeModule M{2, 3};
  std::mt19937_64 rng(5);
  const auto a = M.random(rng);
  const auto oracle = M.oracle({a, a});
  CHECK_THROWS_AS(gram_schmidt(oracle, 2), DegenerateElement);
  try {
    gram_schmidt(oracle, 2);
  } catch (const DegenerateElement& err) {
    CHECK(err.index == 2);
  }
}

TEST_CASE("gram_schmidt: random families orthogonalize and match explicit model") {
  std::mt19937_64 rng(9);
  for (int m : {1, 2, 3}) {
    FreeModule M{m, 8};
    std::vector<FreeModule::Elem> alphas;
    for (int i = 0; i < 6; ++i) alphas.push_back(M.random(rng));
    const auto f = M.random(rng);
    const auto oracle = M.oracle(alphas, &f);
    const auto gs = gram_schmidt(oracle, 6);

    std::vector<FreeModule::Elem> betas;
    for (int j = 0; j < 6; ++j) {
      auto b = M.zero();
      for (int i = 0; i <= j; ++i) b = M.add(b, M.act(alphas[i], gs.lambda[j][i]));
      betas.push_back(b);
    }
    for (int j = 0; j < 6; ++j) {
      CHECK(approx_eq(M.ip(betas[j], betas[j]), gs.self_grams[j], 1e-10));
      CHECK(Sc(gs.self_grams[j]) > 0.0);
      for (int l = 0; l < j; ++l) {
        CHECK(norm(M.ip(betas[j], betas[l])) < 1e-9);
        CHECK(norm(orthogonal_pair(oracle, gs, j, l)) < 1e-9);
        CHECK(approx_eq(orthogonal_pair(oracle, gs, j, l), M.ip(betas[j], betas[l]), 1e-10));
      }
    }
    const auto crosses = external_crosses(oracle, gs);
    for (int i = 0; i < 6; ++i) CHECK(approx_eq(crosses[i], M.ip(f, betas[i]), 1e-10));
  }
}

TEST_CASE("Clifford Cauchy-Schwarz over module pairs") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = 1 + int(rng() % 4);
    FreeModule M{m, 4};
    const auto u = M.random(rng), v = M.random(rng);
    const double lhs = norm(M.ip(u, v));
    const double rhs = std::pow(2.0, 0.5 * m) * std::sqrt(Sc(M.ip(u, u))) * std::sqrt(Sc(M.ip(v, v)));
    CHECK(lhs <= rhs * (1.0 + 1e-12));
  }
}

TEST_CASE("projection optimality and module norm bound") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + int(rng() % 3);
    FreeModule M{m, 5};
    const auto alpha = M.random(rng), beta = M.random(rng);
    const Multivector c = solve_coefficient(M.ip(beta, beta), M.ip(alpha, beta));
    const double base = M.norm(M.sub(alpha, M.act(beta, c)));
    for (int k = 0; k < 10; ++k) {
      const Multivector cp = random_mv(m, rng, 2.0);
      CHECK(base <= M.norm(M.sub(alpha, M.act(beta, cp))) + 1e-10);
    }
    // ||f*lam|| <= 2^{m/2} |lam| ||f||
    const Multivector lam = random_mv(m, rng, 2.0);
    CHECK(M.norm(M.act(alpha, lam)) <= std::pow(2.0, 0.5 * m) * norm(lam) * M.norm(alpha) * (1.0 + 1e-12));
  }
}
