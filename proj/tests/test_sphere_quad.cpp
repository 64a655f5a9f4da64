#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ctm/sphere_quad.hpp"
#include "test_util.hpp"

using namespace ctm;
constexpr double kPi = std::numbers::pi;

namespace {

// all exponent vectors over `vars` variables with total degree <= maxdeg
void enumerate_alphas(int vars, int maxdeg, std::vector<int>& cur,
                      const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(cur.size()) == vars) {
    visit(cur);
    return;
  }
  int used = 0;
  for (int a : cur) used += a;
  for (int a = 0; a + used <= maxdeg; ++a) {
    cur.push_back(a);
    enumerate_alphas(vars, maxdeg, cur, visit);
    cur.pop_back();
  }
}

double grid_moment(const SphereGrid& g, const std::vector<int>& alpha) {
  std::vector<double> samples;
  samples.reserve(g.nodes.size());
  for (const auto& p : g.nodes) {
    double v = 1.0;
    for (int i = 0; i <= g.m; ++i)
      for (int k = 0; k < alpha[i]; ++k) v *= p.x[i];
    samples.push_back(v);
  }
  return integrate_scalar(g, samples);
}

}  // namespace

TEST_CASE("sphere areas") {
  CHECK(sphere_area(1) == doctest::Approx(2.0 * kPi).epsilon(1e-14));
  CHECK(sphere_area(2) == doctest::Approx(4.0 * kPi).epsilon(1e-14));
  CHECK(sphere_area(3) == doctest::Approx(2.0 * kPi * kPi).epsilon(1e-14));
  CHECK(sphere_area(4) == doctest::Approx(8.0 * kPi * kPi / 3.0).epsilon(1e-14));
  CHECK(sphere_area(5) == doctest::Approx(std::pow(kPi, 3)).epsilon(1e-14));
  CHECK_THROWS_AS(sphere_area(0), UnsupportedDimension);
  CHECK_THROWS_AS(sphere_area(7), UnsupportedDimension);
}

TEST_CASE("monomial moments: closed form") {
  for (int m = 1; m <= 6; ++m) {
    std::vector<int> alpha(m + 1, 0);
    alpha[0] = 2;
    CHECK(monomial_moment(m, alpha) == doctest::Approx(1.0 / (m + 1)).epsilon(1e-15));
    alpha[0] = 1;
    CHECK(monomial_moment(m, alpha) == 0.0);
  }
  CHECK(monomial_moment(2, {2, 2, 0}) == doctest::Approx(1.0 / 15.0).epsilon(1e-15));
  CHECK(monomial_moment(2, {4, 0, 0}) == doctest::Approx(1.0 / 5.0).epsilon(1e-15));
  CHECK(monomial_moment(3, {2, 2, 0, 0}) == doctest::Approx(1.0 / 24.0).epsilon(1e-15));
  CHECK_THROWS_AS(monomial_moment(2, {2, 0}), LengthMismatch);
}

TEST_CASE("monomial moments: Monte-Carlo cross-check") {
  // uniform sphere samples via normalized gaussians; 3-sigma agreement
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int N = 2'000'000;
  for (int m : {2, 3}) {
    std::vector<std::vector<int>> keys;
    if (m == 2) keys = {{2, 2, 0}, {4, 0, 0}, {2, 0, 0}};
    else keys = {{2, 0, 2, 0}, {0, 4, 0, 0}, {2, 2, 2, 0}};
    std::vector<double> sum(keys.size(), 0.0), sumsq(keys.size(), 0.0);
    std::vector<double> x(m + 1);
    for (int s = 0; s < N; ++s) {
      double r2 = 0.0;
      for (auto& xi : x) {
        xi = gauss(rng);
        r2 += xi * xi;
      }
      const double inv = 1.0 / std::sqrt(r2);
      for (std::size_t k = 0; k < keys.size(); ++k) {
        double v = 1.0;
        for (int i = 0; i <= m; ++i)
          for (int p = 0; p < keys[k][i]; ++p) v *= x[i] * inv;
        sum[k] += v;
        sumsq[k] += v * v;
      }
    }
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const double mean = sum[k] / N;
      const double var = sumsq[k] / N - mean * mean;
      const double sigma = std::sqrt(var / N);
      CHECK(std::abs(monomial_moment(m, keys[k]) - mean) < 3.0 * sigma);
    }
  }
}

TEST_CASE("grid construction basics") {
  const SphereGrid c = build_grid(1, 10);
  CHECK(c.nodes.size() >= 11);
  for (double w : c.weights) CHECK(w == doctest::Approx(1.0 / c.nodes.size()).epsilon(1e-15));

  for (int m = 1; m <= 6; ++m) {
    const SphereGrid g = build_grid(m, 6);
    double wsum = 0.0;
    for (double w : g.weights) {
      CHECK(w > 0.0);
      wsum += w;
    }
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
    for (const auto& p : g.nodes) CHECK(std::abs(p.norm() - 1.0) < 1e-14);
  }
  CHECK_THROWS_AS(build_grid(7, 4), UnsupportedDimension);
  CHECK_THROWS_AS(build_grid(2, 0), InvalidArgument);
}

TEST_CASE("grid reproduces every moment up to its degree") {
  for (int m = 1; m <= 4; ++m) {
    const int deg = (m <= 2) ? 12 : 8;
    const SphereGrid g = build_grid(m, deg);
    std::vector<int> cur;
    int checked = 0;
    enumerate_alphas(m + 1, deg, cur, [&](const std::vector<int>& alpha) {
      const double got = grid_moment(g, alpha);
      const double want = monomial_moment(m, alpha);
      CHECK(std::abs(got - want) < 1e-11);
      ++checked;
    });
    CHECK(checked > 0);
  }
}

TEST_CASE("degree doubling leaves polynomial integrals unchanged") {
  const SphereGrid g1 = build_grid(2, 20), g2 = build_grid(2, 40);
  for (const auto& alpha : std::vector<std::vector<int>>{{2, 0, 0}, {4, 2, 0}, {0, 2, 6}, {8, 4, 2}}) {
    CHECK(std::abs(grid_moment(g1, alpha) - grid_moment(g2, alpha)) < 1e-12);
  }
}

TEST_CASE("integrate: multivector samples") {
  const SphereGrid g = build_grid(2, 20);
  std::vector<Multivector> ones(g.nodes.size(), Multivector::scalar(2, 1.0));
  CHECK(Sc(integrate(g, ones)) == doctest::Approx(1.0).epsilon(1e-14));

  std::vector<Multivector> x0(g.nodes.size(), Multivector(2));
  for (std::size_t j = 0; j < g.nodes.size(); ++j) x0[j][0] = g.nodes[j].x[0];
  CHECK(norm(integrate(g, x0)) < 1e-13);

  // conj(z_2(w)) * z_1(w) integrates to e_12/3 on S^2
  const Multivector want = Multivector::basis(2, 0b11) / 3.0;
  const Multivector got = integrate(g, [&](const Paravector& p) {
    Multivector z1(2), z2(2);
    z1[0] = p.x[1];
    z1[0b01] = -p.x[0];
    z2[0] = p.x[2];
    z2[0b10] = -p.x[0];
    return mul(conj(z2), z1);
  });
  CHECK(testutil::approx_eq(got, want, 1e-13));

  std::vector<Multivector> wrong(3, Multivector(2));
  CHECK_THROWS_AS(integrate(g, wrong), LengthMismatch);
}
