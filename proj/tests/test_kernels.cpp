#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ctm/kernels.hpp"
#include "ctm/monogenics.hpp"
#include "ctm/sphere_quad.hpp"
#include "test_util.hpp"

using namespace ctm;
using testutil::approx_eq;

namespace {

Paravector pv(int m, std::initializer_list<double> xs) {
  Paravector p{m, {}};
  int i = 0;
  for (double v : xs) p.x[i++] = v;
  return p;
}

Paravector unit(Paravector p) {
  const double n = p.norm();
  for (int i = 0; i <= p.m; ++i) p.x[i] /= n;
  return p;
}

Paravector random_ball_point(int m, std::mt19937_64& rng, double rmax) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.05, rmax);
  Paravector p{m, {}};
  for (int i = 0; i <= m; ++i) p.x[i] = g(rng);
  const double scale = u(rng) / p.norm();
  for (int i = 0; i <= m; ++i) p.x[i] *= scale;
  return p;
}

std::complex<double> to_c(const Multivector& v) { return {v[0], v[1]}; }

}  // namespace

TEST_CASE("ball kernel closed-form values") {
  std::mt19937_64 rng(3);
  for (int m = 1; m <= 4; ++m) {
    const Paravector zero = pv(m, {});
    const Paravector x = random_ball_point(m, rng, 0.99);
    CHECK(approx_eq(szego_eval(Domain::Ball, zero, x), Multivector::scalar(m, 1.0), 1e-15));
  }
  const Multivector v = szego_eval(Domain::Ball, pv(2, {0.5}), pv(2, {0.5}));
  CHECK(approx_eq(v, Multivector::scalar(2, 1.0 / (0.75 * 0.75)), 1e-14));
}

TEST_CASE("m = 1 kernel is the complex Szego kernel") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const Paravector a = random_ball_point(1, rng, 0.9);
    const Paravector x = random_ball_point(1, rng, 0.99);
    const std::complex<double> za(a.x[0], a.x[1]), zx(x.x[0], x.x[1]);
    const std::complex<double> want = 1.0 / (1.0 - std::conj(za) * zx);
    CHECK(std::abs(to_c(szego_eval(Domain::Ball, a, x)) - want) < 1e-12);
  }
}

TEST_CASE("derivative atoms: complex oracle and symmetry") {
  // at a = 0, omega = e_0: value is z itself
  const KernelAtom at0{Domain::Ball, pv(1, {0.0, 0.0}), pv(1, {1.0, 0.0})};
  CHECK(approx_eq(atom_eval(at0, pv(1, {0.3, 0.0})), Multivector::scalar(1, 0.3), 1e-9));

  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const Paravector a = random_ball_point(1, rng, 0.6);
    const Paravector x = random_ball_point(1, rng, 0.9);
    const std::complex<double> za(a.x[0], a.x[1]), zx(x.x[0], x.x[1]);
    const std::complex<double> base = 1.0 - std::conj(za) * zx;
    // d/ds of 1/(1 - conj(a + s*omega) x): omega = e_0 gives z/base^2,
    // omega = e_1 gives -i z/base^2
    const KernelAtom d0{Domain::Ball, a, pv(1, {1.0, 0.0})};
    const KernelAtom d1{Domain::Ball, a, pv(1, {0.0, 1.0})};
    CHECK(std::abs(to_c(atom_eval(d0, x)) - zx / (base * base)) < 1e-9);
    CHECK(std::abs(to_c(atom_eval(d1, x)) - (-std::complex<double>(0, 1) * zx / (base * base))) <
          1e-9);
    // flipping the direction negates the derivative
    KernelAtom neg = d1;
    neg.derivative = pv(1, {0.0, -1.0});
    CHECK(approx_eq(atom_eval(neg, x), -atom_eval(d1, x), 1e-10));
  }
}

TEST_CASE("plain atoms defer to szego_eval") {
  std::mt19937_64 rng(9);
  for (int m : {2, 3}) {
    const Paravector a = random_ball_point(m, rng, 0.8);
    const Paravector x = random_ball_point(m, rng, 0.95);
    const KernelAtom atom{Domain::Ball, a, std::nullopt};
    CHECK(approx_eq(atom_eval(atom, x), szego_eval(Domain::Ball, a, x), 0.0));
  }
}

TEST_CASE("finite differences agree with the closed-form pole derivative") {
  std::mt19937_64 rng(11);
  for (int m : {1, 2, 3}) {
    for (int t = 0; t < 20; ++t) {
      const Paravector a = random_ball_point(m, rng, 0.7);
      const Paravector x = random_ball_point(m, rng, 0.9);
      Paravector omega = unit(random_ball_point(m, rng, 0.9));
      const KernelAtom atom{Domain::Ball, a, omega};
      const Multivector w = detail::kernel_w(Domain::Ball, a, x);
      const Multivector closed = detail::kernel_shape_d(
          w, -mul(omega.conj().to_multivector(), x.to_multivector()), m);
      CHECK(approx_eq(atom_eval(atom, x), closed, 1e-9));
    }
    // half space
    for (int t = 0; t < 20; ++t) {
      Paravector a = random_ball_point(m, rng, 0.8);
      a.x[0] = 0.5 + std::abs(a.x[0]);
      Paravector x = random_ball_point(m, rng, 0.8);
      x.x[0] = std::abs(x.x[0]);
      Paravector omega = unit(random_ball_point(m, rng, 0.9));
      const KernelAtom atom{Domain::HalfSpace, a, omega};
      const Multivector w = detail::kernel_w(Domain::HalfSpace, a, x);
      const Multivector closed = detail::kernel_shape_d(w, omega.conj().to_multivector(), m);
      CHECK(approx_eq(atom_eval(atom, x), closed, 1e-9));
    }
  }
}

TEST_CASE("Cauchy kernel values") {
  CHECK(approx_eq(cauchy_kernel(pv(2, {1.0})), Multivector::scalar(2, 1.0), 0.0));
  CHECK(approx_eq(cauchy_kernel(pv(2, {2.0})), Multivector::scalar(2, 0.25), 1e-15));
  CHECK(approx_eq(cauchy_kernel(pv(1, {0.0, 1.0})), -Multivector::basis(1, 1), 1e-15));
  CHECK_THROWS_AS(cauchy_kernel(pv(2, {})), EvaluationSingularity);
}

TEST_CASE("gram entries: closed forms") {
  std::mt19937_64 rng(13);
  for (int m = 1; m <= 4; ++m) {
    const Paravector a = random_ball_point(m, rng, 0.9);
    const KernelAtom atom{Domain::Ball, a, std::nullopt};
    const double want = std::pow(1.0 - a.norm_sq(), -m);
    CHECK(approx_eq(gram_entry(atom, atom), Multivector::scalar(m, want), 1e-10 * want));

    const KernelAtom zero{Domain::Ball, pv(m, {}), std::nullopt};
    CHECK(approx_eq(gram_entry(zero, zero), Multivector::scalar(m, 1.0), 1e-15));

    Paravector h = a;
    h.x[0] = 0.3 + std::abs(h.x[0]);
    const KernelAtom hatom{Domain::HalfSpace, h, std::nullopt};
    const double hwant = std::pow(2.0 * h.x[0], -m);
    CHECK(approx_eq(gram_entry(hatom, hatom), Multivector::scalar(m, hwant), 1e-12 * hwant));
  }
  CHECK_THROWS_AS(
      gram_entry(KernelAtom{Domain::Ball, pv(2, {0.1}), std::nullopt},
                 KernelAtom{Domain::HalfSpace, pv(2, {0.1}), std::nullopt}),
      DomainMismatch);
  CHECK_THROWS_AS(validate_atom(KernelAtom{Domain::Ball, pv(2, {1.1}), std::nullopt}),
                  PoleOutsideDomain);
  CHECK_THROWS_AS(validate_atom(KernelAtom{Domain::HalfSpace, pv(2, {-0.1}), std::nullopt}),
                  PoleOutsideDomain);
}

static Multivector quad_gram(const SphereGrid& grid, const Paravector& a, const Paravector& b) {
  return integrate(grid, [&](const Paravector& w) {
    return mul(conj(szego_eval(Domain::Ball, b, w)), szego_eval(Domain::Ball, a, w));
  });
}

TEST_CASE("gram entries agree with boundary quadrature") {
  // The quadrature truncation error scales like max(|a|,|b|)^(degree+2), so the
  // grid degree is paired with the pole radii to keep a >10x margin under 1e-8.
  std::mt19937_64 rng(17);
  const SphereGrid g40 = build_grid(2, 40);
  for (int t = 0; t < 6; ++t) {
    const Paravector a = random_ball_point(2, rng, 0.6);
    const Paravector b = random_ball_point(2, rng, 0.6);
    const Multivector closed =
        gram_entry({Domain::Ball, a, std::nullopt}, {Domain::Ball, b, std::nullopt});
    CHECK(approx_eq(closed, quad_gram(g40, a, b), 1e-8));
  }
  const SphereGrid g60 = build_grid(2, 60);
  for (int t = 0; t < 4; ++t) {
    const Paravector a = random_ball_point(2, rng, 0.7);
    const Paravector b = random_ball_point(2, rng, 0.7);
    const Multivector closed =
        gram_entry({Domain::Ball, a, std::nullopt}, {Domain::Ball, b, std::nullopt});
    CHECK(approx_eq(closed, quad_gram(g60, a, b), 1e-8));
  }
  // convergence to the closed form pins it as exact, not merely grid-consistent
  const Paravector a = pv(2, {0.42, 0.35, 0.31});  // |a| = 0.63
  const Paravector b = pv(2, {-0.03, 0.04, 0.0});
  const Multivector closed =
      gram_entry({Domain::Ball, a, std::nullopt}, {Domain::Ball, b, std::nullopt});
  double prev = 1.0;
  for (int deg : {40, 60, 80}) {
    const double err = norm(closed - quad_gram(build_grid(2, deg), a, b));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("gram entries are Hermitian, derivative atoms included") {
  std::mt19937_64 rng(19);
  for (int m : {1, 2, 3}) {
    std::vector<KernelAtom> atoms;
    for (int t = 0; t < 3; ++t)
      atoms.push_back({Domain::Ball, random_ball_point(m, rng, 0.7), std::nullopt});
    for (int t = 0; t < 3; ++t)
      atoms.push_back(
          {Domain::Ball, random_ball_point(m, rng, 0.7), unit(random_ball_point(m, rng, 0.9))});
    for (const auto& ai : atoms)
      for (const auto& aj : atoms) {
        const Multivector gij = gram_entry(ai, aj);
        const Multivector gji = gram_entry(aj, ai);
        CHECK(approx_eq(gij, conj(gji), 1e-10 * std::max(1.0, norm(gij))));
      }
  }
}

TEST_CASE("kernels are left monogenic in x") {
  std::mt19937_64 rng(23);
  const double h = 1e-5;
  for (int m : {2, 3}) {
    for (int t = 0; t < 5; ++t) {
      const Paravector a = random_ball_point(m, rng, 0.7);
      const Paravector x = random_ball_point(m, rng, 0.6);
      Multivector dirac(m);
      for (int i = 0; i <= m; ++i) {
        Paravector xp = x, xm = x;
        xp.x[i] += h;
        xm.x[i] -= h;
        const Multivector di =
            (szego_eval(Domain::Ball, a, xp) - szego_eval(Domain::Ball, a, xm)) * (0.5 / h);
        const Multivector ei =
            i == 0 ? Multivector::scalar(m, 1.0) : Multivector::basis(m, BladeMask(1) << (i - 1));
        dirac += mul(ei, di);
      }
      CHECK(norm(dirac) < 1e-6);
    }
  }
}

TEST_CASE("kernels reproduce polynomial boundary values") {
  const SphereGrid grid = build_grid(2, 40);
  std::mt19937_64 rng(29);
  for (int k = 0; k <= 3; ++k) {
    for (const auto& idx : enumerate_Mk(2, k)) {
      const HyperPoly v = fueter(2, idx);
      const Paravector a = random_ball_point(2, rng, 0.5);
      const Multivector quad = integrate(grid, [&](const Paravector& w) {
        return mul(conj(szego_eval(Domain::Ball, a, w)), v.eval(w));
      });
      CHECK(approx_eq(quad, v.eval(a), 1e-7));
    }
  }
}
