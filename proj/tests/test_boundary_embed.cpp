#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ctm/boundary_embed.hpp"
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

Paravector random_ball_point(int m, std::mt19937_64& rng, double rmax) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.05, rmax);
  Paravector p{m, {}};
  for (int i = 0; i <= m; ++i) p.x[i] = g(rng);
  const double scale = u(rng) / p.norm();
  for (int i = 0; i <= m; ++i) p.x[i] *= scale;
  return p;
}

Paravector scale_pv(const Paravector& p, double s) {
  Paravector q = p;
  for (int i = 0; i <= p.m; ++i) q.x[i] *= s;
  return q;
}

Multivector unit_mv(int m, int axis) {
  Paravector u{m, {}};
  u.x[axis] = 1.0;
  return u.to_multivector();
}

// left Dirac residual sum_i e_i dF/dx_i by central differences
Multivector dirac_residual(const std::function<Multivector(const Paravector&)>& F,
                           const Paravector& x, double h) {
  Multivector acc(x.m);
  for (int i = 0; i <= x.m; ++i) {
    Paravector xp = x, xm = x;
    xp.x[i] += h;
    xm.x[i] -= h;
    acc += mul(unit_mv(x.m, i), (F(xp) - F(xm)) * (1.0 / (2.0 * h)));
  }
  return acc;
}

BoundarySignal make_signal(int m, int degree, const std::function<double(const Paravector&)>& f) {
  BoundarySignal sig;
  sig.grid = build_grid(m, degree);
  sig.samples.reserve(sig.grid.nodes.size());
  for (const Paravector& node : sig.grid.nodes) sig.samples.push_back(f(node));
  return sig;
}

}  // namespace

// ---------------------------------------------------------------------------

TEST_CASE("poisson kernel: origin value, normalization, classical disc form") {
  std::mt19937_64 rng(17);
  for (int m : {1, 2, 3}) {
    const SphereGrid g = build_grid(m, 40);
    const Paravector origin{m, {}};
    CHECK(poisson_kernel(m, origin, g.nodes.front()) ==
          doctest::Approx(1.0 / sphere_area(m)).epsilon(1e-14));

    // unit mass at |x| = 0.5
    const Paravector x = random_ball_point(m, rng, 0.5);
    std::vector<double> vals(g.nodes.size());
    for (std::size_t j = 0; j < g.nodes.size(); ++j)
      vals[j] = sphere_area(m) * poisson_kernel(m, x, g.nodes[j]);
    CHECK(integrate_scalar(g, vals) == doctest::Approx(1.0).epsilon(1e-8));
  }

  // m = 1: (1/2pi)(1 - r^2)/(1 - 2 r cos(phi) + r^2)
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  for (int t = 0; t < 10; ++t) {
    const double r = 0.1 + 0.08 * t, alpha = u(rng), beta = u(rng);
    const Paravector x = pv(1, {r * std::cos(alpha), r * std::sin(alpha)});
    const Paravector w = pv(1, {std::cos(beta), std::sin(beta)});
    const double classical =
        (1.0 - r * r) / (2.0 * M_PI * (1.0 - 2.0 * r * std::cos(alpha - beta) + r * r));
    CHECK(poisson_kernel(1, x, w) == doctest::Approx(classical).epsilon(1e-13));
  }

  const Paravector w0 = pv(2, {1.0, 0.0, 0.0});
  CHECK_THROWS_AS(poisson_kernel(2, w0, w0), EvaluationSingularity);
  CHECK_THROWS_AS(poisson_kernel(2, pv(1, {0.1, 0.0}), w0), DimensionMismatch);
  CHECK_THROWS_AS(poisson_kernel(9, w0, w0), UnsupportedDimension);
}

TEST_CASE("conjugate kernel: vanishing cases and no scalar part") {
  std::mt19937_64 rng(23);
  for (int m : {1, 2, 3}) {
    const SphereGrid g = build_grid(m, 10);
    const Paravector origin{m, {}};
    CHECK(norm(conjugate_kernel(m, origin, g.nodes.front())) == 0.0);

    // x along omega: conj(omega) x is real, its non-scalar part vanishes
    Paravector w{m, {}};
    w.x[0] = 1.0;
    CHECK(norm(conjugate_kernel(m, pv(m, {0.5}), w)) == 0.0);

    for (int t = 0; t < 8; ++t) {
      const Paravector x = random_ball_point(m, rng, 0.8);
      const Multivector q = conjugate_kernel(m, x, g.nodes[t % g.nodes.size()]);
      CHECK(Sc(q) == 0.0);
      CHECK(Sc(schwarz_kernel(m, x, g.nodes[t % g.nodes.size()])) ==
            doctest::Approx(poisson_kernel(m, x, g.nodes[t % g.nodes.size()])).epsilon(1e-14));
    }
  }
}

TEST_CASE("constant data lifts to the constant function") {
  std::mt19937_64 rng(29);
  for (int m : {1, 2, 3}) {
    const int degree = m == 3 ? 24 : 40;
    const double rmax = m == 3 ? 0.4 : 0.5;
    const HardyFunction F = schwarz_lift(make_signal(m, degree, [](const Paravector&) { return 1.0; }));
    const int points = m == 3 ? 5 : 20;
    for (int t = 0; t < points; ++t) {
      const Paravector x = random_ball_point(m, rng, rmax);
      CHECK(approx_eq(F.eval(x), Multivector::scalar(m, 1.0), 1e-8));
    }
  }
}

TEST_CASE("disc lift of cos(theta) is the identity function") {
  std::mt19937_64 rng(37);
  const HardyFunction F =
      schwarz_lift(make_signal(1, 40, [](const Paravector& w) { return w.x[0]; }));
  for (int t = 0; t < 10; ++t) {
    const Paravector x = random_ball_point(1, rng, 0.65);
    Multivector want(1);
    want[BladeMask(0)] = x.x[0];
    want[BladeMask(1)] = x.x[1];
    CHECK(approx_eq(F.eval(x), want, 1e-6));
  }

}

TEST_CASE("scalar part of the lift recovers band-limited data near the boundary") {
  // smooth band-limited signal on S^2; the dense grid resolves the Poisson
  // peak at r = 0.99, and the scalar part needs no radial integrals
  auto fval = [](const Paravector& w) { return 0.6 + 0.5 * w.x[0] + 0.8 * w.x[1] * w.x[2]; };
  const BoundarySignal sig = make_signal(2, 600, fval);

  double worst = 0.0;
  double max_f = 0.0;
  for (double s : sig.samples) max_f = std::max(max_f, std::abs(s));
  // strided full-sphere comparison: the stride is coprime to the azimuth
  // count, so the probe set covers all polar rows
  for (std::size_t j = 0; j < sig.grid.nodes.size(); j += 607) {
    const Paravector xi = sig.grid.nodes[j];
    const double sc = poisson_integral(sig, scale_pv(xi, 0.99));
    worst = std::max(worst, std::abs(sc - fval(xi)));
    CHECK(std::abs(sc) <= max_f * (1.0 + 5e-3));  // averaging up to quadrature error
  }
  CHECK(worst < 0.05);
}

TEST_CASE("poisson integral is the scalar part of the full lift") {
  std::mt19937_64 rng(41);
  const BoundarySignal sig = make_signal(
      2, 30, [](const Paravector& w) { return 0.3 + w.x[0] * w.x[1] - 0.4 * w.x[2]; });
  const HardyFunction F = schwarz_lift(sig);
  for (int t = 0; t < 6; ++t) {
    const Paravector x = random_ball_point(2, rng, 0.7);
    CHECK(poisson_integral(sig, x) == doctest::Approx(Sc(F.eval(x))).epsilon(1e-12));
  }
}

TEST_CASE("lifts are linear and scalar-bounded") {
  std::mt19937_64 rng(43);
  const int m = 2;
  const SphereGrid g = build_grid(m, 40);
  BoundarySignal fa, fb, fc;
  fa.grid = fb.grid = fc.grid = g;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double max_abs = 0.0;
  for (const Paravector& node : g.nodes) {
    const double va = std::sin(3.0 * node.x[0]) + 0.5 * node.x[1];
    const double vb = std::cos(2.0 * node.x[2]) * node.x[0];
    fa.samples.push_back(va);
    fb.samples.push_back(vb);
    fc.samples.push_back(1.25 * va - 0.75 * vb);
    max_abs = std::max(max_abs, std::abs(fc.samples.back()));
  }
  const HardyFunction Fa = schwarz_lift(fa), Fb = schwarz_lift(fb), Fc = schwarz_lift(fc);
  for (int t = 0; t < 5; ++t) {
    const Paravector x = random_ball_point(m, rng, 0.5);
    const Multivector want = 1.25 * Fa.eval(x) - 0.75 * Fb.eval(x);
    CHECK(approx_eq(Fc.eval(x), want, 1e-12 * (1.0 + norm(want))));
    CHECK(std::abs(Sc(Fc.eval(x))) <= max_abs + 1e-8);
  }
}

TEST_CASE("ball lift is left monogenic") {
  std::mt19937_64 rng(53);
  for (int m : {1, 2}) {
    const HardyFunction F = schwarz_lift(make_signal(
        m, m == 1 ? 30 : 24,
        [](const Paravector& w) { return 0.4 + w.x[0] + 0.3 * w.x[1] * w.x[0]; }));
    auto eval = [&](const Paravector& x) { return F.eval(x); };
    for (int t = 0; t < (m == 1 ? 6 : 3); ++t) {
      const Paravector x = random_ball_point(m, rng, 0.5);
      CHECK(norm(dirac_residual(eval, x, 1e-4)) < 1e-5);
    }
  }
}

TEST_CASE("ring resample restricts a lift onto exact boundary data") {
  std::mt19937_64 rng(61);

  // dilating a kernel-backed function commutes with evaluation
  {
    const int m = 2;
    std::vector<AtomTerm> terms;
    for (int k = 0; k < 2; ++k)
      terms.push_back({KernelAtom{Domain::Ball, random_ball_point(m, rng, 0.5), std::nullopt},
                       testutil::random_mv(m, rng)});
    const HardyFunction fa = HardyFunction::atom_combo(Domain::Ball, m, terms);
    const SphereGrid g = build_grid(m, 40);
    std::vector<Multivector> samples;
    for (const Paravector& node : g.nodes) samples.push_back(fa.eval(node));
    const HardyFunction fs = HardyFunction::boundary(Domain::Ball, m, g, samples);

    // the resample radius sits well inside the region the grid resolves: the
    // kernel quadrature at radius r carries an O(r^{degree+1}) tail
    const HardyFunction ring = ring_resample(fs, 0.5);
    CHECK(ring.rep() == HardyFunction::Rep::BoundarySzego);
    for (int t = 0; t < 5; ++t) {
      const Paravector x = random_ball_point(m, rng, 0.7);
      CHECK(approx_eq(ring.eval(x), fa.eval(scale_pv(x, 0.5)), 1e-8));
    }
  }

  // the documented bridge: completion-kernel lift -> ring -> greedy steps
  {
    const HardyFunction F =
        schwarz_lift(make_signal(1, 20, [](const Paravector& w) { return w.x[0]; }));
    CHECK_THROWS_AS(afd_init(F), InvalidArgument);
    const HardyFunction ring = ring_resample(F, 0.8);
    const AfdState st = afd_run(ring, 2, 1e-10, make_search_grid(1, 0.1, 0.9, {16}));
    CHECK(st.tm.size() >= 1);
    CHECK(st.residual_energy < st.f_norm_sq);
    CHECK(st.residual_energy >= 0.0);
  }

  const HardyFunction atoms = HardyFunction::atom_combo(
      Domain::Ball, 1,
      {{KernelAtom{Domain::Ball, pv(1, {0.2, 0.1}), std::nullopt}, Multivector::scalar(1, 1.0)}});
  CHECK_THROWS_AS(ring_resample(atoms, 0.9), InvalidArgument);
  const HardyFunction F1 =
      schwarz_lift(make_signal(1, 10, [](const Paravector&) { return 1.0; }));
  CHECK_THROWS_AS(ring_resample(F1, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ring_resample(F1, 1.0), InvalidArgument);
}

TEST_CASE("half-space lift: zero data, Plemelj recovery, monogenicity") {
  std::mt19937_64 rng(71);

  // zero in, zero out
  {
    const FlatGrid g = build_flat_grid(1, 4.0, 20, 6);
    FlatSignal sig{g, std::vector<double>(g.nodes.size(), 0.0)};
    const HardyFunction F = cauchy_lift_halfspace(sig);
    CHECK(norm(F.eval(pv(1, {0.5, 0.3}))) == 0.0);
  }

  // compactly supported bump on R^1, R = 8 x support: twice the scalar part
  // just above the boundary returns the data
  {
    auto bump = [](double y) { return std::abs(y) < 1.0 ? std::exp(-y * y / 0.245) : 0.0; };
    const FlatGrid g = build_flat_grid(1, 8.0, 160, 20);
    FlatSignal sig{g, {}};
    for (const Paravector& node : g.nodes) sig.samples.push_back(bump(node.x[1]));
    const HardyFunction F = cauchy_lift_halfspace(sig);

    double worst = 0.0;
    for (int t = 0; t <= 80; ++t) {
      const double y = -1.0 + 0.025 * t;
      const Multivector v = F.eval(pv(1, {0.01, y}));
      worst = std::max(worst, std::abs(2.0 * Sc(v) - bump(y)));
    }
    CHECK(worst < 0.05);

    // left monogenic away from the boundary
    auto eval = [&](const Paravector& x) { return F.eval(x); };
    for (int t = 0; t < 5; ++t) {
      const Paravector x = pv(1, {0.3 + 0.2 * t, -1.5 + 0.7 * t});
      CHECK(norm(dirac_residual(eval, x, 1e-4)) < 1e-5);
    }

    // linearity of the integral in the samples
    FlatSignal doubled{g, {}};
    for (double s : sig.samples) doubled.samples.push_back(2.0 * s);
    const HardyFunction F2 = cauchy_lift_halfspace(doubled);
    const Paravector probe = pv(1, {0.4, 0.2});
    CHECK(approx_eq(F2.eval(probe), 2.0 * F.eval(probe), 1e-12));

    // evaluation is confined to the open half space
    CHECK_THROWS_AS(F.eval(pv(1, {0.0, 0.3})), PoleOutsideDomain);
    CHECK_THROWS_AS(F.eval(pv(1, {-0.2, 0.3})), PoleOutsideDomain);
  }

  // m = 2 lift stays monogenic
  {
    const FlatGrid g = build_flat_grid(2, 4.0, 10, 6);
    FlatSignal sig{g, {}};
    for (const Paravector& node : g.nodes)
      sig.samples.push_back(std::exp(-(node.x[1] * node.x[1] + node.x[2] * node.x[2]) / 0.5));
    const HardyFunction F = cauchy_lift_halfspace(sig);
    CHECK(F.norm_sq() > 0.0);
    auto eval = [&](const Paravector& x) { return F.eval(x); };
    for (int t = 0; t < 3; ++t) {
      const Paravector x = pv(2, {0.4 + 0.2 * t, 0.3 - 0.2 * t, 0.1 * t});
      CHECK(norm(dirac_residual(eval, x, 1e-4)) < 1e-5);
    }
  }

  // data flowing over the truncation edge is refused
  {
    const FlatGrid g = build_flat_grid(1, 4.0, 20, 6);
    FlatSignal sig{g, std::vector<double>(g.nodes.size(), 1.0)};
    CHECK_THROWS_AS(cauchy_lift_halfspace(sig), TruncationWarning);
  }

  // malformed signals
  {
    const FlatGrid g = build_flat_grid(1, 4.0, 10, 4);
    FlatSignal bad{g, std::vector<double>(g.nodes.size() - 1, 0.0)};
    CHECK_THROWS_AS(cauchy_lift_halfspace(bad), LengthMismatch);
    FlatSignal inf_sig{g, std::vector<double>(g.nodes.size(), 0.0)};
    inf_sig.samples[0] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(cauchy_lift_halfspace(inf_sig), InvalidArgument);
  }
}
