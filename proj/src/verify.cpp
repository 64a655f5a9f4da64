#include "ctm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <sstream>
#include <vector>

#include "ctm/afd.hpp"
#include "ctm/boundary_embed.hpp"
#include "ctm/cmodule.hpp"
#include "ctm/json_io.hpp"
#include "ctm/monogenics.hpp"
#include "ctm/tm_system.hpp"

namespace ctm {

namespace {

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Multivector rand_mv(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Multivector x(m);
  for (int i = 0; i < x.dim(); ++i) x[BladeMask(i)] = u(rng);
  return x;
}

Paravector rand_dir(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Paravector p{m, {}};
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (int i = 0; i <= m; ++i) {
      p.x[i] = g(rng);
      n2 += p.x[i] * p.x[i];
    }
  } while (n2 < 1e-12);
  const double inv = 1.0 / std::sqrt(n2);
  for (int i = 0; i <= m; ++i) p.x[i] *= inv;
  return p;
}

Paravector rand_ball(int m, std::mt19937_64& rng, double lo, double hi) {
  Paravector p = rand_dir(m, rng);
  std::uniform_real_distribution<double> u(lo, hi);
  const double r = u(rng);
  for (int i = 0; i <= m; ++i) p.x[i] *= r;
  return p;
}

double pv_dist(const Paravector& a, const Paravector& b) {
  double s = 0.0;
  for (int i = 0; i <= a.m; ++i) s += (a.x[i] - b.x[i]) * (a.x[i] - b.x[i]);
  return std::sqrt(s);
}

std::vector<Paravector> distinct_poles(int m, int count, std::mt19937_64& rng, double lo,
                                       double hi, double min_sep) {
  std::vector<Paravector> poles;
  while (static_cast<int>(poles.size()) < count) {
    const Paravector p = rand_ball(m, rng, lo, hi);
    bool ok = true;
    for (const Paravector& q : poles) ok = ok && pv_dist(p, q) > min_sep;
    if (ok) poles.push_back(p);
  }
  return poles;
}

std::uint64_t check_seed(const VerifyOptions& opt, int id) {
  return opt.seed * 1000003ull + static_cast<std::uint64_t>(id);
}

// ------------------------------------------------------------------ algebra

CheckResult check_product_laws(const VerifyOptions& opt) {
  CheckResult r{1, "product-laws", "algebra", true, false, 0.0, 1e-11, 0.0, ""};
  double worst_assoc = 0.0, worst_blade = 0.0, worst_submult = 0.0;
  for (int m = 1; m <= 5; ++m) {
    std::mt19937_64 rng(check_seed(opt, 1) + m);
    const double bound = std::pow(2.0, 0.5 * m);
    for (int t = 0; t < 10000; ++t) {
      const Multivector x = rand_mv(m, rng), y = rand_mv(m, rng), z = rand_mv(m, rng);
      const double scale = std::max(norm(x) * norm(y) * norm(z), 1e-300);
      worst_assoc = std::max(worst_assoc, norm(mul(mul(x, y), z) - mul(x, mul(y, z))) / scale);
      worst_submult =
          std::max(worst_submult, norm(mul(x, y)) / std::max(bound * norm(x) * norm(y), 1e-300));
    }
    // conjugation must reverse products of basis blades without rounding
    const int dim = 1 << m;
    auto blade_dev = [m](BladeMask a, BladeMask b) {
      const Multivector ea = Multivector::basis(m, a), eb = Multivector::basis(m, b);
      return norm(conj(mul(ea, eb)) - mul(conj(eb), conj(ea)));
    };
    if (m <= 4) {
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) worst_blade = std::max(worst_blade, blade_dev(a, b));
    } else {
      std::uniform_int_distribution<int> pick(0, dim - 1);
      for (int t = 0; t < 5000; ++t)
        worst_blade = std::max(worst_blade, blade_dev(pick(rng), pick(rng)));
    }
  }
  r.measured = worst_assoc;
  r.passed = worst_assoc <= r.tolerance && worst_blade == 0.0 && worst_submult <= 1.0 + 1e-12;
  r.detail = "assoc " + fmt3(worst_assoc) + ", blade-conj dev " + fmt3(worst_blade) +
             ", |xy|/(2^{m/2}|x||y|) max " + fmt3(worst_submult);
  return r;
}

CheckResult check_inverses(const VerifyOptions& opt) {
  CheckResult r{2, "inverses", "algebra", true, false, 0.0, 1e-10, 0.0, ""};
  std::mt19937_64 rng(check_seed(opt, 2));
  bool zero_divisor_refused = false;
  try {
    inverse(Multivector::scalar(3, 1.0) + Multivector::basis(3, 0b111));
  } catch (const NotInvertible&) {
    zero_divisor_refused = true;
  }
  zero_divisor_refused =
      zero_divisor_refused &&
      !try_inverse(Multivector::scalar(3, 1.0) + Multivector::basis(3, 0b111)).has_value();

  double worst = 0.0;
  int mv_checked = 0;
  for (int t = 0; t < 200; ++t) {
    const int m = 1 + t % 5;
    const Multivector a = rand_ball(m, rng, 0.1, 1.5).to_multivector();
    const Multivector ai = inverse(a);
    const Multivector one = Multivector::scalar(m, 1.0);
    worst = std::max({worst, norm(mul(a, ai) - one), norm(mul(ai, a) - one)});
  }
  for (int t = 0; mv_checked < 200; ++t) {
    const int m = 1 + t % 5;
    const Multivector a = rand_mv(m, rng);
    const auto ai = try_inverse(a);
    if (!ai) continue;
    ++mv_checked;
    const Multivector one = Multivector::scalar(m, 1.0);
    worst = std::max({worst, norm(mul(a, *ai) - one), norm(mul(*ai, a) - one)});
  }
  r.measured = worst;
  r.passed = zero_divisor_refused && worst <= r.tolerance;
  r.detail = std::string(zero_divisor_refused ? "zero divisor refused" : "zero divisor ACCEPTED") +
             ", worst residual " + fmt3(worst);
  return r;
}

// -------------------------------------------------------------------- basis

std::size_t binom(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= double(n - k + i) / i;
  return static_cast<std::size_t>(v + 0.5);
}

CheckResult check_basis_gram(const VerifyOptions&) {
  CheckResult r{3, "basis-gram", "basis", true, false, 0.0, 1e-10, 0.0, ""};
  double worst_off = 0.0;
  bool sizes_ok = true;
  for (int m : {2, 3})
    for (int k = 1; k <= 4; ++k) {
      const MonogenicBasis b = orthobasis_Mk(m, k);
      sizes_ok = sizes_ok && b.basis.size() == binom(m + k - 1, k);
      for (std::size_t i = 0; i < b.basis.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
          const double scale =
              std::sqrt(Sc(b.self_grams[i])) * std::sqrt(Sc(b.self_grams[j]));
          worst_off = std::max(worst_off,
                               norm(exact_inner(b.basis[i], b.basis[j])) / scale);
        }
    }

  // m = 2, k = 1 closed-form values
  const MonogenicBasis b1 = orthobasis_Mk(2, 1);
  double exact_dev = std::max(norm(b1.self_grams[0] - Multivector::scalar(2, 2.0 / 3.0)),
                              norm(b1.self_grams[1] - Multivector::scalar(2, 0.5)));
  // coefficient of x_1 in U_2 is e_12 / 2
  const HyperPoly::Key x1 = HyperPoly::Key(1) << 8;
  Multivector lam = Multivector(2);
  if (auto it = b1.basis[1].terms().find(x1); it != b1.basis[1].terms().end())
    lam = it->second * (1.0 / b1.basis[1].den());
  exact_dev = std::max(exact_dev, norm(lam - Multivector::basis(2, 0b11) * 0.5));

  r.measured = worst_off;
  r.passed = sizes_ok && worst_off <= r.tolerance && exact_dev <= 1e-12;
  r.detail = std::string(sizes_ok ? "sizes ok" : "SIZE MISMATCH") + ", off-diag " +
             fmt3(worst_off) + ", closed-form dev " + fmt3(exact_dev);
  return r;
}

double dirac_residual_size(const HyperPoly& p) {
  const HyperPoly d = dirac_apply(p);
  double worst = 0.0;
  for (const auto& [key, c] : d.terms()) worst = std::max(worst, norm(c) / d.den());
  return worst;
}

CheckResult check_basis_dirac(const VerifyOptions&) {
  CheckResult r{4, "basis-dirac", "basis", true, false, 0.0, 1e-12, 0.0, ""};
  double worst = 0.0;
  int count = 0;
  for (int m : {2, 3})
    for (int k = 0; k <= 4; ++k) {
      for (const std::vector<int>& idx : enumerate_Mk(m, k)) {
        worst = std::max(worst, dirac_residual_size(fueter(m, idx)));
        ++count;
      }
      for (const HyperPoly& u : orthobasis_Mk(m, k).basis) {
        worst = std::max(worst, dirac_residual_size(u));
        ++count;
      }
    }
  r.measured = worst;
  r.passed = worst <= r.tolerance;
  r.detail = std::to_string(count) + " polynomials, worst residual coefficient " + fmt3(worst);
  return r;
}

// ------------------------------------------------------------------ kernels

CheckResult check_reproducing(const VerifyOptions& opt) {
  CheckResult r{5, "kernel-reproducing", "kernels", true, false, 0.0, 1e-6, 0.0, ""};
  std::mt19937_64 rng(check_seed(opt, 5));
  const int m = 2;
  const SphereGrid grid = build_grid(m, opt.quad_degree);

  std::vector<HyperPoly> polys;
  for (int k = 0; k <= 3; ++k)
    for (const std::vector<int>& idx : enumerate_Mk(m, k)) polys.push_back(fueter(m, idx));

  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const Paravector a = rand_ball(m, rng, 0.05, 0.7);
    std::vector<Multivector> kvals;
    kvals.reserve(grid.nodes.size());
    for (const Paravector& node : grid.nodes)
      kvals.push_back(conj(szego_eval(Domain::Ball, a, node)));
    for (const HyperPoly& v : polys) {
      std::vector<Multivector> vals;
      vals.reserve(grid.nodes.size());
      for (std::size_t j = 0; j < grid.nodes.size(); ++j)
        vals.push_back(mul(kvals[j], v.eval(grid.nodes[j])));
      worst = std::max(worst, norm(integrate(grid, vals) - v.eval(a)));
    }
  }
  r.measured = worst;
  r.passed = worst <= r.tolerance;
  r.detail = "grid degree " + std::to_string(opt.quad_degree) + ", worst |<V,S_a> - V(a)| " +
             fmt3(worst);
  return r;
}

// ----------------------------------------------------------------------- tm

TMSystem tm_for_poles(Domain domain, int m, const std::vector<Paravector>& poles) {
  TMSystem tm = make_tm(domain, m);
  for (const Paravector& a : poles) tm = extend(tm, a);
  return tm;
}

CheckResult check_tm_orthonormal(const VerifyOptions& opt) {
  CheckResult r{6, "tm-orthonormal", "tm", true, false, 0.0, 1e-9, 0.0, ""};
  double worst_internal = 0.0, worst_quad = 0.0, worst_zero = 0.0;
  for (int m : {2, 3}) {
    std::mt19937_64 rng(check_seed(opt, 6) + m);
    const std::vector<Paravector> poles = distinct_poles(m, 5, rng, 0.15, 0.6, 0.05);
    const TMSystem tm = tm_for_poles(Domain::Ball, m, poles);
    const int n = tm.size();
    const DenseGramOracle oracle(m, tm.gram);

    // normalized pairings from the closed-form Gram data
    std::vector<std::vector<Multivector>> internal(n, std::vector<Multivector>(n, Multivector(m)));
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        internal[j][l] =
            orthogonal_pair(oracle, tm.gs, j, l) * (1.0 / (tm.norms[j] * tm.norms[l]));
        if (j != l) worst_internal = std::max(worst_internal, norm(internal[j][l]));
      }

    // quadrature cross-check of the same pairings
    const SphereGrid grid = build_grid(m, opt.quad_degree);
    std::vector<std::vector<Multivector>> quad(n, std::vector<Multivector>(n, Multivector(m)));
    for (std::size_t t = 0; t < grid.nodes.size(); ++t) {
      const std::vector<Multivector> T = evaluate_T_all(tm, grid.nodes[t]);
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          quad[j][l] += mul(conj(T[l]), T[j]) *
                        (grid.weights[t] / (tm.norms[j] * tm.norms[l]));
    }
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l)
        worst_quad = std::max(worst_quad, norm(quad[j][l] - internal[j][l]));

    // each normalized element vanishes at the earlier poles
    for (int k = 2; k <= n; ++k)
      for (int i = 0; i + 1 < k; ++i)
        worst_zero = std::max(worst_zero, norm(evaluate(tm, k, poles[i]).second));
  }
  r.measured = worst_internal;
  r.passed = worst_internal <= r.tolerance && worst_quad <= 1e-6 && worst_zero <= 1e-8;
  r.detail = "off-diag " + fmt3(worst_internal) + ", quadrature dev " + fmt3(worst_quad) +
             ", zero dev " + fmt3(worst_zero);
  return r;
}

CheckResult check_tm_classical(const VerifyOptions&) {
  CheckResult r{7, "tm-classical", "tm", true, false, 0.0, 1e-9, 0.0, ""};
  using C = std::complex<double>;
  const std::vector<C> cpoles = {{0.0, 0.0}, {0.5, 0.0}, {0.3, 0.4}};
  std::vector<Paravector> poles;
  for (const C& c : cpoles) poles.push_back(Paravector{1, {c.real(), c.imag()}});
  const TMSystem tm = tm_for_poles(Domain::Ball, 1, poles);

  auto chain = [&cpoles](int n, C z) {
    C v = std::sqrt(1.0 - std::norm(cpoles[n - 1])) / (1.0 - std::conj(cpoles[n - 1]) * z);
    for (int k = 0; k + 1 < n; ++k) v *= (z - cpoles[k]) / (1.0 - std::conj(cpoles[k]) * z);
    return v;
  };

  double worst_mod = 0.0;
  for (int t = 0; t < 100; ++t) {
    const double th = 2.0 * M_PI * t / 100.0;
    const Paravector x{1, {std::cos(th), std::sin(th)}};
    const C z(std::cos(th), std::sin(th));
    for (int n = 1; n <= 3; ++n) {
      const Multivector B = evaluate(tm, n, x).second;
      worst_mod = std::max(worst_mod, std::abs(norm(B) - std::abs(chain(n, z))));
    }
  }

  const DenseGramOracle oracle(1, tm.gram);
  double worst_gram = 0.0;
  for (int j = 0; j < 3; ++j)
    for (int l = 0; l < j; ++l)
      worst_gram = std::max(worst_gram, norm(orthogonal_pair(oracle, tm.gs, j, l)) /
                                            (tm.norms[j] * tm.norms[l]));

  // the two systems agree up to a right unimodular constant; record it at z=1
  std::ostringstream factors;
  const Paravector x1{1, {1.0, 0.0}};
  for (int n = 1; n <= 3; ++n) {
    const Multivector B = evaluate(tm, n, x1).second;
    const C b(B[BladeMask(0)], B[BladeMask(1)]);
    const C u = b / chain(n, C(1.0, 0.0));
    factors << (n > 1 ? "; " : "") << "n=" << n << ": |u|=" << fmt3(std::abs(u))
            << " arg=" << fmt3(std::arg(u));
  }

  r.measured = worst_mod;
  r.passed = worst_mod <= r.tolerance && worst_gram <= 1e-10;
  r.detail = "modulus dev " + fmt3(worst_mod) + ", gram off-diag " + fmt3(worst_gram) +
             ", unimodular factor " + factors.str();
  return r;
}

CheckResult check_tm_self_pairing(const VerifyOptions& opt) {
  CheckResult r{8, "tm-self-pairing-report", "tm", false, true, 0.0, 1e-9, 0.0, ""};
  std::mt19937_64 rng(check_seed(opt, 8));
  double worst = 0.0;
  int violations = 0, systems = 0;
  std::string example;
  for (int m : {2, 3})
    for (int s = 0; s < 20; ++s) {
      const std::vector<Paravector> poles = distinct_poles(m, 5, rng, 0.15, 0.6, 0.05);
      const TMSystem tm = tm_for_poles(Domain::Ball, m, poles);
      const std::vector<double> ratios = scalar_gram_report(tm);
      const double top = *std::max_element(ratios.begin(), ratios.end());
      ++systems;
      if (top > 1e-9) {
        ++violations;
        if (example.empty()) {
          std::ostringstream os;
          os << "first at m=" << m << " set " << s << " ratio " << fmt3(top) << " poles";
          for (const Paravector& p : poles) {
            os << " (";
            for (int i = 0; i <= m; ++i) os << (i ? "," : "") << fmt3(p.x[i]);
            os << ")";
          }
          example = os.str();
        }
      }
      worst = std::max(worst, top);
    }
  r.measured = worst;
  r.passed = true;  // informational: self-pairings that stray from real scalars
                    // are recorded, not failed
  r.detail = std::to_string(violations) + " of " + std::to_string(systems) +
             " systems have |NSc|/Sc above 1e-9, max " + fmt3(worst) +
             (example.empty() ? "" : "; " + example);
  return r;
}

// ---------------------------------------------------------------------- afd

HardyFunction peaked_on_grid_combo(const SearchGrid& grid, std::mt19937_64& rng) {
  const int m = grid.m;
  const std::size_t D = grid.directions.size();
  const std::size_t picks[3] = {18 * D + 4 * 24 + 0, 18 * D + 19 * 24 + 8,
                                19 * D + 12 * 24 + 16};
  std::vector<AtomTerm> terms;
  for (std::size_t idx : picks) {
    Multivector c = rand_mv(m, rng);
    c *= 1.0 / norm(c);
    terms.push_back({KernelAtom{Domain::Ball, grid.candidates[idx], std::nullopt}, c});
  }
  return HardyFunction::atom_combo(Domain::Ball, m, terms);
}

CheckResult check_greedy_recovery(const VerifyOptions& opt) {
  CheckResult r{9, "greedy-recovery", "afd", true, false, 0.0, 1e-8, 0.0, ""};
  std::mt19937_64 rng(check_seed(opt, 9));
  const SearchGrid grid = make_search_grid(2);
  const HardyFunction f = peaked_on_grid_combo(grid, rng);

  AfdState st = afd_init(f, grid);
  double worst_book = 0.0;
  int steps = 0;
  while (steps < 10) {
    st = afd_step(st, f);
    ++steps;
    double captured = 0.0;
    for (double e : st.term_energies) captured += e;
    worst_book = std::max(worst_book,
                          std::abs(st.f_norm_sq - captured - st.residual_energy) / st.f_norm_sq);
    if (st.residual_energy < 1e-8 * st.f_norm_sq) break;
  }
  r.measured = st.residual_energy / st.f_norm_sq;
  r.passed = r.measured <= r.tolerance && worst_book <= 1e-10;
  r.detail = std::to_string(steps) + " steps, residual ratio " + fmt3(r.measured) +
             ", bookkeeping dev " + fmt3(worst_book);
  return r;
}

CheckResult check_greedy_rate(const VerifyOptions& opt) {
  CheckResult r{10, "greedy-rate", "afd", true, false, 0.0, 1.0, 0.0, ""};
  std::mt19937_64 rng(check_seed(opt, 10));
  const int m = 2;
  const SearchGrid grid = make_search_grid(m);
  const std::size_t D = grid.directions.size();
  std::uniform_int_distribution<std::size_t> rad(4, grid.radii.size() - 3);
  std::uniform_int_distribution<std::size_t> dir(0, D - 1);

  double worst_ratio = 0.0, worst_gain = 0.0;
  for (int run = 0; run < 5; ++run) {
    std::vector<AtomTerm> terms;
    double M = 0.0;
    while (terms.size() < 10) {
      const Paravector b = grid.candidates[rad(rng) * D + dir(rng)];
      bool fresh = true;
      for (const AtomTerm& t : terms) fresh = fresh && pv_dist(t.atom.pole, b) > 1e-6;
      if (!fresh) continue;
      const Multivector c = rand_mv(m, rng);
      M += norm(c);
      terms.push_back({KernelAtom{Domain::Ball, b, std::nullopt},
                       c * std::pow(1.0 - b.norm_sq(), 0.5 * m)});
    }
    const HardyFunction f = HardyFunction::atom_combo(Domain::Ball, m, terms);
    const AfdState st = afd_run(f, 50, 0.0, grid);

    // residual energy before step N, extended flat after an early stop
    std::vector<double> before(51, st.f_norm_sq);
    for (int N = 1; N <= 50; ++N) {
      const int done = std::min(N - 1, static_cast<int>(st.term_energies.size()));
      double captured = 0.0;
      for (int i = 0; i < done; ++i) captured += st.term_energies[i];
      before[N] = st.f_norm_sq - captured;
    }
    for (int N = 1; N <= 50; ++N) {
      if (N >= 2) worst_gain = std::max(worst_gain, before[N] - before[N - 1]);
      const double bound = std::pow(2.0, 0.5 * m) * M / std::sqrt(double(N));
      worst_ratio = std::max(worst_ratio, std::sqrt(std::max(before[N], 0.0)) / bound);
    }
  }
  r.measured = worst_ratio;
  r.passed = worst_ratio <= 1.0 + 1e-12 && worst_gain <= 1e-12;
  r.detail = "max sqrt(energy)/bound " + fmt3(worst_ratio) + ", max residual gain " +
             fmt3(worst_gain);
  return r;
}

CheckResult check_greedy_reorder(const VerifyOptions& opt) {
  CheckResult r{11, "greedy-reorder", "afd", true, false, 0.0, 1e-9, 0.0, ""};
  double worst = 0.0;
  for (int m : {2, 3}) {
    std::mt19937_64 rng(check_seed(opt, 11) + m);
    std::vector<AtomTerm> terms;
    for (int k = 0; k < 3; ++k) {
      Multivector c = rand_mv(m, rng);
      c *= 1.0 / norm(c);
      terms.push_back({KernelAtom{Domain::Ball, rand_ball(m, rng, 0.1, 0.6), std::nullopt}, c});
    }
    const HardyFunction f = HardyFunction::atom_combo(Domain::Ball, m, terms);
    for (int s = 0; s < 5; ++s)
      worst = std::max(worst,
                       reorder_projection_check(distinct_poles(m, 4, rng, 0.1, 0.6, 0.05), f));
  }
  r.measured = worst;
  r.passed = worst <= r.tolerance;
  r.detail = "worst projection difference " + fmt3(worst);
  return r;
}

CheckResult check_boundary_energy(const VerifyOptions& opt) {
  CheckResult r{12, "boundary-energy-decay", "afd", true, false, 0.0, 1e-3, 0.0, ""};
  std::mt19937_64 rng(check_seed(opt, 12));
  const int m = 2;
  std::vector<AtomTerm> terms;
  for (int k = 0; k < 3; ++k) {
    Multivector c = rand_mv(m, rng);
    c *= 1.0 / norm(c);
    terms.push_back({KernelAtom{Domain::Ball, rand_ball(m, rng, 0.2, 0.6), std::nullopt}, c});
  }
  const HardyFunction f = HardyFunction::atom_combo(Domain::Ball, m, terms);
  const AfdState st = afd_init(f);
  double worst = 0.0;
  for (const Paravector& dir : st.grid.directions) {
    Paravector a = dir;
    for (int i = 0; i <= m; ++i) a.x[i] *= 0.999;
    worst = std::max(worst, term_energy(st, a, f) / st.f_norm_sq);
  }
  r.measured = worst;
  r.passed = worst <= r.tolerance;
  r.detail = "max first-step energy ratio at radius 0.999: " + fmt3(worst);
  return r;
}

// ----------------------------------------------------------------- boundary

CheckResult check_schwarz_lift(const VerifyOptions& opt) {
  CheckResult r{13, "schwarz-lift", "boundary", true, false, 0.0, 1.0, 0.0, ""};
  std::mt19937_64 rng(check_seed(opt, 13));

  // constant data
  double e_const = 0.0;
  {
    BoundarySignal sig;
    sig.grid = build_grid(2, 40);
    sig.samples.assign(sig.grid.nodes.size(), 1.0);
    const HardyFunction F = schwarz_lift(sig);
    for (int t = 0; t < 10; ++t) {
      const Paravector x = rand_ball(2, rng, 0.05, 0.5);
      e_const = std::max(e_const, norm(F.eval(x) - Multivector::scalar(2, 1.0)));
    }
  }

  // disc data cos(theta) lifts to the identity
  double e_cos = 0.0;
  {
    BoundarySignal sig;
    sig.grid = build_grid(1, 40);
    for (const Paravector& node : sig.grid.nodes) sig.samples.push_back(node.x[0]);
    const HardyFunction F = schwarz_lift(sig);
    for (int t = 0; t < 10; ++t) {
      const Paravector x = rand_ball(1, rng, 0.05, 0.65);
      Multivector want(1);
      want[BladeMask(0)] = x.x[0];
      want[BladeMask(1)] = x.x[1];
      e_cos = std::max(e_cos, norm(F.eval(x) - want));
    }
  }

  // band-limited data recovered near the boundary through the scalar part;
  // strided full-sphere probe set (stride coprime to the azimuth count)
  double e_band = 0.0;
  {
    auto fval = [](const Paravector& w) {
      return 0.6 + 0.5 * w.x[0] + 0.8 * w.x[1] * w.x[2];
    };
    BoundarySignal sig;
    sig.grid = build_grid(2, 600);
    sig.samples.reserve(sig.grid.nodes.size());
    for (const Paravector& node : sig.grid.nodes) sig.samples.push_back(fval(node));
    for (std::size_t j = 0; j < sig.grid.nodes.size(); j += 607) {
      Paravector x = sig.grid.nodes[j];
      for (int i = 0; i <= 2; ++i) x.x[i] *= 0.99;
      e_band = std::max(e_band, std::abs(poisson_integral(sig, x) - fval(sig.grid.nodes[j])));
    }
  }

  r.measured = std::max({e_const / 1e-8, e_cos / 1e-6, e_band / 0.05});
  r.passed = r.measured <= r.tolerance;
  r.detail = "constant " + fmt3(e_const) + " (tol 1e-8), identity " + fmt3(e_cos) +
             " (tol 1e-6), band-limited " + fmt3(e_band) + " (tol 0.05)";
  return r;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& opt) {
  static const char* const kGroups[] = {"algebra", "basis", "kernels", "tm", "afd", "boundary"};
  if (!opt.only.empty()) {
    bool known = false;
    for (const char* g : kGroups) known = known || opt.only == g;
    if (!known)
      throw InvalidArgument(
          "unknown check group \"" + opt.only +
          "\" (expected one of algebra, basis, kernels, tm, afd, boundary)");
  }
  const auto want = [&opt](const char* g) { return opt.only.empty() || opt.only == g; };

  std::vector<CheckResult> out;
  const auto add = [&out](CheckResult (*fn)(const VerifyOptions&), const VerifyOptions& o) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = fn(o);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // a few checks carry their own wall-clock budget
    double budget = 0.0;
    if (r.id == 1) budget = 10.0;
    if (r.id == 3) budget = 30.0;
    if (r.id == 9) budget = 60.0;
    if (budget > 0.0 && r.seconds > budget) {
      r.passed = false;
      r.detail += "; exceeded " + fmt3(budget) + "s time budget (" + fmt3(r.seconds) + "s)";
    }
    out.push_back(std::move(r));
  };

  if (want("algebra")) {
    add(check_product_laws, opt);
    add(check_inverses, opt);
  }
  if (want("basis")) {
    add(check_basis_gram, opt);
    add(check_basis_dirac, opt);
  }
  if (want("kernels")) add(check_reproducing, opt);
  if (want("tm")) {
    add(check_tm_orthonormal, opt);
    add(check_tm_classical, opt);
    add(check_tm_self_pairing, opt);
  }
  if (want("afd")) {
    add(check_greedy_recovery, opt);
    add(check_greedy_rate, opt);
    add(check_greedy_reorder, opt);
    add(check_boundary_energy, opt);
  }
  if (want("boundary")) add(check_schwarz_lift, opt);

  if (opt.only.empty()) {
    CheckResult total{14, "total-runtime", "runtime", true, false, 0.0, 300.0, 0.0, ""};
    for (const CheckResult& c : out) total.measured += c.seconds;
    total.passed = total.measured <= total.tolerance;
    total.detail = "sum of check times, seconds";
    out.push_back(total);
  }
  return out;
}

bool verification_passed(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    if (c.gating && !c.passed) return false;
  return true;
}

nlohmann::json verification_report(const std::vector<CheckResult>& checks) {
  nlohmann::json rows = nlohmann::json::array();
  for (const CheckResult& c : checks)
    rows.push_back({{"id", c.id},
                    {"name", c.name},
                    {"group", c.group},
                    {"gating", c.gating},
                    {"passed", c.passed},
                    {"measured", c.measured},
                    {"tolerance", c.tolerance},
                    {"seconds", c.seconds},
                    {"detail", c.detail}});
  return {{"checks", rows}, {"passed", verification_passed(checks)}};
}

}  // namespace ctm
