#include "ctm/afd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "ctm/boundary_embed.hpp"

namespace ctm {

namespace {

double pv_dist(const Paravector& a, const Paravector& b) {
  double s = 0.0;
  for (int i = 0; i <= a.m; ++i) {
    const double d = a.x[i] - b.x[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// (1 - |a|^2)^m
double ball_weight(const Paravector& a) {
  const double base = 1.0 - a.norm_sq();
  double w = 1.0;
  for (int i = 0; i < a.m; ++i) w *= base;
  return w;
}

Multivector zero_mv(int m) { return Multivector(m); }

// Distance from a selected-pole list; also reports the nearest index.
double min_pole_dist(const std::vector<Paravector>& poles, const Paravector& a, int* idx) {
  double best = std::numeric_limits<double>::infinity();
  if (idx) *idx = -1;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const double d = pv_dist(poles[i], a);
    if (d < best) {
      best = d;
      if (idx) *idx = static_cast<int>(i);
    }
  }
  return best;
}

constexpr double kDupThreshold = 1e-9;    // same pole
constexpr double kNoiseBand = 1e-4;       // 0/0 cancellation shell around a pole
constexpr double kEnergyFloor = 1e-14;    // relative: "nothing left to pick up"

// For m <= 2 the algebra divides, so conj(x) x = |x|^2 and the inverse is a
// rescaled conjugate; the candidate sweep calls this hot enough that the
// generic pseudo-inverse would dominate the search.
std::optional<Multivector> fast_inverse(const Multivector& x) {
  if (x.m() <= 2) {
    const double n2 = norm_sq(x);
    if (n2 <= 0.0) return std::nullopt;
    return conj(x) * (1.0 / n2);
  }
  return try_inverse(x);
}

}  // namespace

// ---------------------------------------------------------------------------
// HardyFunction

HardyFunction HardyFunction::atom_combo(Domain domain, int m, std::vector<AtomTerm> terms) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  HardyFunction f;
  f.domain_ = domain;
  f.m_ = m;
  f.rep_ = Rep::AtomCombo;
  f.terms_ = std::move(terms);
  for (const AtomTerm& t : f.terms_) {
    if (t.atom.domain != domain) throw DomainMismatch();
    if (t.atom.pole.m != m) throw DimensionMismatch(m, t.atom.pole.m);
    if (t.coeff.m() != m) throw DimensionMismatch(m, t.coeff.m());
    validate_atom(t.atom);
  }
  // ||f||^2 = Sc( sum_k conj(c_k) sum_l <atom_l, atom_k> c_l )
  Multivector acc(m);
  const int n = static_cast<int>(f.terms_.size());
  for (int k = 0; k < n; ++k) {
    Multivector col(m);
    for (int l = 0; l < n; ++l)
      col += mul(gram_entry(f.terms_[l].atom, f.terms_[k].atom), f.terms_[l].coeff);
    acc += mul(conj(f.terms_[k].coeff), col);
  }
  f.norm_sq_ = std::max(Sc(acc), 0.0);
  return f;
}

HardyFunction HardyFunction::boundary(Domain domain, int m, SphereGrid grid,
                                      std::vector<Multivector> samples) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  if (domain != Domain::Ball)
    throw InvalidArgument("sphere-sampled boundary values describe the ball domain");
  if (grid.m != m) throw DimensionMismatch(m, grid.m);
  if (samples.size() != grid.nodes.size()) throw LengthMismatch(grid.nodes.size(), samples.size());
  HardyFunction f;
  f.domain_ = domain;
  f.m_ = m;
  f.rep_ = Rep::BoundarySzego;
  f.grid_ = std::move(grid);
  f.samples_ = std::move(samples);
  double nsq = 0.0;
  for (std::size_t j = 0; j < f.samples_.size(); ++j) {
    if (f.samples_[j].m() != m) throw DimensionMismatch(m, f.samples_[j].m());
    nsq += f.grid_.weights[j] * ctm::norm_sq(f.samples_[j]);
  }
  f.norm_sq_ = nsq;
  return f;
}

HardyFunction HardyFunction::boundary_schwarz(int m, SphereGrid grid,
                                              std::vector<double> samples) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  if (grid.m != m) throw DimensionMismatch(m, grid.m);
  if (samples.size() != grid.nodes.size()) throw LengthMismatch(grid.nodes.size(), samples.size());
  for (double s : samples)
    if (!std::isfinite(s)) throw InvalidArgument("boundary samples must be finite");
  HardyFunction f;
  f.domain_ = Domain::Ball;
  f.m_ = m;
  f.rep_ = Rep::BoundarySchwarz;
  f.grid_ = std::move(grid);
  f.real_samples_ = std::move(samples);
  return f;  // norm deferred: needs a resampling pass
}

HardyFunction HardyFunction::flat_cauchy(int m, FlatGrid grid, std::vector<double> samples) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  if (grid.m != m) throw DimensionMismatch(m, grid.m);
  if (samples.size() != grid.nodes.size()) throw LengthMismatch(grid.nodes.size(), samples.size());
  for (double s : samples)
    if (!std::isfinite(s)) throw InvalidArgument("boundary samples must be finite");
  HardyFunction f;
  f.domain_ = Domain::HalfSpace;
  f.m_ = m;
  f.rep_ = Rep::FlatCauchy;
  f.flat_ = std::move(grid);
  f.real_samples_ = std::move(samples);
  return f;  // norm deferred: needs a resampling pass
}

Multivector HardyFunction::eval(const Paravector& x) const {
  if (x.m != m_) throw DimensionMismatch(m_, x.m);
  switch (rep_) {
    case Rep::AtomCombo: {
      Multivector acc(m_);
      for (const AtomTerm& t : terms_) acc += mul(atom_eval(t.atom, x), t.coeff);
      return acc;
    }
    case Rep::BoundarySzego: {
      if (x.norm_sq() >= 1.0) throw PoleOutsideDomain();
      std::vector<Multivector> vals;
      vals.reserve(grid_.nodes.size());
      for (std::size_t j = 0; j < grid_.nodes.size(); ++j)
        vals.push_back(mul(conj(szego_eval(domain_, x, grid_.nodes[j])), samples_[j]));
      return integrate(grid_, vals);
    }
    case Rep::BoundarySchwarz: {
      if (x.norm_sq() >= 1.0) throw PoleOutsideDomain();
      std::vector<Multivector> vals;
      vals.reserve(grid_.nodes.size());
      const double area = sphere_area(m_);
      for (std::size_t j = 0; j < grid_.nodes.size(); ++j)
        vals.push_back(schwarz_kernel(m_, x, grid_.nodes[j]) * (area * real_samples_[j]));
      return integrate(grid_, vals);
    }
    case Rep::FlatCauchy: {
      if (!(x.x[0] > 0.0)) throw PoleOutsideDomain();
      const double scale = -1.0 / sphere_area(m_);
      Multivector acc(m_);
      for (std::size_t j = 0; j < flat_.nodes.size(); ++j) {
        Paravector u = flat_.nodes[j];
        for (int i = 0; i <= m_; ++i) u.x[i] -= x.x[i];
        acc += (scale * flat_.weights[j] * real_samples_[j]) * cauchy_kernel(u);
      }
      return acc;
    }
  }
  throw InvalidArgument("unknown representation");
}

Multivector HardyFunction::inner_atom(const KernelAtom& atom) const {
  if (atom.domain != domain_) throw DomainMismatch();
  if (atom.pole.m != m_) throw DimensionMismatch(m_, atom.pole.m);
  validate_atom(atom);
  switch (rep_) {
    case Rep::AtomCombo: {
      Multivector acc(m_);
      for (const AtomTerm& t : terms_) acc += mul(gram_entry(t.atom, atom), t.coeff);
      return acc;
    }
    case Rep::BoundarySzego: {
      std::vector<Multivector> vals;
      vals.reserve(grid_.nodes.size());
      for (std::size_t j = 0; j < grid_.nodes.size(); ++j)
        vals.push_back(mul(conj(atom_eval(atom, grid_.nodes[j])), samples_[j]));
      return integrate(grid_, vals);
    }
    default:
      throw InvalidArgument(
          "inner products need stored boundary values; restrict the function with "
          "ring_resample first");
  }
}

double HardyFunction::norm_sq() const {
  if (norm_sq_) return *norm_sq_;
  double nsq = 0.0;
  if (rep_ == Rep::BoundarySchwarz) {
    // Norm of the 0.99-dilate: the completion kernel cannot be resolved at
    // the boundary itself on a finite grid.
    const double rho = 0.99;
    for (std::size_t j = 0; j < grid_.nodes.size(); ++j) {
      Paravector x = grid_.nodes[j];
      for (int i = 0; i <= m_; ++i) x.x[i] *= rho;
      nsq += grid_.weights[j] * ctm::norm_sq(eval(x));
    }
  } else if (rep_ == Rep::FlatCauchy) {
    // Flat L^2 norm on a slice just above the boundary, the half-space
    // analogue of the dilate.
    const double h = 0.01 * flat_.radius;
    for (std::size_t j = 0; j < flat_.nodes.size(); ++j) {
      Paravector x = flat_.nodes[j];
      x.x[0] = h;
      nsq += flat_.weights[j] * ctm::norm_sq(eval(x));
    }
  }
  norm_sq_ = nsq;
  return nsq;
}

const std::vector<AtomTerm>* HardyFunction::atoms() const {
  return rep_ == Rep::AtomCombo ? &terms_ : nullptr;
}
const SphereGrid* HardyFunction::boundary_grid() const {
  return (rep_ == Rep::BoundarySzego || rep_ == Rep::BoundarySchwarz) ? &grid_ : nullptr;
}
const std::vector<Multivector>* HardyFunction::boundary_samples() const {
  return rep_ == Rep::BoundarySzego ? &samples_ : nullptr;
}
const std::vector<double>* HardyFunction::real_samples() const {
  return (rep_ == Rep::BoundarySchwarz || rep_ == Rep::FlatCauchy) ? &real_samples_ : nullptr;
}
const FlatGrid* HardyFunction::flat_grid() const {
  return rep_ == Rep::FlatCauchy ? &flat_ : nullptr;
}

// ---------------------------------------------------------------------------
// SearchGrid

SearchGrid make_search_grid(int m, double dr, double r_max, std::vector<int> angle_counts) {
  if (m < kMinM || m > kMaxM) throw UnsupportedDimension(m);
  if (!(dr > 0.0) || !(r_max > 0.0) || r_max >= 1.0)
    throw InvalidArgument("search grid needs 0 < dr and 0 < r_max < 1");
  if (angle_counts.empty()) angle_counts.assign(m, m <= 2 ? 24 : 12);
  if (static_cast<int>(angle_counts.size()) != m)
    throw InvalidArgument("need one angular count per angle");
  for (int c : angle_counts)
    if (c < 1) throw InvalidArgument("angular counts must be positive");

  SearchGrid g;
  g.m = m;
  g.angle_counts = angle_counts;
  g.radial_spacing = dr;
  for (double r = 0.0; r <= r_max + 1e-12; r += dr) g.radii.push_back(r);

  // Angle-lexicographic directions: theta_1..theta_{m-1} are polar midpoints
  // in (0, pi), theta_m is a uniform azimuth in [0, 2pi).
  std::vector<int> idx(m, 0);
  const long total = [&] {
    long t = 1;
    for (int c : angle_counts) t *= c;
    return t;
  }();
  std::array<double, 7> theta{};
  for (long c = 0; c < total; ++c) {
    for (int i = 0; i < m; ++i) {
      const int n = angle_counts[i];
      theta[i] = (i + 1 < m) ? M_PI * (idx[i] + 0.5) / n : 2.0 * M_PI * idx[i] / n;
    }
    Paravector dir;
    dir.m = m;
    double sines = 1.0;
    for (int i = 0; i < m; ++i) {
      dir.x[i] = sines * std::cos(theta[i]);
      sines *= std::sin(theta[i]);
    }
    dir.x[m] = sines;
    g.directions.push_back(dir);
    for (int i = m - 1; i >= 0; --i) {
      if (++idx[i] < angle_counts[i]) break;
      idx[i] = 0;
    }
  }

  // Candidates, radius-major.
  std::vector<std::array<double, 7>> dir_theta(g.directions.size());
  {
    std::vector<int> jdx(m, 0);
    for (std::size_t d = 0; d < g.directions.size(); ++d) {
      for (int i = 0; i < m; ++i) {
        const int n = angle_counts[i];
        dir_theta[d][i + 1] =
            (i + 1 < m) ? M_PI * (jdx[i] + 0.5) / n : 2.0 * M_PI * jdx[i] / n;
      }
      for (int i = m - 1; i >= 0; --i) {
        if (++jdx[i] < angle_counts[i]) break;
        jdx[i] = 0;
      }
    }
  }
  g.candidates.reserve(g.radii.size() * g.directions.size());
  g.params.reserve(g.candidates.capacity());
  for (double r : g.radii) {
    for (std::size_t d = 0; d < g.directions.size(); ++d) {
      Paravector a;
      a.m = m;
      for (int i = 0; i <= m; ++i) a.x[i] = r * g.directions[d].x[i];
      g.candidates.push_back(a);
      std::array<double, 7> p = dir_theta[d];
      p[0] = r;
      g.params.push_back(p);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Search internals

namespace {

// Directional derivative of an atom's evaluation in the argument.  A plain
// atom has the closed form directly; for a pole-derivative atom the mixed
// pole/argument derivative comes out of the same second-derivative forms the
// Gram entries use.
Multivector atom_arg_derivative(const KernelAtom& atom, const Paravector& x,
                                const Paravector& omega) {
  const int m = atom.pole.m;
  const Multivector w = detail::kernel_w(atom.domain, atom.pole, x);
  const Multivector omv = omega.to_multivector();
  if (!atom.derivative) {
    return szego_arg_derivative(atom.domain, atom.pole, x, omega);
  }
  const Multivector nu_c = atom.derivative->conj().to_multivector();
  if (atom.domain == Domain::Ball) {
    const Multivector u_nu = -mul(nu_c, x.to_multivector());
    const Multivector u_om = -mul(atom.pole.conj().to_multivector(), omv);
    return detail::kernel_shape_dd(w, u_nu, u_om, m) +
           detail::kernel_shape_d(w, -mul(nu_c, omv), m);
  }
  return detail::kernel_shape_dd(w, nu_c, omv, m);
}

struct SearchOutcome {
  Paravector pole;
  std::optional<Paravector> direction;  // set when the pole repeats
  double energy = -1.0;
  bool found = false;
};

// Energy of appending the given atom, from the Gram-table recursion alone
// (no candidate caches).  Shared by the public term_energy, refinement, and
// the derivative-direction scoring.
struct CandidateScorer {
  const AfdState& st;
  const HardyFunction& f;

  // Residual value and candidate Gram sum at a pole from T_i evaluations.
  double plain_energy(const Paravector& a) const {
    const std::vector<Multivector> T = evaluate_T_all(st.tm, a);
    Multivector e = f.eval(a);
    Multivector gsum(st.tm.m);
    for (std::size_t i = 0; i < T.size(); ++i) {
      e -= mul(T[i], st.proj[i]);
      gsum += mul(mul(T[i], st.gram_inv[i]), conj(T[i]));
    }
    return scaled_energy(a, e, gsum);
  }

  double scaled_energy(const Paravector& a, const Multivector& e, const Multivector& gsum) const {
    const double s = ball_weight(a);
    Multivector sg = Multivector::scalar(st.tm.m, 1.0) - s * gsum;
    if (Sc(sg) < 1e-12) return -1.0;  // degenerate shell: not a usable candidate
    const auto inv = fast_inverse(sg);
    if (!inv) return -1.0;
    return std::max(s * Sc(mul(mul(conj(e), *inv), e)), 0.0);
  }

  // Best derivative direction at a repeated pole p: the residual pairing is
  // linear and the candidate Gram bilinear in the direction, so both reduce
  // to m+1 precomputed multivectors / an (m+1)^2 table.
  std::pair<double, Paravector> derivative_energy(const Paravector& p,
                                                  const std::vector<Paravector>& dirs) const {
    const int m = st.tm.m;
    const int n = st.tm.size();
    std::vector<KernelAtom> partial(m + 1);
    for (int j = 0; j <= m; ++j) {
      Paravector ej;
      ej.m = m;
      ej.x[j] = 1.0;
      partial[j] = KernelAtom{st.tm.domain, p, ej};
    }
    // (d_j T_i)(p) for every atom i and coordinate j
    std::vector<std::vector<Multivector>> dT(m + 1);
    for (int j = 0; j <= m; ++j) {
      std::vector<Multivector> av;
      av.reserve(n);
      for (const KernelAtom& atom : st.tm.atoms) {
        Paravector ej;
        ej.m = m;
        ej.x[j] = 1.0;
        av.push_back(atom_arg_derivative(atom, p, ej));
      }
      dT[j].reserve(n);
      for (int i = 0; i < n; ++i) {
        Multivector t(m);
        for (int k = 0; k <= i; ++k) t += mul(av[k], st.tm.gs.lambda[i][k]);
        dT[j].push_back(t);
      }
    }
    // residual partials P_j = <f, partial_j> - sum_i (d_j T_i)(p) g_i^{-1} e_i
    std::vector<Multivector> P(m + 1, Multivector(m));
    for (int j = 0; j <= m; ++j) {
      P[j] = f.inner_atom(partial[j]);
      for (int i = 0; i < n; ++i) P[j] -= mul(dT[j][i], st.proj[i]);
    }
    // candidate Gram table H_jk = <partial_j, partial_k> - sum_i projections
    std::vector<std::vector<Multivector>> H(m + 1, std::vector<Multivector>(m + 1, Multivector(m)));
    for (int j = 0; j <= m; ++j)
      for (int k = 0; k <= m; ++k) {
        H[j][k] = gram_entry(partial[j], partial[k]);
        for (int i = 0; i < n; ++i)
          H[j][k] -= mul(mul(dT[j][i], st.gram_inv[i]), conj(dT[k][i]));
      }

    double best = -1.0;
    Paravector best_dir = dirs.empty() ? Paravector{} : dirs[0];
    for (const Paravector& w : dirs) {
      Multivector e(m), g(m);
      for (int j = 0; j <= m; ++j) {
        if (w.x[j] == 0.0) continue;
        e += w.x[j] * P[j];
        for (int k = 0; k <= m; ++k) {
          if (w.x[k] == 0.0) continue;
          g += (w.x[j] * w.x[k]) * H[j][k];
        }
      }
      if (Sc(g) < 1e-12) continue;
      const auto inv = fast_inverse(g);
      if (!inv) continue;
      const double en = std::max(Sc(mul(mul(conj(e), *inv), e)), 0.0);
      if (en > best) {
        best = en;
        best_dir = w;
      }
    }
    return {best, best_dir};
  }
};

SearchOutcome run_search(const AfdState& st, const HardyFunction& f, const SearchGrid& grid,
                         bool use_caches) {
  CandidateScorer scorer{st, f};
  const int m = st.tm.m;

  // Score each distinct selected pole's best derivative direction once.
  struct DupEntry {
    Paravector pole;
    double energy = -1.0;
    Paravector direction;
    bool seen_on_grid = false;
  };
  std::vector<DupEntry> dups;
  for (const Paravector& p : st.poles) {
    bool known = false;
    for (const DupEntry& d : dups) known = known || pv_dist(d.pole, p) <= kDupThreshold;
    if (known) continue;
    int occ = 0;
    for (const Paravector& q : st.poles)
      if (pv_dist(p, q) <= kDupThreshold) ++occ;
    if (occ + 1 > m + 1) continue;  // multiplicity exhausted
    DupEntry d;
    d.pole = p;
    const auto [en, dir] = scorer.derivative_energy(p, grid.directions);
    d.energy = en;
    d.direction = dir;
    dups.push_back(d);
  }
  auto dup_at = [&](const Paravector& a) -> DupEntry* {
    for (DupEntry& d : dups)
      if (pv_dist(d.pole, a) <= kDupThreshold) return &d;
    return nullptr;
  };

  SearchOutcome best;
  std::size_t best_index = 0;
  bool best_is_dup = false;
  auto consider = [&](double en, std::size_t index, const Paravector& pole,
                      const DupEntry* dup) {
    if (en <= best.energy) return;
    best.energy = en;
    best.pole = pole;
    best.found = true;
    best_index = index;
    best_is_dup = dup != nullptr;
    best.direction = dup ? std::optional<Paravector>(dup->direction) : std::nullopt;
  };

  for (std::size_t c = 0; c < grid.candidates.size(); ++c) {
    const Paravector& a = grid.candidates[c];
    int nearest = -1;
    const double dist = min_pole_dist(st.poles, a, &nearest);
    if (dist <= kDupThreshold) {
      DupEntry* d = dup_at(a);
      if (!d) continue;  // multiplicity exhausted
      d->seen_on_grid = true;
      consider(d->energy, c, d->pole, d);
      continue;
    }
    if (dist <= kNoiseBand) continue;
    double en;
    if (use_caches) {
      en = scorer.scaled_energy(a, st.cand_res[c], st.cand_gramsum[c]);
    } else {
      en = scorer.plain_energy(a);
    }
    consider(en, c, a, nullptr);
  }
  // Poles selected off-grid never coincide with a grid candidate; append them.
  for (std::size_t d = 0; d < dups.size(); ++d) {
    if (dups[d].seen_on_grid) continue;
    consider(dups[d].energy, grid.candidates.size() + d, dups[d].pole, &dups[d]);
  }

  if (!best.found || best.energy <= kEnergyFloor * st.f_norm_sq) {
    // Nothing usable (typically a fully captured f): report the first grid
    // point with zero energy so the caller can stop.
    best.pole = grid.candidates.empty() ? Paravector{} : grid.candidates.front();
    best.energy = std::max(best.energy, 0.0);
    best.direction.reset();
    return best;
  }

  // Local refinement in (r, theta) around a regular incumbent; a repeated
  // pole is pinned, its direction already chosen against the full list.
  if (!best_is_dup && best_index < grid.params.size()) {
    std::array<double, 7> p = grid.params[best_index];
    const double r_max = grid.radii.empty() ? 0.95 : grid.radii.back();
    for (int round = 1; round <= grid.refine_rounds; ++round) {
      std::array<double, 7> spacing{};
      spacing[0] = grid.radial_spacing / std::pow(2.0, round);
      for (int i = 0; i < m; ++i) {
        const int n = grid.angle_counts[i];
        const double full = (i + 1 < m) ? M_PI / n : 2.0 * M_PI / n;
        spacing[i + 1] = full / std::pow(2.0, round);
      }
      std::array<double, 7> incumbent = p;
      // 3^(m+1) offsets, lexicographic, center included
      std::vector<int> off(m + 1, 0);
      const long total = [&] {
        long t = 1;
        for (int i = 0; i <= m; ++i) t *= 3;
        return t;
      }();
      for (long c = 0; c < total; ++c) {
        std::array<double, 7> q = p;
        for (int i = 0; i <= m; ++i) q[i] += (off[i] - 1) * spacing[i];
        for (int i = m; i >= 0; --i) {
          if (++off[i] < 3) break;
          off[i] = 0;
        }
        q[0] = std::clamp(q[0], 0.0, r_max);
        for (int i = 1; i < m; ++i) q[i] = std::clamp(q[i], 0.0, M_PI);
        if (m >= 1) {
          double az = std::fmod(q[m], 2.0 * M_PI);
          if (az < 0) az += 2.0 * M_PI;
          q[m] = az;
        }
        Paravector a;
        a.m = m;
        double sines = q[0];
        for (int i = 0; i < m; ++i) {
          a.x[i] = sines * std::cos(q[i + 1]);
          sines *= std::sin(q[i + 1]);
        }
        a.x[m] = sines;
        if (min_pole_dist(st.poles, a, nullptr) <= kNoiseBand) continue;
        const double en = scorer.plain_energy(a);
        if (en > best.energy) {
          best.energy = en;
          best.pole = a;
          incumbent = q;
        }
      }
      p = incumbent;
    }
  }
  return best;
}

bool grids_match(const SearchGrid& a, const SearchGrid& b) {
  if (a.candidates.size() != b.candidates.size() || a.candidates.empty()) return false;
  return pv_dist(a.candidates.front(), b.candidates.front()) == 0.0 &&
         pv_dist(a.candidates.back(), b.candidates.back()) == 0.0;
}

AfdState apply_step(const AfdState& state, const HardyFunction& f, const SearchOutcome& pick) {
  AfdState st = state;
  st.tm = pick.direction ? extend(st.tm, pick.pole, *pick.direction) : extend(st.tm, pick.pole);
  const int n = st.tm.size();
  const KernelAtom& atom = st.tm.atoms.back();

  st.atom_inners.push_back(f.inner_atom(atom));
  const std::vector<Multivector>& lam = st.tm.gs.lambda[n - 1];
  Multivector e(st.tm.m);
  for (int k = 0; k < n; ++k) e += mul(conj(lam[k]), st.atom_inners[k]);
  const Multivector ginv = inverse(st.tm.gs.self_grams[n - 1]);
  const Multivector pr = mul(ginv, e);

  st.cross.push_back(e);
  st.gram_inv.push_back(ginv);
  st.proj.push_back(pr);
  st.coeffs.push_back(st.tm.norms[n - 1] * pr);
  st.term_energies.push_back(std::max(Sc(mul(conj(e), pr)), 0.0));
  double captured = 0.0;
  for (double t : st.term_energies) captured += t;
  st.residual_energy = st.f_norm_sq - captured;
  st.poles.push_back(pick.pole);

  // Fold T_n into the per-candidate caches.
  const std::size_t C = st.grid.candidates.size();
  for (std::size_t c = 0; c < C; ++c) {
    const Paravector& a = st.grid.candidates[c];
    Multivector t(st.tm.m);
    for (int k = 0; k < n; ++k) t += mul(atom_eval(st.tm.atoms[k], a), lam[k]);
    st.cand_res[c] -= mul(t, pr);
    st.cand_gramsum[c] += mul(mul(t, ginv), conj(t));
  }
  return st;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations

AfdState afd_init(const HardyFunction& f, SearchGrid grid) {
  if (f.domain() != Domain::Ball)
    throw InvalidArgument("greedy decomposition is formulated on the ball");
  if (f.rep() == HardyFunction::Rep::BoundarySchwarz)
    throw InvalidArgument(
        "restrict completion-kernel functions with ring_resample before decomposing");
  if (grid.m == 0) grid = make_search_grid(f.m());
  if (grid.m != f.m()) throw DimensionMismatch(f.m(), grid.m);
  if (grid.candidates.empty()) throw InvalidArgument("search grid has no candidates");

  AfdState st;
  st.tm = make_tm(Domain::Ball, f.m());
  st.grid = std::move(grid);
  st.f_norm_sq = f.norm_sq();
  st.residual_energy = st.f_norm_sq;
  const std::size_t C = st.grid.candidates.size();
  st.cand_f.reserve(C);
  for (std::size_t c = 0; c < C; ++c) st.cand_f.push_back(f.eval(st.grid.candidates[c]));
  st.cand_res = st.cand_f;
  st.cand_gramsum.assign(C, zero_mv(f.m()));
  return st;
}

double term_energy(const AfdState& state, const Paravector& a, const HardyFunction& f) {
  if (a.m != state.tm.m) throw DimensionMismatch(state.tm.m, a.m);
  if (a.norm_sq() >= 1.0) throw PoleOutsideDomain();
  if (min_pole_dist(state.poles, a, nullptr) <= kDupThreshold)
    throw InvalidArgument("pole already selected; repeats enter through derivative atoms");
  CandidateScorer scorer{state, f};
  const double en = scorer.plain_energy(a);
  return std::max(en, 0.0);
}

Paravector msp_search(const AfdState& state, const HardyFunction& f, const SearchGrid& grid) {
  if (grid.candidates.empty()) throw InvalidArgument("search grid has no candidates");
  const bool cached = grids_match(grid, state.grid);
  return run_search(state, f, grid, cached).pole;
}

AfdState afd_step(const AfdState& state, const HardyFunction& f) {
  const SearchOutcome pick = run_search(state, f, state.grid, true);
  return apply_step(state, f, pick);
}

AfdState afd_run(const HardyFunction& f, int n_max, double stop_tol, SearchGrid grid) {
  if (n_max < 1) throw InvalidArgument("need at least one step");
  AfdState st = afd_init(f, std::move(grid));
  while (st.tm.size() < n_max) {
    if (st.residual_energy < stop_tol * st.f_norm_sq) break;
    const SearchOutcome pick = run_search(st, f, st.grid, true);
    if (pick.energy <= kEnergyFloor * st.f_norm_sq) break;
    st = apply_step(st, f, pick);
  }
  return st;
}

Multivector reconstruct(const AfdState& state, const Paravector& x) {
  if (state.tm.size() == 0) return Multivector(state.tm.m >= kMinM ? state.tm.m : kMinM);
  const std::vector<Multivector> T = evaluate_T_all(state.tm, x);
  Multivector acc(state.tm.m);
  for (std::size_t n = 0; n < T.size(); ++n) acc += mul(T[n], state.proj[n]);
  return acc;
}

double reorder_projection_check(const std::vector<Paravector>& poles, const HardyFunction& f) {
  if (poles.empty()) throw InvalidArgument("need at least one pole");
  const int m = f.m();

  auto project = [&](const std::vector<Paravector>& order, TMSystem* out_tm) {
    TMSystem tm = make_tm(f.domain(), m);
    for (const Paravector& p : order) tm = extend(tm, p);
    std::vector<Multivector> inners;
    inners.reserve(tm.size());
    for (const KernelAtom& atom : tm.atoms) inners.push_back(f.inner_atom(atom));
    std::vector<Multivector> d(tm.size(), Multivector(m));
    for (int n = 0; n < tm.size(); ++n) {
      Multivector e(m);
      for (int k = 0; k <= n; ++k) e += mul(conj(tm.gs.lambda[n][k]), inners[k]);
      const Multivector pr = mul(inverse(tm.gs.self_grams[n]), e);
      for (int k = 0; k <= n; ++k) d[k] += mul(tm.gs.lambda[n][k], pr);
    }
    if (out_tm) *out_tm = tm;
    return d;
  };

  TMSystem tm1;
  const std::vector<Multivector> d1 = project(poles, &tm1);
  std::vector<Paravector> rev(poles.rbegin(), poles.rend());
  TMSystem tm2;
  const std::vector<Multivector> d2 = project(rev, &tm2);

  // Align the two coefficient vectors over the shared atom dictionary.
  std::vector<Multivector> delta = d1;
  for (int k2 = 0; k2 < tm2.size(); ++k2) {
    int match = -1;
    for (int k1 = 0; k1 < tm1.size() && match < 0; ++k1) {
      const KernelAtom& a1 = tm1.atoms[k1];
      const KernelAtom& a2 = tm2.atoms[k2];
      if (pv_dist(a1.pole, a2.pole) > kDupThreshold) continue;
      if (a1.derivative.has_value() != a2.derivative.has_value()) continue;
      if (a1.derivative && pv_dist(*a1.derivative, *a2.derivative) > kDupThreshold) continue;
      match = k1;
    }
    if (match < 0) throw InvalidArgument("pole permutations produced different dictionaries");
    delta[match] -= d2[k2];
  }

  Multivector acc(m);
  for (int k = 0; k < tm1.size(); ++k) {
    Multivector col(m);
    for (int l = 0; l < tm1.size(); ++l) col += mul(tm1.gram[l][k], delta[l]);
    acc += mul(conj(delta[k]), col);
  }
  return std::sqrt(std::max(Sc(acc), 0.0));
}

}  // namespace ctm
