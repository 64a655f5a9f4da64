#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctm/afd.hpp"
#include "ctm/boundary_embed.hpp"
#include "ctm/json_io.hpp"
#include "ctm/monogenics.hpp"
#include "ctm/tm_system.hpp"
#include "ctm/verify.hpp"

namespace {

using namespace ctm;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

int cmd_verify(const RunConfig& cfg, const std::string& report_name) {
  VerifyOptions opt;
  opt.quad_degree = cfg.quad_degree;
  opt.seed = cfg.seed;
  opt.only = cfg.only;
  const std::vector<CheckResult> checks = run_verification(opt);
  for (const CheckResult& c : checks) {
    const char* status = !c.gating ? "NOTE" : (c.passed ? "PASS" : "FAIL");
    std::printf("[%2d] %s %-24s group=%-8s measured=%.3g tolerance=%.3g (%.2fs)\n", c.id, status,
                c.name.c_str(), c.group.c_str(), c.measured, c.tolerance, c.seconds);
    if (!c.passed || !c.gating) std::printf("     %s\n", c.detail.c_str());
  }
  const bool ok = verification_passed(checks);
  const std::string path = out_path(cfg, report_name);
  nlohmann::json report = verification_report(checks);
  report["config"] = to_json(cfg);
  save_json(report, path);
  std::printf("%s: %zu checks, %s; report in %s\n", ok ? "ok" : "FAILED", checks.size(),
              ok ? "all gating checks passed" : "at least one gating check failed", path.c_str());
  return ok ? 0 : 1;
}

int cmd_monobasis(const RunConfig& cfg, int k) {
  const MonogenicBasis basis = orthobasis_Mk(cfg.m, k);
  nlohmann::json polys = nlohmann::json::array();
  for (std::size_t i = 0; i < basis.basis.size(); ++i) {
    const HyperPoly& p = basis.basis[i];
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, coeff] : p.terms()) {
      std::vector<int> expo(cfg.m + 1);
      for (int v = 0; v <= cfg.m; ++v) expo[v] = HyperPoly::key_exp(key, v);
      terms.push_back({{"exponents", expo}, {"coeff", to_json(coeff)}});
    }
    polys.push_back({{"index", basis.indices[i]},
                     {"den", p.den()},
                     {"terms", terms},
                     {"self_gram", to_json(basis.self_grams[i])}});
  }
  const std::string path = out_path(cfg, "basis.json");
  save_json({{"m", cfg.m}, {"k", k}, {"size", basis.basis.size()}, {"polynomials", polys}}, path);
  std::printf("wrote %zu basis polynomials to %s\n", basis.basis.size(), path.c_str());
  return 0;
}

int cmd_tm(const RunConfig& cfg, const std::string& poles_path) {
  const nlohmann::json in = load_json(poles_path);
  if (!in.is_object() || !in.contains("m") || !in.contains("poles"))
    throw InvalidArgument(poles_path + ": expected an object with \"m\" and \"poles\"");
  const int m = in.at("m").get<int>();
  TMSystem tm = make_tm(cfg.domain, m);
  std::vector<Paravector> poles;
  for (const nlohmann::json& row : in.at("poles")) {
    if (!row.is_array() || static_cast<int>(row.size()) != m + 1)
      throw InvalidArgument(poles_path + ": each pole needs m+1 coordinates");
    Paravector p{m, {}};
    for (int i = 0; i <= m; ++i) p.x[i] = row[i].get<double>();
    poles.push_back(p);
    tm = extend(tm, p);
  }
  const int n = tm.size();

  // identity certificate over the normalized system
  nlohmann::json dev = nlohmann::json::array();
  double max_off = 0.0;
  const DenseGramOracle oracle(m, tm.gram);
  for (int j = 0; j < n; ++j) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 0; l < n; ++l) {
      Multivector pair = orthogonal_pair(oracle, tm.gs, j, l) *
                         (1.0 / (tm.norms[j] * tm.norms[l]));
      if (j == l) pair -= Multivector::scalar(m, 1.0);
      const double d = norm(pair);
      if (j != l) max_off = std::max(max_off, d);
      row.push_back(d);
    }
    dev.push_back(row);
  }

  nlohmann::json lambda = nlohmann::json::array();
  for (const auto& lrow : tm.gs.lambda) {
    nlohmann::json jrow = nlohmann::json::array();
    for (const Multivector& c : lrow) jrow.push_back(to_json(c));
    lambda.push_back(jrow);
  }
  nlohmann::json self = nlohmann::json::array();
  for (const Multivector& g : tm.gs.self_grams) self.push_back(to_json(g));
  nlohmann::json jpoles = nlohmann::json::array();
  for (const Paravector& p : poles) jpoles.push_back(to_json(p));

  const std::vector<double> ratios = scalar_gram_report(tm);
  const std::string path = out_path(cfg, "tm.json");
  save_json({{"m", m},
             {"domain", domain_name(cfg.domain)},
             {"poles", jpoles},
             {"norms", tm.norms},
             {"lambda", lambda},
             {"self_grams", self},
             {"identity_deviation", dev},
             {"max_offdiagonal", max_off},
             {"self_pairing_ratios", ratios}},
            path);
  std::printf("wrote %d-element system to %s (max off-diagonal %.3g)\n", n, path.c_str(),
              max_off);
  return 0;
}

HardyFunction load_signal(const RunConfig& cfg, const std::string& path) {
  const nlohmann::json in = load_json(path);
  if (!in.is_object() || !in.contains("m"))
    throw InvalidArgument(path + ": expected an object with \"m\"");
  const int m = in.at("m").get<int>();
  const Domain domain =
      in.contains("domain") ? domain_from_name(in.at("domain").get<std::string>()) : cfg.domain;
  if (in.contains("atoms")) {
    std::vector<AtomTerm> terms;
    for (const nlohmann::json& row : in.at("atoms")) {
      KernelAtom atom;
      atom.domain = domain;
      atom.pole = paravector_from_json(row.at("pole"));
      if (row.contains("derivative"))
        atom.derivative = paravector_from_json(row.at("derivative"));
      terms.push_back({atom, multivector_from_json(row.at("coeff"))});
    }
    return HardyFunction::atom_combo(domain, m, std::move(terms));
  }
  if (in.contains("samples")) {
    if (!in.contains("degree"))
      throw InvalidArgument(path + ": boundary samples need a \"degree\" for their grid");
    const SphereGrid grid = build_grid(m, in.at("degree").get<int>());
    std::vector<Multivector> samples;
    for (const nlohmann::json& s : in.at("samples")) samples.push_back(multivector_from_json(s));
    return HardyFunction::boundary(domain, m, grid, std::move(samples));
  }
  throw InvalidArgument(path + ": expected \"atoms\" or \"samples\"");
}

int cmd_afd(const RunConfig& cfg, const std::string& signal_path) {
  const HardyFunction f = load_signal(cfg, signal_path);
  SearchGrid grid = make_search_grid(f.m(), cfg.grid_dr, cfg.grid_r_max, cfg.grid_angles);
  grid.refine_rounds = cfg.refine_rounds;
  const AfdState st = afd_run(f, cfg.n_max, cfg.stop_tol, grid);

  const int m = f.m();
  std::vector<std::string> header = {"step"};
  for (int i = 0; i <= m; ++i) header.push_back("pole_" + std::to_string(i));
  header.insert(header.end(), {"coeff_sc", "coeff_nsc", "term_energy", "residual_energy"});
  std::vector<std::vector<std::string>> rows;
  double captured = 0.0;
  for (std::size_t nstep = 0; nstep < st.poles.size(); ++nstep) {
    captured += st.term_energies[nstep];
    std::vector<std::string> row = {std::to_string(nstep + 1)};
    for (int i = 0; i <= m; ++i) row.push_back(format_number(st.poles[nstep].x[i]));
    row.push_back(format_number(Sc(st.coeffs[nstep])));
    row.push_back(format_number(norm(NSc(st.coeffs[nstep]))));
    row.push_back(format_number(st.term_energies[nstep]));
    row.push_back(format_number(st.f_norm_sq - captured));
    rows.push_back(std::move(row));
  }
  const std::string csv_path = out_path(cfg, "run.csv");
  write_csv(csv_path, header, rows);

  nlohmann::json atoms = nlohmann::json::array();
  for (const KernelAtom& a : st.tm.atoms) {
    nlohmann::json ja = {{"pole", to_json(a.pole)}};
    if (a.derivative) ja["derivative"] = to_json(*a.derivative);
    atoms.push_back(ja);
  }
  nlohmann::json coeffs = nlohmann::json::array();
  for (const Multivector& c : st.coeffs) coeffs.push_back(to_json(c));
  const std::string json_path = out_path(cfg, "run.json");
  save_json({{"config", to_json(cfg)},
             {"f_norm_sq", st.f_norm_sq},
             {"atoms", atoms},
             {"coefficients", coeffs},
             {"term_energies", st.term_energies},
             {"residual_energy", st.residual_energy}},
            json_path);
  std::printf("%zu steps, residual energy %.6g (%.3g of input); wrote %s and %s\n",
              st.poles.size(), st.residual_energy, st.residual_energy / st.f_norm_sq,
              csv_path.c_str(), json_path.c_str());
  return 0;
}

// Boundary samples must arrive in grid-node order, so expose the grids: the
// caller evaluates its data at these nodes and feeds the values back.
int cmd_emit_grid(const RunConfig& cfg, int degree, double radius, int panels, int points) {
  nlohmann::json nodes = nlohmann::json::array();
  nlohmann::json out;
  if (radius > 0.0) {
    const FlatGrid g = build_flat_grid(cfg.m, radius, panels, points);
    for (const Paravector& p : g.nodes) nodes.push_back(to_json(p));
    out = {{"m", cfg.m},        {"domain", "halfspace"}, {"radius", radius},
           {"panels", panels},  {"points", points},      {"nodes", nodes},
           {"weights", g.weights}};
  } else {
    const SphereGrid g = build_grid(cfg.m, degree);
    for (const Paravector& p : g.nodes) nodes.push_back(to_json(p));
    out = {{"m", cfg.m},
           {"domain", "ball"},
           {"degree", degree},
           {"nodes", nodes},
           {"weights", g.weights}};
  }
  const std::string path = out_path(cfg, "grid.json");
  save_json(out, path);
  std::printf("wrote %zu nodes to %s\n", nodes.size(), path.c_str());
  return 0;
}

int cmd_embed(const RunConfig& cfg, const std::string& signal_path, double ring) {
  const nlohmann::json in = load_json(signal_path);
  if (!in.is_object() || !in.contains("m") || !in.contains("samples"))
    throw InvalidArgument(signal_path + ": expected an object with \"m\" and \"samples\"");
  const int m = in.at("m").get<int>();
  std::vector<double> samples;
  for (const nlohmann::json& s : in.at("samples")) samples.push_back(s.get<double>());

  nlohmann::json probes = nlohmann::json::array();
  if (in.contains("radius")) {  // flat data on the half-space boundary
    const FlatGrid grid = build_flat_grid(m, in.at("radius").get<double>(),
                                          in.at("panels").get<int>(), in.at("points").get<int>());
    const HardyFunction F = cauchy_lift_halfspace({grid, samples});
    for (double x0 : {0.3, 0.6}) {
      Paravector x{m, {}};
      x.x[0] = x0;
      probes.push_back({{"x", to_json(x)}, {"value", to_json(F.eval(x))}});
    }
    const std::string path = out_path(cfg, "embed.json");
    save_json({{"m", m}, {"domain", "halfspace"}, {"probes", probes}}, path);
    std::printf("wrote %s\n", path.c_str());
    return 0;
  }

  if (!in.contains("degree"))
    throw InvalidArgument(signal_path + ": sphere samples need a \"degree\" for their grid");
  BoundarySignal sig;
  sig.grid = build_grid(m, in.at("degree").get<int>());
  sig.samples = samples;
  const HardyFunction F = schwarz_lift(sig);
  for (double r : {0.3, 0.6})
    for (int i = 0; i <= m; ++i)
      for (double sgn : {1.0, -1.0}) {
        Paravector x{m, {}};
        x.x[i] = sgn * r;
        probes.push_back({{"x", to_json(x)}, {"value", to_json(F.eval(x))}});
      }
  const std::string path = out_path(cfg, "embed.json");
  save_json({{"m", m}, {"domain", "ball"}, {"probes", probes}}, path);
  std::printf("wrote %s\n", path.c_str());

  if (ring > 0.0) {
    const HardyFunction g = ring_resample(F, ring);
    nlohmann::json jsamples = nlohmann::json::array();
    for (const Multivector& v : *g.boundary_samples()) jsamples.push_back(to_json(v));
    const std::string ring_path = out_path(cfg, "ring.json");
    save_json({{"m", m},
               {"domain", "ball"},
               {"degree", in.at("degree").get<int>()},
               {"ring_radius", ring},
               {"samples", jsamples}},
              ring_path);
    std::printf("wrote %s (boundary samples of the %.3g-dilate, usable as an afd signal)\n",
                ring_path.c_str(), ring);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford-algebra rational approximation toolkit"};
  app.require_subcommand(1);

  int m = 2;
  std::string domain = "ball";
  int quad_degree = 50;
  std::uint64_t seed = 42;
  std::string config_path;
  std::string out_dir = ".";
  auto* om = app.add_option("--m", m, "algebra dimension (1..6)");
  auto* od = app.add_option("--domain", domain, "ball or halfspace")
                 ->check(CLI::IsMember({"ball", "halfspace"}));
  auto* oq = app.add_option("--quad-degree", quad_degree, "sphere quadrature degree");
  auto* os = app.add_option("--seed", seed, "seed for randomized checks");
  app.add_option("--config", config_path, "JSON config file (flags override it)");
  auto* oo = app.add_option("--out", out_dir, "output directory");

  auto* verify = app.add_subcommand("verify", "run the verification suite");
  std::string only;
  auto* oonly = verify->add_option("--only", only, "restrict to one check group");

  auto* algebra = app.add_subcommand("algebra", "run only the algebra checks");

  auto* monobasis =
      app.add_subcommand("monobasis", "orthogonal basis of the degree-k monogenics");
  int k = 1;
  monobasis->add_option("--k", k, "polynomial degree")->required()->check(CLI::Range(0, 12));

  auto* tm = app.add_subcommand("tm", "orthogonal rational system for a pole list");
  std::string poles_path;
  tm->add_option("--poles", poles_path, "poles.json")->required();

  auto* afd = app.add_subcommand("afd", "greedy kernel decomposition of a signal");
  std::string afd_signal;
  int steps = 0;
  double stop_tol = -1.0;
  afd->add_option("--signal", afd_signal, "signal JSON (atoms or boundary samples)")->required();
  auto* osteps = afd->add_option("--steps", steps, "maximum number of terms");
  auto* otol = afd->add_option("--stop-tol", stop_tol, "relative residual-energy stop");

  auto* embed = app.add_subcommand("embed", "lift boundary data into the domain");
  std::string embed_signal;
  double ring = 0.0;
  embed->add_option("--signal", embed_signal, "real boundary data JSON");
  embed->add_option("--ring", ring, "also write boundary samples of this dilate")
      ->check(CLI::Range(0.0, 0.999999));
  bool emit_grid = false;
  int grid_degree = 30, grid_panels = 20, grid_points = 6;
  double grid_radius = 0.0;
  embed->add_flag("--emit-grid", emit_grid, "write the quadrature nodes instead of lifting");
  embed->add_option("--degree", grid_degree, "sphere grid degree for --emit-grid");
  embed->add_option("--radius", grid_radius, "emit a flat half-space grid of this radius");
  embed->add_option("--panels", grid_panels, "panels per axis for the flat grid");
  embed->add_option("--points", grid_points, "nodes per panel for the flat grid");

  CLI11_PARSE(app, argc, argv);

  try {
    ctm::RunConfig cfg;
    if (!config_path.empty()) cfg = ctm::load_config(config_path);
    if (om->count()) cfg.m = m;
    if (od->count()) cfg.domain = ctm::domain_from_name(domain);
    if (oq->count()) cfg.quad_degree = quad_degree;
    if (os->count()) cfg.seed = seed;
    if (oo->count()) cfg.out_dir = out_dir;
    if (oonly->count()) cfg.only = only;
    if (osteps->count()) cfg.n_max = steps;
    if (otol->count()) cfg.stop_tol = stop_tol;
    ctm::validate_config(cfg);
    std::filesystem::create_directories(cfg.out_dir);

    if (verify->parsed()) return cmd_verify(cfg, "verify_report.json");
    if (algebra->parsed()) {
      cfg.only = "algebra";
      return cmd_verify(cfg, "algebra.json");
    }
    if (monobasis->parsed()) return cmd_monobasis(cfg, k);
    if (tm->parsed()) return cmd_tm(cfg, poles_path);
    if (afd->parsed()) return cmd_afd(cfg, afd_signal);
    if (embed->parsed()) {
      if (emit_grid) return cmd_emit_grid(cfg, grid_degree, grid_radius, grid_panels, grid_points);
      if (embed_signal.empty())
        throw InvalidArgument("embed needs --signal (or --emit-grid to dump the nodes)");
      return cmd_embed(cfg, embed_signal, ring);
    }
  } catch (const ctm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
