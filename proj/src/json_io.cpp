#include "ctm/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace ctm {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InvalidArgument(what); }

double require_finite(double v, const char* key) {
  if (!std::isfinite(v)) fail(std::string(key) + ": value must be finite");
  return v;
}

const nlohmann::json* find(const nlohmann::json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

template <typename T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
  if (const nlohmann::json* v = find(j, key)) {
    try {
      out = v->get<T>();
    } catch (const nlohmann::json::exception& e) {
      fail(std::string(key) + ": " + e.what());
    }
  }
}

}  // namespace

void validate_config(const RunConfig& c) {
  if (c.m < kMinM || c.m > kMaxM) fail("m: must be in [1,6]");
  if (c.quad_degree < 1) fail("quad_degree: must be >= 1");
  if (!(c.grid_dr > 0.0) || c.grid_dr > 1.0) fail("grid_dr: must be in (0,1]");
  if (!(c.grid_r_max > 0.0) || c.grid_r_max >= 1.0) fail("grid_r_max: must be in (0,1)");
  for (int n : c.grid_angles)
    if (n < 1) fail("grid_angles: counts must be >= 1");
  if (!c.grid_angles.empty() && static_cast<int>(c.grid_angles.size()) != c.m)
    fail("grid_angles: needs one count per angle (m entries) or none");
  if (c.refine_rounds < 0 || c.refine_rounds > 16) fail("refine_rounds: must be in [0,16]");
  if (c.n_max < 1) fail("n_max: must be >= 1");
  if (!(c.stop_tol >= 0.0)) fail("stop_tol: must be >= 0");
  if (c.out_dir.empty()) fail("out_dir: must not be empty");
}

std::string domain_name(Domain d) { return d == Domain::Ball ? "ball" : "halfspace"; }

Domain domain_from_name(const std::string& s) {
  if (s == "ball") return Domain::Ball;
  if (s == "halfspace") return Domain::HalfSpace;
  fail("domain: expected \"ball\" or \"halfspace\", got \"" + s + "\"");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

nlohmann::json to_json(const Multivector& x) {
  std::vector<double> coeffs(x.dim());
  for (int i = 0; i < x.dim(); ++i) coeffs[i] = x[BladeMask(i)];
  return {{"m", x.m()}, {"coeffs", coeffs}};
}

nlohmann::json to_json(const Paravector& p) {
  std::vector<double> xs(p.x.begin(), p.x.begin() + p.m + 1);
  return {{"m", p.m}, {"x", xs}};
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"m", c.m},
          {"domain", domain_name(c.domain)},
          {"quad_degree", c.quad_degree},
          {"grid_dr", c.grid_dr},
          {"grid_r_max", c.grid_r_max},
          {"grid_angles", c.grid_angles},
          {"refine_rounds", c.refine_rounds},
          {"n_max", c.n_max},
          {"stop_tol", c.stop_tol},
          {"seed", c.seed},
          {"out_dir", c.out_dir},
          {"only", c.only}};
}

Multivector multivector_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !find(j, "m") || !find(j, "coeffs"))
    fail("multivector: expected an object with \"m\" and \"coeffs\"");
  int m = 0;
  std::vector<double> coeffs;
  read_field(j, "m", m);
  read_field(j, "coeffs", coeffs);
  if (m < kMinM || m > kMaxM) fail("multivector m: must be in [1,6]");
  Multivector x(m);
  if (static_cast<int>(coeffs.size()) != x.dim())
    fail("multivector coeffs: expected " + std::to_string(x.dim()) + " entries, got " +
         std::to_string(coeffs.size()));
  for (int i = 0; i < x.dim(); ++i) x[BladeMask(i)] = require_finite(coeffs[i], "coeffs");
  return x;
}

Paravector paravector_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !find(j, "m") || !find(j, "x"))
    fail("paravector: expected an object with \"m\" and \"x\"");
  int m = 0;
  std::vector<double> xs;
  read_field(j, "m", m);
  read_field(j, "x", xs);
  if (m < kMinM || m > kMaxM) fail("paravector m: must be in [1,6]");
  if (static_cast<int>(xs.size()) != m + 1)
    fail("paravector x: expected " + std::to_string(m + 1) + " entries, got " +
         std::to_string(xs.size()));
  Paravector p{m, {}};
  for (int i = 0; i <= m; ++i) p.x[i] = require_finite(xs[i], "x");
  return p;
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail("config: expected a JSON object");
  static const char* const known[] = {"m",           "domain",        "quad_degree",
                                      "grid_dr",     "grid_r_max",    "grid_angles",
                                      "refine_rounds", "n_max",       "stop_tol",
                                      "seed",        "out_dir",       "only"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) fail("config: unknown key \"" + it.key() + "\"");
  }
  RunConfig c;
  read_field(j, "m", c.m);
  if (const nlohmann::json* v = find(j, "domain")) {
    if (!v->is_string()) fail("domain: expected a string");
    c.domain = domain_from_name(v->get<std::string>());
  }
  read_field(j, "quad_degree", c.quad_degree);
  read_field(j, "grid_dr", c.grid_dr);
  read_field(j, "grid_r_max", c.grid_r_max);
  read_field(j, "grid_angles", c.grid_angles);
  read_field(j, "refine_rounds", c.refine_rounds);
  read_field(j, "n_max", c.n_max);
  read_field(j, "stop_tol", c.stop_tol);
  read_field(j, "seed", c.seed);
  read_field(j, "out_dir", c.out_dir);
  read_field(j, "only", c.only);
  validate_config(c);
  return c;
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path + ": " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based position of the failure
    std::size_t line = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    fail(path + ":" + std::to_string(line) + ": " + e.what());
  }
}

void save_json(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path + ": " + std::strerror(errno));
  out << j.dump(2) << '\n';
  if (!out) fail(path + ": write failed");
}

RunConfig load_config(const std::string& path) {
  try {
    return config_from_json(load_json(path));
  } catch (const InvalidArgument& e) {
    if (std::string(e.what()).rfind(path, 0) == 0) throw;
    fail(path + ": " + e.what());
  }
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path + ": " + std::strerror(errno));
  auto put = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << cells[i];
    }
    out << '\n';
  };
  put(header);
  for (const auto& row : rows) {
    if (row.size() != header.size())
      fail(path + ": row with " + std::to_string(row.size()) + " cells under a " +
           std::to_string(header.size()) + "-column header");
    put(row);
  }
  if (!out) fail(path + ": write failed");
}

}  // namespace ctm
