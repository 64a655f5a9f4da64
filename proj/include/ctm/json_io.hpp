#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctm/clifford.hpp"
#include "ctm/kernels.hpp"

namespace ctm {

// Batch-run parameters shared by the command-line front end and the
// verification suite.  Everything an invocation needs is representable here,
// so a saved config reproduces a run exactly.
struct RunConfig {
  int m = 2;
  Domain domain = Domain::Ball;
  int quad_degree = 50;
  double grid_dr = 0.05;
  double grid_r_max = 0.95;
  std::vector<int> grid_angles;  // empty -> per-dimension defaults
  int refine_rounds = 2;
  int n_max = 10;
  double stop_tol = 1e-8;
  std::uint64_t seed = 42;
  std::string out_dir = ".";
  std::string only;  // verification: restrict to one check group

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// throws InvalidArgument naming the offending field
void validate_config(const RunConfig& c);

std::string domain_name(Domain d);
Domain domain_from_name(const std::string& s);

// Stable on-disk number format for CSV cells: 15 significant digits.
std::string format_number(double v);

nlohmann::json to_json(const Multivector& x);  // {"m":…, "coeffs":[2^m]}
nlohmann::json to_json(const Paravector& p);   // {"m":…, "x":[m+1]}
nlohmann::json to_json(const RunConfig& c);    // every field, fixed key set

Multivector multivector_from_json(const nlohmann::json& j);
Paravector paravector_from_json(const nlohmann::json& j);
// Missing keys keep their defaults (so partial configs merge over them);
// unknown keys are rejected.  The parsed config is validated.
RunConfig config_from_json(const nlohmann::json& j);

// File round-trips.  Parse failures surface as InvalidArgument carrying the
// path and the line of the offending byte; semantic failures carry the key.
nlohmann::json load_json(const std::string& path);
void save_json(const nlohmann::json& j, const std::string& path);
RunConfig load_config(const std::string& path);

// Comma-joined cells, one trailing newline per row; cells are written as
// given (numbers go through format_number at the call site).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace ctm
