#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace ctm {

struct VerifyOptions {
  int quad_degree = 50;
  std::uint64_t seed = 42;
  std::string only;  // empty runs every group; else one group name
};

// One row of the verification suite.  `measured` is the worst observed value
// for the quantity the check bounds, compared against the pinned `tolerance`.
// Informational rows (gating = false) report their findings in `detail` and
// never fail a run.
struct CheckResult {
  int id = 0;
  std::string name;
  std::string group;  // algebra | basis | kernels | tm | afd | boundary | runtime
  bool gating = true;
  bool passed = false;
  double measured = 0.0;
  double tolerance = 0.0;
  double seconds = 0.0;
  std::string detail;
};

// Runs the suite (or the `only` group).  Deterministic for a fixed seed.
// Throws InvalidArgument for an unknown group name.
std::vector<CheckResult> run_verification(const VerifyOptions& opt = {});

// true iff every gating check passed
bool verification_passed(const std::vector<CheckResult>& checks);

nlohmann::json verification_report(const std::vector<CheckResult>& checks);

}  // namespace ctm
