#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

namespace slicescale::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInput = 1,       // I/O or validation
  kExitInfeasible = 2,  // not scalable; witness in the report
  kExitNumerical = 3,   // overflow, divergence, or no convergence
};

enum class TraceLevel { none, summary, full };

struct RunConfig {
  std::string command;
  std::string input;
  std::optional<std::string> targets;  // inline JSON or a path
  double tol = 1e-10;
  std::size_t max_iters = 10000;
  std::uint64_t seed = 0;
  TraceLevel trace = TraceLevel::summary;
  double divergence_guard = 1e3;
  std::string output;  // empty: stdout

  bool force = false;         // scale: skip the feasibility check
  bool random_start = false;  // scale: seeded start instead of x0 = 0
  bool stochastic = false;    // bridge: c = 1

  // demo-quadratic
  std::size_t dimension = 3;
  bool diagonal = false;

  // Throws Error unless tol > 0 and max_iters >= 1.
  void validate() const;
};

// Each command writes a JSON report to `out` (or config.output) and returns
// an ExitCode. Validation and I/O failures go to `err` with exit 1.
int cmd_scale(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_feasible(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_bridge(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_demo_quadratic(const RunConfig& config, std::ostream& out, std::ostream& err);

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

// Routes logging to stderr; level from SLICESCALE_LOG
// (trace|debug|info|warn|error|off, default warn).
void configure_logging();

}  // namespace slicescale::cli
