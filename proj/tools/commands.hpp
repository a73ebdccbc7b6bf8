#pragma once

// Command implementations behind the surfrep executable.  Every command returns a
// report with a fixed field order and the exit code implied by its checks.

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace surfrep::cli {

enum ExitCode : int { kOk = 0, kInvariantFailure = 2, kInputError = 3, kNonConvergence = 4 };

struct CommandResult {
  Json report;
  int exit_code = kOk;
};

CommandResult cmd_fox(const std::string& word, std::optional<int> n);
CommandResult cmd_cohomology(const JobConfig& cfg);
CommandResult cmd_cone_span(const JobConfig& cfg);
CommandResult cmd_stratify(const JobConfig& cfg);
CommandResult cmd_reduction(const std::string& model, int samples, std::uint64_t seed);
CommandResult cmd_holonomy_check(const JobConfig& cfg);
CommandResult cmd_genus2_su2_report(std::uint64_t seed, int samples, const Tolerances& tol = {});

/// q(u) at a central genus-2 SU2 point against a1 x b1 + a2 x b2, over random cocycles.
struct ObstructionCrossCheck {
  int directions = 0;
  double constant = 0.0;
  double max_relative_error = 0.0;
  double max_homogeneity_error = 0.0;
};
ObstructionCrossCheck obstruction_cross_check(const RepPoint& central, int directions, std::uint64_t seed);

/// Plain-text rendering of a report.
std::string render_table(const Json& report);

/// Full command line (without the program name).  Writes the report to out and
/// diagnostics to err; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace surfrep::cli
