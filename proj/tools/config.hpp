#pragma once

// Job configuration documents and their translation into library objects.

#include <cstdint>
#include <string>

#include "json.hpp"
#include "surfrep/holonomy.hpp"
#include "surfrep/rep_cohomology.hpp"

namespace surfrep::cli {

using Json = nlohmann::ordered_json;

struct Tolerances {
  double rank_tol = 1e-8;
  double defect_tol = 1e-9;
  double fd_step = 1e-4;
};

struct JobConfig {
  std::string group = "SU2";
  int genus = 2;
  std::string central = "+I";
  /// Representation source: "central:[+,-,...]", "torus:[t1,...]", "random:<seed>",
  /// or an array of matrices (rows of numbers or [re, im] pairs).
  Json rep = "random:1";
  Tolerances tol;
  std::uint64_t seed = 1;
  int samples = 200;
  /// The full document, for command-specific fields (reps, b, grid, variation).
  Json document = Json::object();
};

/// Throws InputError on malformed JSON, unknown field types or invalid values.
JobConfig config_from_json(const Json& doc);
JobConfig load_config(const std::string& path);
void validate(const JobConfig& cfg);

/// Human-readable echo of a representation source.
std::string describe_rep_source(const Json& source);

RepPoint resolve_rep(const Json& source, const Presentation& pres, const LieGroupModel& group, const BundleClass& c);

/// {group, b, grid: [[t, coords...], ...]} plus a variation array of the same shape.
PathConnection connection_from_json(const LieGroupModel& group, const Json& grid, double b);

}  // namespace surfrep::cli
