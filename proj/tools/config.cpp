#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "surfrep/errors.hpp"

namespace surfrep::cli {

namespace {

template <typename T>
T field(const Json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("config field '") + key + "' has the wrong type");
  }
}

/// Splits "name:[a,b,c]" or "name:value".
std::pair<std::string, std::string> split_source(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError("representation source '" + text + "' lacks a ':'");
  return {text.substr(0, colon), text.substr(colon + 1)};
}

std::vector<std::string> bracket_items(const std::string& body) {
  std::string inner = body;
  if (inner.size() < 2 || inner.front() != '[' || inner.back() != ']')
    throw InputError("expected a bracketed list, got '" + body + "'");
  inner = inner.substr(1, inner.size() - 2);
  std::vector<std::string> items;
  std::stringstream ss(inner);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto first = item.find_first_not_of(' ');
    const auto last = item.find_last_not_of(' ');
    if (first == std::string::npos) throw InputError("empty item in list '" + body + "'");
    items.push_back(item.substr(first, last - first + 1));
  }
  return items;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InputError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw InputError("not a number: '" + s + "'");
  return v;
}

std::complex<double> entry(const Json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw InputError("matrix entries must be numbers or [re, im] pairs");
}

GroupElement matrix_from_json(const Json& m, int dim) {
  if (!m.is_array() || static_cast<int>(m.size()) != dim) throw InputError("matrix must have " + std::to_string(dim) + " rows");
  GroupElement out(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const Json& row = m[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != dim)
      throw InputError("matrix rows must have " + std::to_string(dim) + " entries");
    for (int j = 0; j < dim; ++j) out(i, j) = entry(row[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace

void validate(const JobConfig& cfg) {
  if (!(cfg.tol.rank_tol > 0 && cfg.tol.defect_tol > 0 && cfg.tol.fd_step > 0))
    throw InputError("tolerances must be positive");
  if (cfg.genus < 1) throw InputError("genus must be >= 1");
  if (cfg.samples < 1) throw InputError("samples must be >= 1");
}

JobConfig config_from_json(const Json& doc) {
  if (!doc.is_object()) throw InputError("config must be a JSON object");
  JobConfig cfg;
  cfg.document = doc;
  cfg.group = field<std::string>(doc, "group", cfg.group);
  cfg.genus = field<int>(doc, "genus", cfg.genus);
  cfg.central = field<std::string>(doc, "central", cfg.central);
  if (doc.contains("rep")) cfg.rep = doc.at("rep");
  cfg.seed = field<std::uint64_t>(doc, "seed", cfg.seed);
  cfg.samples = field<int>(doc, "samples", cfg.samples);
  if (doc.contains("tolerances")) {
    const Json& t = doc.at("tolerances");
    if (!t.is_object()) throw InputError("config field 'tolerances' must be an object");
    cfg.tol.rank_tol = field<double>(t, "rank_tol", cfg.tol.rank_tol);
    cfg.tol.defect_tol = field<double>(t, "defect_tol", cfg.tol.defect_tol);
    cfg.tol.fd_step = field<double>(t, "fd_step", cfg.tol.fd_step);
  }
  validate(cfg);
  return cfg;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

std::string describe_rep_source(const Json& source) {
  if (source.is_string()) return source.get<std::string>();
  return "matrices";
}

RepPoint resolve_rep(const Json& source, const Presentation& pres, const LieGroupModel& group, const BundleClass& c) {
  const int n = pres.generator_count();
  if (source.is_array()) {
    if (static_cast<int>(source.size()) != n)
      throw InputError("expected " + std::to_string(n) + " matrices, got " + std::to_string(source.size()));
    std::vector<GroupElement> values;
    for (const Json& m : source) values.push_back(matrix_from_json(m, group.matrix_dim()));
    return RepPoint(group, std::move(values));
  }
  if (!source.is_string()) throw InputError("representation source must be a string or a list of matrices");
  const auto [kind, body] = split_source(source.get<std::string>());
  if (kind == "central") {
    const auto signs = bracket_items(body);
    if (static_cast<int>(signs.size()) != n) throw InputError("central source needs " + std::to_string(n) + " signs");
    return central_rep(group, signs);
  }
  if (kind == "torus") {
    std::vector<double> angles;
    for (const auto& s : bracket_items(body)) angles.push_back(to_double(s));
    if (static_cast<int>(angles.size()) != n) throw InputError("torus source needs " + std::to_string(n) + " angles");
    return torus_rep(group, angles);
  }
  if (kind == "random") {
    std::uint64_t seed = 0;
    try {
      std::size_t used = 0;
      seed = std::stoull(body, &used);
      if (used != body.size()) throw InputError("");
    } catch (const std::exception&) {
      throw InputError("random source needs an integer seed, got '" + body + "'");
    }
    return random_solution(pres, group, c, seed);
  }
  throw InputError("unknown representation source '" + kind + "'");
}

PathConnection connection_from_json(const LieGroupModel& group, const Json& grid, double b) {
  if (!grid.is_array()) throw InputError("grid must be a list of [t, coords...] rows");
  const int dim = group.algebra_dim();
  std::vector<double> nodes;
  RealMatrix values(static_cast<Eigen::Index>(grid.size()), dim);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Json& row = grid[k];
    if (!row.is_array() || static_cast<int>(row.size()) != dim + 1)
      throw InputError("grid rows must hold t followed by " + std::to_string(dim) + " coordinates");
    for (const Json& e : row)
      if (!e.is_number()) throw InputError("grid entries must be numbers");
    nodes.push_back(row[0].get<double>());
    for (int i = 0; i < dim; ++i) values(static_cast<Eigen::Index>(k), i) = row[static_cast<std::size_t>(i + 1)].get<double>();
  }
  if (nodes.empty() || std::abs(nodes.back() - b) > 1e-12 * std::max(1.0, b))
    throw InputError("grid must end at t = b");
  return PathConnection(group, std::move(nodes), std::move(values));
}

}  // namespace surfrep::cli
