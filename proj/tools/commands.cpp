#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "CLI11.hpp"
#include "surfrep/errors.hpp"
#include "surfrep/free_words.hpp"
#include "surfrep/reduction_models.hpp"

namespace surfrep::cli {

namespace {

class Checks {
 public:
  void add(const std::string& name, bool passed, Json value, Json expected) {
    Json c;
    c["name"] = name;
    c["passed"] = passed;
    c["value"] = std::move(value);
    c["expected"] = std::move(expected);
    items_.push_back(std::move(c));
    ok_ = ok_ && passed;
  }
  void at_most(const std::string& name, double value, double bound) {
    add(name, std::isfinite(value) && value <= bound, value, "<= " + format(bound));
  }
  void at_least(const std::string& name, double value, double bound) {
    add(name, value >= bound, value, ">= " + format(bound));
  }
  void equal(const std::string& name, const Json& value, const Json& expected) {
    add(name, value == expected, value, expected);
  }
  bool ok() const { return ok_; }
  const Json& json() const { return items_; }

  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
  }

 private:
  Json items_ = Json::array();
  bool ok_ = true;
};

Json tolerances_json(const Tolerances& t) {
  Json j;
  j["rank_tol"] = t.rank_tol;
  j["defect_tol"] = t.defect_tol;
  j["fd_step"] = t.fd_step;
  return j;
}

CommandResult finish(const std::string& command, Json input, Json result, const Checks& checks) {
  Json r;
  r["command"] = command;
  r["input"] = std::move(input);
  r["result"] = std::move(result);
  r["checks"] = checks.json();
  r["status"] = checks.ok() ? "ok" : "failed";
  return {std::move(r), checks.ok() ? kOk : kInvariantFailure};
}

Json input_json(const JobConfig& cfg) {
  Json j;
  j["group"] = cfg.group;
  j["genus"] = cfg.genus;
  j["central"] = cfg.central;
  j["rep"] = describe_rep_source(cfg.rep);
  j["seed"] = cfg.seed;
  j["samples"] = cfg.samples;
  j["tolerances"] = tolerances_json(cfg.tol);
  return j;
}

struct Setting {
  LieGroupModel group;
  Presentation pres;
  BundleClass c;
};

Setting make_setting(const JobConfig& cfg) {
  LieGroupModel group = LieGroupModel::parse(cfg.group);
  Presentation pres = surface_presentation(cfg.genus);
  BundleClass c = BundleClass::make(group, group.central_element(cfg.central));
  return {std::move(group), std::move(pres), std::move(c)};
}

RankTolerance rank_tolerance(const Tolerances& t) { return {t.rank_tol, 1.0}; }

Json to_list(const RealVector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json dims_json(const std::array<int, 3>& h) { return Json::array({h[0], h[1], h[2]}); }

struct StratumInfo {
  OrbitType orbit;
  int fixed_subspace_dim = 0;
};

StratumInfo stratum_of(const Presentation& pres, const RepPoint& rep) {
  const auto stabilizer = stabilizer_generators(rep);
  return {classify_orbit_type(rep), stabilizer_fixed_subspace(pres, rep, stabilizer)};
}

Json stratum_json(const StratumInfo& s) {
  Json j;
  j["label"] = s.orbit.label;
  j["stabilizer_dim"] = s.orbit.stabilizer_dim;
  j["fixed_subspace_dim"] = s.fixed_subspace_dim;
  return j;
}

/// Complex, stratum and duality checks at one representation.  Invariants are
/// skipped (and the on-variety check fails) when the relator defect is too large.
Json analyze_rep(const Setting& s, const RepPoint& rep, const Tolerances& tol, Checks& checks, const std::string& tag) {
  const std::string prefix = tag.empty() ? "" : tag + ".";
  const double defect = relator_defect(s.pres, rep, s.c);
  const bool on_variety = defect <= tol.defect_tol;
  Json j;
  j["relator_defect"] = defect;
  j["on_variety"] = on_variety;
  checks.at_most(prefix + "relator_defect", defect, tol.defect_tol);
  if (!on_variety) return j;

  const CochainData cx = build_complex(s.pres, rep, rank_tolerance(tol));
  const int g = *s.pres.genus();
  const int dim = s.group.algebra_dim();
  j["h_dims"] = dims_json(cx.h_dims);
  j["euler_characteristic"] = cx.euler_characteristic();
  j["cochain_defect"] = cx.cochain_defect();
  j["stratum"] = stratum_json(stratum_of(s.pres, rep));
  checks.equal(prefix + "duality_h0_h2", cx.h_dims[2], cx.h_dims[0]);
  checks.equal(prefix + "euler_h1", cx.h_dims[1], 2 * cx.h_dims[0] + (2 * g - 2) * dim);
  return j;
}

Json cone_json(const ConeSampleResult& r, const CochainData& cx) {
  Json j;
  j["attempts"] = r.attempts;
  j["failures"] = r.failures;
  j["success_rate"] = r.success_rate();
  j["dim_z1"] = static_cast<int>(cx.basis_z1.cols());
  j["span_dim_z1"] = r.span_dim_z1;
  j["h1"] = cx.h_dims[1];
  j["span_dim_h1"] = r.span_dim_h1;
  j["max_seed_obstruction"] = r.max_seed_obstruction;
  j["max_direction_deviation"] = r.max_direction_deviation;
  return j;
}

void cone_checks(const ConeSampleResult& r, const CochainData& cx, Checks& checks, const std::string& prefix) {
  checks.equal(prefix + "span_dim_h1", r.span_dim_h1, cx.h_dims[1]);
  checks.equal(prefix + "span_dim_z1", r.span_dim_z1, static_cast<int>(cx.basis_z1.cols()));
  checks.at_least(prefix + "newton_success_rate", r.success_rate(), 0.95);
  checks.at_most(prefix + "max_seed_obstruction", r.max_seed_obstruction, 1e-8);
}

Json summary_json(const ReductionSummary& s) {
  Json j;
  j["model"] = s.model;
  j["samples"] = s.samples;
  j["zariski_dim"] = s.zariski_dim;
  j["relation_residual_max"] = s.relation_residual_max;
  j["momentum_residual_max"] = s.momentum_residual_max;
  Json hist = Json::object();
  for (const auto& [k, v] : s.stratum_histogram) hist[k] = v;
  j["stratum_histogram"] = hist;
  return j;
}

int expected_zariski_dim(const LinearMomentumModel& m) { return m.kind() == ReductionModelKind::SO2 ? 3 : 10; }

Json spanning_configurations_json(Checks& checks, const std::string& prefix) {
  const LinearMomentumModel so3 = LinearMomentumModel::so3();
  const auto configs = spanning_vectors_8_5();
  RealMatrix images(so3.invariant_count(), static_cast<Eigen::Index>(configs.size()));
  double max_momentum = 0.0;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    max_momentum = std::max(max_momentum, so3.momentum(configs[k]).norm());
    images.col(static_cast<Eigen::Index>(k)) = hilbert_map(so3, configs[k]).coords;
  }
  const int rank = numerical_rank(images, {1e-8, 0.0});
  Json j;
  j["count"] = static_cast<int>(configs.size());
  j["max_momentum"] = max_momentum;
  j["image_rank"] = rank;
  checks.equal(prefix + "configuration_count", static_cast<int>(configs.size()), 10);
  checks.at_most(prefix + "configuration_momentum", max_momentum, 1e-12);
  checks.equal(prefix + "configuration_image_rank", rank, 10);
  return j;
}

std::vector<double> refinement_orders(const PathConnection& conn, const Variation& var) {
  const AlgebraVector reference = holonomy_derivative(conn, var, {512, 0.0});
  std::vector<double> errors;
  for (int n : {4, 8, 16, 32}) errors.push_back((holonomy_derivative(conn, var, {n, 0.0}) - reference).norm());
  std::vector<double> orders;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k)
    if (errors[k + 1] > 1e-12) orders.push_back(std::log2(errors[k] / errors[k + 1]));
  return orders;
}

/// Default representatives of the three strata on a genus-g surface.
std::vector<Json> default_strata_sources(int genus, std::uint64_t seed) {
  std::string signs, angles;
  static const double base[] = {0.7, 1.1, 2.3, 0.4};
  for (int k = 0; k < 2 * genus; ++k) {
    signs += (k ? "," : "") + std::string("+");
    char buf[32];
    const double theta = k < 4 ? base[k] : 0.3 + 0.61 * k;
    std::snprintf(buf, sizeof buf, "%s%.2f", k ? "," : "", theta);
    angles += buf;
  }
  return {"central:[" + signs + "]", "torus:[" + angles + "]", "random:" + std::to_string(seed)};
}

Eigen::Vector3d cross3(const RealVector& a, const RealVector& b) {
  return Eigen::Vector3d(a(0), a(1), a(2)).cross(Eigen::Vector3d(b(0), b(1), b(2)));
}

}  // namespace

ObstructionCrossCheck obstruction_cross_check(const RepPoint& central, int directions, std::uint64_t seed) {
  const Presentation pres = surface_presentation(2);
  if (central.group().name() != "SU2" || central.size() != 4)
    throw InputError("obstruction cross-check needs a genus-2 SU2 representation");
  const ObstructionModel q(pres, central);
  if (q.complex().basis_h2.cols() != 3) throw InputError("obstruction cross-check needs a central representation");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  ObstructionCrossCheck out;
  out.directions = directions;
  bool first = true;
  for (int k = 0; k < directions; ++k) {
    RealVector u(12);
    for (Eigen::Index i = 0; i < 12; ++i) u(i) = normal(rng);
    const RealVector qu = q(u);
    const RealVector value = q.complex().basis_h2 * qu;
    const Eigen::Vector3d expected = cross3(u.segment(0, 3), u.segment(3, 3)) + cross3(u.segment(6, 3), u.segment(9, 3));
    if (first) {
      out.constant = value.dot(expected) / expected.squaredNorm();
      first = false;
    }
    out.max_relative_error =
        std::max(out.max_relative_error, (value - out.constant * expected).norm() / expected.norm());
    out.max_homogeneity_error =
        std::max(out.max_homogeneity_error, (q(2.0 * u) - 4.0 * qu).norm() / std::max(1.0, qu.norm()));
  }
  return out;
}

CommandResult cmd_fox(const std::string& text, std::optional<int> n) {
  const Word w = parse_word(text);
  const int count = n.value_or(std::max(1, w.max_generator()));
  if (count < 0) throw InputError("--n must be non-negative");
  if (count < w.max_generator())
    throw InputError("word uses x" + std::to_string(w.max_generator()) + " but --n is " + std::to_string(count));
  Json input;
  input["word"] = text;
  input["n"] = count;
  Json derivs = Json::array();
  for (int j = 1; j <= count; ++j) {
    Json d;
    d["generator"] = "x" + std::to_string(j);
    d["derivative"] = fox_derivative(w, j).to_string();
    derivs.push_back(std::move(d));
  }
  Json result;
  result["reduced_word"] = w.to_string();
  result["derivatives"] = std::move(derivs);
  Checks checks;
  checks.add("fox_identity", verify_fox_identity(w), verify_fox_identity(w), true);
  return finish("fox", std::move(input), std::move(result), checks);
}

CommandResult cmd_cohomology(const JobConfig& cfg) {
  const Setting s = make_setting(cfg);
  const RepPoint rep = resolve_rep(cfg.rep, s.pres, s.group, s.c);
  Checks checks;
  Json result = analyze_rep(s, rep, cfg.tol, checks, "");
  return finish("cohomology", input_json(cfg), std::move(result), checks);
}

CommandResult cmd_cone_span(const JobConfig& cfg) {
  const Setting s = make_setting(cfg);
  const RepPoint rep = resolve_rep(cfg.rep, s.pres, s.group, s.c);
  Checks checks;
  const double defect = relator_defect(s.pres, rep, s.c);
  checks.at_most("relator_defect", defect, cfg.tol.defect_tol);
  Json result;
  result["relator_defect"] = defect;
  if (checks.ok()) {
    const CochainData cx = build_complex(s.pres, rep, rank_tolerance(cfg.tol));
    const ConeSampleResult r = sample_cone_directions(s.pres, rep, s.c, cfg.samples, cfg.seed);
    result["cone"] = cone_json(r, cx);
    cone_checks(r, cx, checks, "");
  }
  return finish("cone-span", input_json(cfg), std::move(result), checks);
}

CommandResult cmd_stratify(const JobConfig& cfg) {
  const Setting s = make_setting(cfg);
  std::vector<Json> sources;
  if (cfg.document.contains("reps")) {
    const Json& reps = cfg.document.at("reps");
    if (!reps.is_array() || reps.empty()) throw InputError("config field 'reps' must be a non-empty list");
    for (const Json& r : reps) sources.push_back(r);
  } else if (cfg.document.contains("rep")) {
    sources.push_back(cfg.rep);
  } else {
    sources = default_strata_sources(cfg.genus, cfg.seed);
  }
  Checks checks;
  Json result;
  if (s.group.center_elements()) result["central_points"] = static_cast<int>(enumerate_central_reps(s.pres, s.group, s.c).size());
  Json points = Json::array();
  for (std::size_t k = 0; k < sources.size(); ++k) {
    const RepPoint rep = resolve_rep(sources[k], s.pres, s.group, s.c);
    Json p;
    p["rep"] = describe_rep_source(sources[k]);
    p.update(analyze_rep(s, rep, cfg.tol, checks, "rep" + std::to_string(k)));
    points.push_back(std::move(p));
  }
  result["points"] = std::move(points);
  Json input = input_json(cfg);
  input.erase("rep");
  return finish("stratify", std::move(input), std::move(result), checks);
}

CommandResult cmd_reduction(const std::string& name, int samples, std::uint64_t seed) {
  const LinearMomentumModel model = LinearMomentumModel::parse(name);
  const ReductionSummary summary = summarize_reduction(model, samples, seed);
  Checks checks;
  checks.equal("zariski_dim", summary.zariski_dim, expected_zariski_dim(model));
  checks.at_most("relation_residual_max", summary.relation_residual_max, 1e-9);
  checks.at_most("momentum_residual_max", summary.momentum_residual_max, 1e-9);
  Json result = summary_json(summary);
  if (model.kind() == ReductionModelKind::SO3) result["spanning_configurations"] = spanning_configurations_json(checks, "");
  Json input;
  input["model"] = name;
  input["samples"] = samples;
  input["seed"] = seed;
  return finish("reduction", std::move(input), std::move(result), checks);
}

CommandResult cmd_holonomy_check(const JobConfig& cfg) {
  const Json& doc = cfg.document;
  for (const char* key : {"b", "grid", "variation"})
    if (!doc.contains(key)) throw InputError(std::string("holonomy config lacks '") + key + "'");
  if (!doc.at("b").is_number()) throw InputError("config field 'b' must be a number");
  const LieGroupModel group = LieGroupModel::parse(cfg.group);
  const double b = doc.at("b").get<double>();
  const PathConnection conn = connection_from_json(group, doc.at("grid"), b);
  const Variation var = connection_from_json(group, doc.at("variation"), b);
  if (var.nodes() != conn.nodes()) throw InputError("variation must use the connection's grid");

  const TransportOptions fixed{64, 0.0};
  const GroupElement hol = holonomy(conn);
  const AlgebraVector derivative = holonomy_derivative(conn, var);
  const double fd_error =
      (holonomy_derivative(conn, var, fixed) - finite_difference_holonomy_derivative(conn, var, cfg.tol.fd_step, fixed))
          .lpNorm<Eigen::Infinity>();
  double conjugation = 0.0;
  Rng rng(cfg.seed);
  for (int k = 0; k < 5; ++k) conjugation = std::max(conjugation, conjugation_invariance_check(conn, group.random_element(rng)));
  const auto orders = refinement_orders(conn, var);
  const double min_order = orders.empty() ? 0.0 : *std::min_element(orders.begin(), orders.end());

  Json result;
  result["holonomy_log"] = to_list(group.log(hol));
  result["derivative"] = to_list(derivative);
  result["group_drift"] = group.group_residual(hol);
  result["fd_error"] = fd_error;
  result["conjugation_residual"] = conjugation;
  result["refinement_orders"] = orders;
  Checks checks;
  checks.at_most("group_drift", group.group_residual(hol), 1e-10);
  checks.at_most("fd_error", fd_error, 1e-6);
  checks.at_most("conjugation_residual", conjugation, 1e-9);
  if (!orders.empty()) checks.at_least("refinement_order", min_order, 3.5);

  Json input;
  input["group"] = cfg.group;
  input["b"] = b;
  input["grid_nodes"] = static_cast<int>(conn.nodes().size());
  input["seed"] = cfg.seed;
  input["tolerances"] = tolerances_json(cfg.tol);
  return finish("holonomy-check", std::move(input), std::move(result), checks);
}

CommandResult cmd_genus2_su2_report(std::uint64_t seed, int samples, const Tolerances& tol) {
  JobConfig cfg;
  cfg.seed = seed;
  cfg.samples = samples;
  cfg.tol = tol;
  validate(cfg);
  const Setting s = make_setting(cfg);
  Checks checks;
  Json result;

  const int central_count = static_cast<int>(enumerate_central_reps(s.pres, s.group, s.c).size());
  result["central_points"] = central_count;
  checks.equal("central_points", central_count, 16);

  const LinearMomentumModel so3 = LinearMomentumModel::so3();
  const LinearMomentumModel so2 = LinearMomentumModel::so2();
  const ReductionSummary so3_summary = summarize_reduction(so3, samples, seed);
  const ReductionSummary so2_summary = summarize_reduction(so2, samples, seed);
  const ConeModelReport middle = so2_cone_model_report(4, samples, seed);

  struct Expected {
    const char* name;
    std::array<int, 3> h;
    const char* label;
    int fixed;
    int zariski;
  };
  const std::vector<Json> sources = default_strata_sources(2, seed);
  const Expected expected[] = {{"central", {3, 12, 3}, "G", 0, 10},
                               {"torus", {1, 8, 1}, "(T)", 4, 7},
                               {"irreducible", {0, 6, 0}, "Z", 6, 6}};
  Json strata = Json::array();
  for (std::size_t k = 0; k < 3; ++k) {
    const Expected& e = expected[k];
    const std::string p = std::string(e.name) + ".";
    const RepPoint rep = resolve_rep(sources[k], s.pres, s.group, s.c);
    const double defect = relator_defect(s.pres, rep, s.c);
    checks.at_most(p + "relator_defect", defect, tol.defect_tol);
    const CochainData cx = build_complex(s.pres, rep, rank_tolerance(tol));
    const StratumInfo info = stratum_of(s.pres, rep);
    const ConeSampleResult cone = sample_cone_directions(s.pres, rep, s.c, samples, seed);
    const int zariski = k == 0 ? so3_summary.zariski_dim : (k == 1 ? middle.total_dim : cone.span_dim_h1);

    Json j;
    j["stratum"] = e.name;
    j["rep"] = describe_rep_source(sources[k]);
    j["relator_defect"] = defect;
    j["h_dims"] = dims_json(cx.h_dims);
    j["orbit_type"] = stratum_json(info);
    j["zariski_dim"] = zariski;
    j["cone"] = cone_json(cone, cx);
    strata.push_back(std::move(j));

    checks.equal(p + "h_dims", dims_json(cx.h_dims), dims_json(e.h));
    checks.equal(p + "orbit_type", info.orbit.label, e.label);
    checks.equal(p + "fixed_subspace_dim", info.fixed_subspace_dim, e.fixed);
    checks.equal(p + "zariski_dim", zariski, e.zariski);
    cone_checks(cone, cx, checks, p);
  }
  result["strata"] = std::move(strata);

  Json models;
  models["so3"] = summary_json(so3_summary);
  models["so3"]["spanning_configurations"] = spanning_configurations_json(checks, "so3.");
  models["so2"] = summary_json(so2_summary);
  Json mid;
  mid["smooth_factor_dim"] = middle.smooth_factor_dim;
  mid["cone_dim"] = middle.cone_dim;
  mid["total_dim"] = middle.total_dim;
  mid["max_relation_residual"] = middle.max_relation_residual;
  models["middle_stratum"] = std::move(mid);
  result["models"] = std::move(models);
  checks.equal("so3.zariski_dim", so3_summary.zariski_dim, 10);
  checks.at_most("so3.relation_residual_max", so3_summary.relation_residual_max, 1e-9);
  checks.equal("so2.zariski_dim", so2_summary.zariski_dim, 3);
  checks.at_most("so2.relation_residual_max", so2_summary.relation_residual_max, 1e-9);
  checks.at_most("middle_stratum.relation_residual", middle.max_relation_residual, 1e-9);

  const RepPoint central = resolve_rep(sources[0], s.pres, s.group, s.c);
  const ObstructionCrossCheck ob = obstruction_cross_check(central, 100, seed);
  const RepPoint irreducible = resolve_rep(sources[2], s.pres, s.group, s.c);
  const int irreducible_h2 = build_complex(s.pres, irreducible, rank_tolerance(tol)).h_dims[2];
  Json obstruction;
  obstruction["rep"] = describe_rep_source(sources[0]);
  obstruction["directions"] = ob.directions;
  obstruction["constant"] = ob.constant;
  obstruction["max_relative_error"] = ob.max_relative_error;
  obstruction["max_homogeneity_error"] = ob.max_homogeneity_error;
  obstruction["irreducible_h2_dim"] = irreducible_h2;
  result["obstruction"] = std::move(obstruction);
  checks.at_most("obstruction.relative_error", ob.max_relative_error, 1e-8);
  checks.at_most("obstruction.homogeneity", ob.max_homogeneity_error, 1e-9);
  checks.equal("obstruction.irreducible_h2_dim", irreducible_h2, 0);

  Json input;
  input["group"] = "SU2";
  input["genus"] = 2;
  input["central"] = "+I";
  input["seed"] = seed;
  input["samples"] = samples;
  input["tolerances"] = tolerances_json(tol);
  return finish("genus2-su2-report", std::move(input), std::move(result), checks);
}

// ---------------------------------------------------------------------------

namespace {

void flatten(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(j[k], prefix + "[" + std::to_string(k) + "]", out);
  } else {
    std::string text;
    if (j.is_number_float()) {
      text = Checks::format(j.get<double>());
    } else if (j.is_string()) {
      text = j.get<std::string>();
    } else {
      text = j.dump();
    }
    char line[512];
    std::snprintf(line, sizeof line, "  %-44s %s\n", prefix.c_str(), text.c_str());
    out << line;
  }
}

}  // namespace

std::string render_table(const Json& report) {
  std::ostringstream out;
  out << "command: " << report.value("command", "") << "\n\ninput\n";
  flatten(report.at("input"), "", out);
  out << "\nresult\n";
  flatten(report.at("result"), "", out);
  out << "\nchecks\n";
  for (const Json& c : report.at("checks")) {
    std::string value = c.at("value").is_number_float() ? Checks::format(c.at("value").get<double>()) : c.at("value").dump();
    const std::string expected = c.at("expected").is_string() ? c.at("expected").get<std::string>() : c.at("expected").dump();
    char line[512];
    std::snprintf(line, sizeof line, "  %-4s %-40s %-24s %s\n", c.at("passed").get<bool>() ? "PASS" : "FAIL",
                  c.at("name").get<std::string>().c_str(), value.c_str(), expected.c_str());
    out << line;
  }
  out << "\nstatus: " << report.value("status", "") << "\n";
  if (report.contains("wall_time_s")) out << "wall time: " << Checks::format(report.at("wall_time_s").get<double>()) << " s\n";
  return out.str();
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deformation complexes, obstruction cones and local models for surface-group representations"};
  app.name("surfrep");
  app.require_subcommand(1);

  struct Options {
    std::string config;
    std::uint64_t seed = 1;
    int samples = 200;
    double tol_rank = 1e-8;
    double tol_defect = 1e-9;
    bool json = false;
    bool timing = false;
    std::string rep, group, central;
    int genus = 2;
    std::string word, model;
    int n = 0;
  } o;

  std::vector<CLI::Option*> overrides;
  auto add_output = [&](CLI::App* sub) {
    sub->add_flag("--json", o.json, "Print the JSON report instead of the table");
    sub->add_flag("--timing", o.timing, "Include wall time in the report");
  };
  auto add_job = [&](CLI::App* sub, bool rep_options) {
    add_output(sub);
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--seed", o.seed, "Random seed");
    sub->add_option("--samples", o.samples, "Sample count");
    sub->add_option("--tol-rank", o.tol_rank, "Relative rank tolerance");
    sub->add_option("--tol-defect", o.tol_defect, "Relator defect tolerance");
    if (rep_options) {
      sub->add_option("--rep", o.rep, "Representation source (central:[..], torus:[..], random:<seed>)");
      sub->add_option("--group", o.group, "Group (SU2, SO3, U1, SU2xU1)");
      sub->add_option("--genus", o.genus, "Surface genus");
      sub->add_option("--central", o.central, "Central value of the relator (+I or -I)");
    }
  };

  auto* fox = app.add_subcommand("fox", "Fox derivatives of a word");
  fox->add_option("word", o.word, "Word such as x1*x2*x1^-1*x2^-1")->required();
  auto* fox_n = fox->add_option("--n", o.n, "Number of generators");
  add_output(fox);
  auto* cohomology = app.add_subcommand("cohomology", "Twisted cohomology at a representation");
  add_job(cohomology, true);
  auto* cone = app.add_subcommand("cone-span", "Tangent directions harvested from the variety");
  add_job(cone, true);
  auto* stratify = app.add_subcommand("stratify", "Orbit types of representations");
  add_job(stratify, true);
  auto* report = app.add_subcommand("genus2-su2-report", "Genus-2 SU(2) local structure report");
  add_job(report, false);
  auto* reduction = app.add_subcommand("reduction", "Linear momentum-map models");
  reduction->add_option("model", o.model, "so2 or so3")->required()->check(CLI::IsMember({"so2", "so3"}));
  add_job(reduction, false);
  auto* holo = app.add_subcommand("holonomy-check", "Holonomy and its derivative along a path");
  add_job(holo, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kInputError;
  }

  const auto started = std::chrono::steady_clock::now();
  CommandResult result;
  try {
    CLI::App* sub = app.get_subcommands().front();
    auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
    auto job = [&] {
      JobConfig cfg = o.config.empty() ? JobConfig{} : load_config(o.config);
      if (given("--seed")) cfg.seed = o.seed;
      if (given("--samples")) cfg.samples = o.samples;
      if (given("--tol-rank")) cfg.tol.rank_tol = o.tol_rank;
      if (given("--tol-defect")) cfg.tol.defect_tol = o.tol_defect;
      if (given("--rep")) {
        cfg.rep = o.rep;
        cfg.document["rep"] = o.rep;
        cfg.document.erase("reps");
      }
      if (given("--group")) cfg.group = o.group;
      if (given("--genus")) cfg.genus = o.genus;
      if (given("--central")) cfg.central = o.central;
      validate(cfg);
      return cfg;
    };
    if (sub == fox) {
      result = cmd_fox(o.word, fox_n->count() ? std::optional<int>(o.n) : std::nullopt);
    } else if (sub == cohomology) {
      result = cmd_cohomology(job());
    } else if (sub == cone) {
      result = cmd_cone_span(job());
    } else if (sub == stratify) {
      result = cmd_stratify(job());
    } else if (sub == report) {
      const JobConfig cfg = job();
      result = cmd_genus2_su2_report(cfg.seed, cfg.samples, cfg.tol);
    } else if (sub == reduction) {
      const JobConfig cfg = job();
      result = cmd_reduction(o.model, cfg.samples, cfg.seed);
    } else {
      result = cmd_holonomy_check(job());
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ConvergenceError& e) {
    err << "error: numerical non-convergence: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const DomainError& e) {
    err << "error: numerical failure: " << e.what() << "\n";
    return kNonConvergence;
  }

  if (o.timing)
    result.report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (o.json) {
    out << result.report.dump(2) << "\n";
  } else {
    out << render_table(result.report);
  }
  if (result.exit_code != kOk) {
    for (const Json& c : result.report.at("checks"))
      if (!c.at("passed").get<bool>()) err << "check failed: " << c.at("name").get<std::string>() << "\n";
  }
  return result.exit_code;
}

}  // namespace surfrep::cli
