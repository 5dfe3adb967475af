#include "geonet/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "geonet/version.hpp"

namespace geonet::io {
namespace {

const json& field(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.is_object()) throw SchemaError(where + ": expected an object");
  const auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(where + "." + key + ": missing");
  return *it;
}

double number_field(const json& value, const std::string& name) {
  if (!value.is_number()) throw SchemaError(name + ": expected a number");
  return value.get<double>();
}

std::size_t count_field(const json& value, const std::string& name) {
  if (!value.is_number_integer() || value.get<long long>() < 0) {
    throw SchemaError(name + ": expected a non-negative integer");
  }
  return value.get<std::size_t>();
}

std::string string_field(const json& value, const std::string& name) {
  if (!value.is_string()) throw SchemaError(name + ": expected a string");
  return value.get<std::string>();
}

std::vector<double> number_list(const json& value, const std::string& name) {
  if (!value.is_array()) throw SchemaError(name + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(number_field(value[i], name + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::string> string_list(const json& value, const std::string& name) {
  if (!value.is_array()) throw SchemaError(name + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(string_field(value[i], name + "[" + std::to_string(i) + "]"));
  }
  return out;
}

template <class F>
auto rethrow_as_schema(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

json tool_meta() { return {{"tool", "geonet"}, {"version", kVersion}}; }

json region_to_json(const Region& region) {
  return {{"width", region.width},
          {"height", region.height},
          {"boundary", std::string(to_string(region.boundary))}};
}

Region region_from_json(const json& doc, const std::string& where,
                        std::vector<std::string>* warnings) {
  const double w = number_field(field(doc, "width", where), where + ".width");
  const double h = number_field(field(doc, "height", where), where + ".height");
  Boundary b = Boundary::open_box;
  if (doc.contains("boundary")) {
    const std::string text = string_field(doc["boundary"], where + ".boundary");
    b = rethrow_as_schema(where + ".boundary", [&] { return parse_boundary(text); });
  } else if (warnings) {
    warnings->push_back(where + ".boundary missing; defaulting to open-box");
  }
  return rethrow_as_schema(where, [&] { return Region(w, h, b); });
}

json graph_to_json(const SpatialGraph& graph) {
  json pts = json::array();
  for (const Point& p : graph.points().coords) pts.push_back({p.x, p.y});
  return {{"region", region_to_json(graph.region())},
          {"radius", graph.radius()},
          {"points", std::move(pts)}};
}

SpatialGraph graph_from_json(const json& doc, std::vector<std::string>* warnings) {
  const Region region = region_from_json(field(doc, "region", "graph"), "region", warnings);
  const double radius = number_field(field(doc, "radius", "graph"), "radius");
  if (!(radius > 0.0)) throw SchemaError("radius: must be > 0");
  const json& pts = field(doc, "points", "graph");
  if (!pts.is_array()) throw SchemaError("points: expected an array");
  PointSet ps;
  ps.region = region;
  ps.coords.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string name = "points[" + std::to_string(i) + "]";
    const json& p = pts[i];
    if (!p.is_array() || p.size() != 2) throw SchemaError(name + ": expected [x, y]");
    const double x = number_field(p[0], name + "[0]");
    const double y = number_field(p[1], name + "[1]");
    if (!region.contains(x, y)) throw SchemaError(name + ": lies outside the region");
    ps.coords.push_back({x, y});
  }
  ps.intensity = static_cast<double>(ps.size()) / region.area();
  return build_graph(std::move(ps), radius);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": invalid JSON (" + e.what() + ")");
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

void save_graph(const SpatialGraph& graph, const std::string& path, const json& meta) {
  json doc = graph_to_json(graph);
  if (!meta.is_null()) doc["meta"] = meta;
  write_text_file(path, doc.dump() + "\n");
}

SpatialGraph load_graph(const std::string& path, std::vector<std::string>* warnings) {
  return graph_from_json(read_json_file(path), warnings);
}

json config_to_json(const ExperimentConfig& c) {
  json doc = {{"kind", std::string(to_string(c.kind))},
              {"region", region_to_json(c.region)},
              {"radius", c.radius},
              {"lambdas", c.lambdas},
              {"qs", c.qs},
              {"rules", c.rules},
              {"distributions", c.distributions},
              {"seeding", std::string(to_string(c.seeding))},
              {"trials", c.trials},
              {"base_seed", c.base_seed},
              {"tolerance", c.tolerance},
              {"lambda_c", c.constants.lambda_c},
              {"threads", c.threads}};
  doc["node_count"] = c.node_count ? json(*c.node_count) : json(nullptr);
  if (c.proxy.kind == PercolationProxy::Kind::crossing) {
    doc["proxy"] = {{"kind", "crossing"}};
  } else {
    doc["proxy"] = {{"kind", "giant-fraction"}, {"theta", c.proxy.theta}};
  }
  return doc;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("config: expected an object");
  static const std::set<std::string> known = {
      "kind",     "region",        "radius",  "lambdas", "node_count", "qs",
      "rules",    "distributions", "seeding", "trials",  "base_seed",  "proxy",
      "tolerance", "lambda_c",     "threads", "meta"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw SchemaError("config." + key + ": unknown field");
  }
  ExperimentConfig c;
  const std::string kind = string_field(field(doc, "kind", "config"), "config.kind");
  c.kind = rethrow_as_schema("config.kind", [&] { return parse_experiment_kind(kind); });
  if (doc.contains("region")) c.region = region_from_json(doc["region"], "config.region");
  if (doc.contains("radius")) c.radius = number_field(doc["radius"], "config.radius");
  if (doc.contains("lambdas")) c.lambdas = number_list(doc["lambdas"], "config.lambdas");
  if (doc.contains("node_count") && !doc["node_count"].is_null()) {
    c.node_count = count_field(doc["node_count"], "config.node_count");
  }
  if (doc.contains("qs")) c.qs = number_list(doc["qs"], "config.qs");
  if (doc.contains("rules")) c.rules = string_list(doc["rules"], "config.rules");
  if (doc.contains("distributions")) {
    c.distributions = string_list(doc["distributions"], "config.distributions");
  }
  if (doc.contains("seeding")) {
    const std::string s = string_field(doc["seeding"], "config.seeding");
    c.seeding = rethrow_as_schema("config.seeding", [&] { return parse_seeding_policy(s); });
  }
  if (doc.contains("trials")) c.trials = count_field(doc["trials"], "config.trials");
  if (doc.contains("base_seed")) {
    const json& s = doc["base_seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      throw SchemaError("config.base_seed: expected a non-negative integer");
    }
    c.base_seed = s.get<std::uint64_t>();
  }
  if (doc.contains("proxy")) {
    const json& p = doc["proxy"];
    const std::string pk =
        p.is_string() ? p.get<std::string>()
                      : string_field(field(p, "kind", "config.proxy"), "config.proxy.kind");
    if (pk == "crossing") {
      c.proxy = PercolationProxy::crossing();
    } else if (pk == "giant-fraction") {
      double theta = 0.1;
      if (p.is_object() && p.contains("theta")) {
        theta = number_field(p["theta"], "config.proxy.theta");
      }
      c.proxy = PercolationProxy::giant_fraction(theta);
    } else {
      throw SchemaError("config.proxy.kind: unknown proxy '" + pk + "'");
    }
  }
  if (doc.contains("tolerance")) c.tolerance = number_field(doc["tolerance"], "config.tolerance");
  if (doc.contains("lambda_c")) {
    c.constants.lambda_c = number_field(doc["lambda_c"], "config.lambda_c");
  }
  if (doc.contains("threads")) {
    c.threads = static_cast<unsigned>(count_field(doc["threads"], "config.threads"));
  }
  rethrow_as_schema("config", [&] {
    c.validate();
    return 0;
  });
  return c;
}

json estimate_to_json(const PointEstimate& e) {
  return {{"label", e.label},     {"parameter", e.parameter}, {"estimate", e.estimate},
          {"stderr", e.std_error}, {"trials", e.trials},       {"successes", e.successes}};
}

json cascade_record_to_json(const CascadeTrialRecord& r) {
  return {{"feasible", r.feasible},
          {"seed_node", r.seed_node},
          {"seed_degree", r.seed_degree},
          {"nodes", r.nodes},
          {"largest_vulnerable_fraction", r.largest_vulnerable_fraction},
          {"failed_count", r.failed_count},
          {"failed_fraction", r.failed_fraction},
          {"rounds", r.rounds},
          {"largest_failed_fraction", r.largest_failed_fraction},
          {"largest_failed_contains_seed", r.largest_failed_contains_seed},
          {"failed_percolates", r.failed_percolates}};
}

json sweep_to_json(const SweepResult& result) {
  json doc = tool_meta();
  doc["config"] = config_to_json(result.config);
  doc["seed"] = result.config.base_seed;
  doc["proxy"] = result.config.proxy.to_string();
  json points = json::array();
  for (const auto& p : result.points) points.push_back(estimate_to_json(p));
  doc["points"] = std::move(points);
  if (result.interval) doc["interval"] = {result.interval->lo, result.interval->hi};
  if (!result.cascade_records.empty()) {
    json records = json::array();
    for (const auto& per_point : result.cascade_records) {
      json rows = json::array();
      for (const auto& r : per_point) rows.push_back(cascade_record_to_json(r));
      records.push_back(std::move(rows));
    }
    doc["cascade_records"] = std::move(records);
  }
  return doc;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream os;
  os << "# tool=geonet version=" << kVersion << "\n";
  os << "# seed=" << result.config.base_seed << " proxy=" << result.config.proxy.to_string()
     << "\n";
  os << "# config=" << config_to_json(result.config).dump() << "\n";
  if (result.interval) {
    os << "# interval=" << format_double(result.interval->lo) << ','
       << format_double(result.interval->hi) << "\n";
  }
  os << "point,label,parameter,estimate,stderr,trials,successes\n";
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const PointEstimate& p = result.points[i];
    std::string label = p.label;
    if (label.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : label) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      label = quoted + "\"";
    }
    os << i << ',' << label << ',' << format_double(p.parameter) << ','
       << format_double(p.estimate) << ',' << format_double(p.std_error) << ',' << p.trials << ','
       << p.successes << "\n";
  }
  return os.str();
}

json cascade_state_to_json(const CascadeState& state) {
  json doc = tool_meta();
  doc["seed_node"] = state.seed_node;
  doc["rounds"] = state.rounds;
  doc["failed_count"] = state.failed_count();
  json failed = json::array();
  for (auto f : state.failed) failed.push_back(f != 0);
  doc["failed"] = std::move(failed);
  doc["thresholds"] = state.thresholds;
  return doc;
}

json failure_outcome_to_json(const FailureOutcome& outcome, const SpatialGraph& graph) {
  json doc = tool_meta();
  doc["rule"] = outcome.rule.to_string();
  doc["seed"] = outcome.seed;
  json alive = json::array();
  for (auto a : outcome.alive) alive.push_back(a != 0);
  doc["alive"] = std::move(alive);
  doc["alive_count"] = outcome.alive_count();
  doc["node_count"] = graph.size();
  doc["largest_component"] = components(graph, outcome.alive).largest_size;
  return doc;
}

json condition_to_json(const theory::ConditionResult& r) {
  json doc = {{"condition", r.condition},
              {"lhs", r.lhs},
              {"threshold", r.threshold},
              {"holds", r.holds}};
  if (r.subcritical_warning) doc["warning"] = "lambda <= lambda_c: the condition assumes a supercritical graph";
  return doc;
}

}  // namespace geonet::io
