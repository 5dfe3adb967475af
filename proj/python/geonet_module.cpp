#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "geonet/cascade.hpp"
#include "geonet/experiments.hpp"
#include "geonet/failure.hpp"
#include "geonet/graph.hpp"
#include "geonet/io.hpp"
#include "geonet/theory.hpp"
#include "geonet/version.hpp"

namespace py = pybind11;
using namespace geonet;

namespace {

py::object to_python(const io::json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

io::json from_python(const py::object& obj) {
  return io::json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

PointSet make_points(const std::vector<std::pair<double, double>>& xy, const Region& region) {
  PointSet ps;
  ps.region = region;
  ps.coords.reserve(xy.size());
  for (const auto& [x, y] : xy) ps.coords.push_back({x, y});
  ps.intensity = static_cast<double>(xy.size()) / region.area();
  return ps;
}

std::vector<std::pair<double, double>> coords_of(const SpatialGraph& g) {
  std::vector<std::pair<double, double>> out;
  out.reserve(g.size());
  for (const Point& p : g.points().coords) out.emplace_back(p.x, p.y);
  return out;
}

Mask to_mask(const std::vector<bool>& alive) { return Mask(alive.begin(), alive.end()); }

std::vector<bool> from_mask(const Mask& m) { return std::vector<bool>(m.begin(), m.end()); }

py::dict component_summary(const ComponentLabeling& labels) {
  py::dict d;
  std::vector<long> ids;
  ids.reserve(labels.id.size());
  for (auto id : labels.id) ids.push_back(id == kNoComponent ? -1 : static_cast<long>(id));
  d["ids"] = ids;
  d["sizes"] = labels.sizes;
  d["largest_size"] = labels.largest_size;
  return d;
}

py::dict condition(const theory::ConditionResult& r) { return to_python(io::condition_to_json(r)); }

}  // namespace

PYBIND11_MODULE(_geonet, m) {
  m.doc() = "Random geometric graph percolation and cascade toolkit";
  m.attr("__version__") = std::string(kVersion);
  py::register_exception<io::SchemaError>(m, "SchemaError", PyExc_ValueError);

  py::enum_<Boundary>(m, "Boundary")
      .value("open_box", Boundary::open_box)
      .value("torus", Boundary::torus);

  py::class_<Region>(m, "Region")
      .def(py::init<double, double, Boundary>(), py::arg("width"), py::arg("height"),
           py::arg("boundary") = Boundary::open_box)
      .def_readonly("width", &Region::width)
      .def_readonly("height", &Region::height)
      .def_readonly("boundary", &Region::boundary)
      .def("area", &Region::area);

  py::class_<SpatialGraph>(m, "Graph")
      .def(py::init([](const std::vector<std::pair<double, double>>& points, const Region& region,
                       double radius) { return build_graph(make_points(points, region), radius); }),
           py::arg("points"), py::arg("region"), py::arg("radius") = 1.0)
      .def("__len__", &SpatialGraph::size)
      .def_property_readonly("radius", &SpatialGraph::radius)
      .def_property_readonly("region", &SpatialGraph::region)
      .def_property_readonly("points", &coords_of)
      .def_property_readonly("edge_count", &SpatialGraph::edge_count)
      .def("neighbors",
           [](const SpatialGraph& g, NodeId v) {
             if (v >= g.size()) throw py::index_error("node out of range");
             const auto row = g.neighbors(v);
             return std::vector<NodeId>(row.begin(), row.end());
           })
      .def("degrees", &SpatialGraph::degrees)
      .def("mean_degree", &SpatialGraph::mean_degree)
      .def("components",
           [](const SpatialGraph& g, std::optional<std::vector<bool>> alive) {
             return component_summary(alive ? components(g, to_mask(*alive)) : components(g));
           },
           py::arg("alive") = py::none())
      .def("crosses",
           [](const SpatialGraph& g, std::optional<std::vector<bool>> alive, const std::string& dir) {
             const Mask mask = alive ? to_mask(*alive) : all_alive(g.size());
             const Direction d = dir == "top-bottom" ? Direction::top_bottom : Direction::left_right;
             if (dir != "top-bottom" && dir != "left-right") {
               throw py::value_error("direction must be 'left-right' or 'top-bottom'");
             }
             return crosses(g, mask, full_rect(g.region()), d);
           },
           py::arg("alive") = py::none(), py::arg("direction") = "left-right")
      .def("to_json", [](const SpatialGraph& g) { return to_python(io::graph_to_json(g)); })
      .def_static("from_json", [](const py::object& doc) { return io::graph_from_json(from_python(doc)); });

  m.def("generate_uniform",
        [](std::size_t n, const Region& region, Seed seed) {
          std::vector<std::pair<double, double>> out;
          for (const Point& p : generate_uniform(n, region, seed).coords) out.emplace_back(p.x, p.y);
          return out;
        },
        py::arg("n"), py::arg("region"), py::arg("seed"));
  m.def("generate_poisson",
        [](double lambda, const Region& region, Seed seed) {
          std::vector<std::pair<double, double>> out;
          for (const Point& p : generate_poisson(lambda, region, seed).coords) out.emplace_back(p.x, p.y);
          return out;
        },
        py::arg("lam"), py::arg("region"), py::arg("seed"));
  m.def("build_graph",
        [](const Region& region, double radius, Seed seed, std::optional<std::size_t> n,
           std::optional<double> lam) {
          if (n.has_value() == lam.has_value()) throw py::value_error("give exactly one of n or lam");
          PointSet ps = n ? generate_uniform(*n, region, seed) : generate_poisson(*lam, region, seed);
          return build_graph(std::move(ps), radius);
        },
        py::arg("region"), py::arg("radius") = 1.0, py::arg("seed") = 0, py::kw_only(),
        py::arg("n") = py::none(), py::arg("lam") = py::none());

  py::class_<FailureRule>(m, "FailureRule")
      .def(py::init(&FailureRule::parse), py::arg("text"))
      .def_static("independent", &FailureRule::independent)
      .def_static("attack", &FailureRule::attack)
      .def_static("table", &FailureRule::table, py::arg("table"), py::arg("tail") = 1.0)
      .def_static("margin",
                  [](const SpatialGraph& g, double lambda_c) {
                    return resolve_rule("margin", g, theory::CriticalConstants{lambda_c});
                  },
                  py::arg("graph"), py::arg("lambda_c") = theory::CriticalConstants{}.lambda_c)
      .def("probability", &FailureRule::probability)
      .def("__str__", &FailureRule::to_string)
      .def("__repr__", [](const FailureRule& r) { return "FailureRule('" + r.to_string() + "')"; });

  m.def("apply_failures",
        [](const SpatialGraph& g, const FailureRule& rule, Seed seed) {
          return from_mask(apply_failures(g, rule, seed).alive);
        },
        py::arg("graph"), py::arg("rule"), py::arg("seed"));

  py::class_<ThresholdDistribution>(m, "ThresholdDistribution")
      .def(py::init(&ThresholdDistribution::parse), py::arg("text"))
      .def_static("uniform", &ThresholdDistribution::uniform)
      .def("cdf", &ThresholdDistribution::cdf)
      .def("quantile", &ThresholdDistribution::quantile)
      .def("vulnerable_probability",
           [](const ThresholdDistribution& d, std::size_t k) { return vulnerable_probability(d, k); })
      .def("reliable_probability",
           [](const ThresholdDistribution& d, std::size_t k) { return reliable_probability(d, k); })
      .def("sample", [](const ThresholdDistribution& d, const SpatialGraph& g,
                        Seed seed) { return sample_thresholds(g, d, seed); })
      .def("__str__", &ThresholdDistribution::to_string);

  m.def("classify",
        [](const SpatialGraph& g, const std::vector<double>& psi) {
          const NodeClasses c = classify(g, psi);
          py::dict d;
          std::vector<bool> vul, rel, iso;
          for (NodeId v = 0; v < c.size(); ++v) {
            vul.push_back(c.vulnerable(v));
            rel.push_back(c.reliable(v));
            iso.push_back(c.isolated_reliable(v));
          }
          d["vulnerable"] = vul;
          d["reliable"] = rel;
          d["isolated_reliable"] = iso;
          return d;
        },
        py::arg("graph"), py::arg("thresholds"));
  m.def("run_cascade",
        [](const SpatialGraph& g, std::vector<double> psi, NodeId seed_node) {
          return to_python(io::cascade_state_to_json(run_cascade(g, std::move(psi), seed_node)));
        },
        py::arg("graph"), py::arg("thresholds"), py::arg("seed_node"));

  m.def("run_sweep",
        [](const py::object& config) {
          const ExperimentConfig c = io::config_from_json(from_python(config));
          SweepResult r;
          {
            py::gil_scoped_release release;
            r = run_sweep(c);
          }
          return to_python(io::sweep_to_json(r));
        },
        py::arg("config"));
  m.def("estimate_lambda_c",
        [](const py::object& config) {
          io::json doc = from_python(config);
          doc["kind"] = "lambda-c-estimate";
          const ExperimentConfig c = io::config_from_json(doc);
          py::gil_scoped_release release;
          const Interval i = estimate_lambda_c(c).interval;
          return std::make_pair(i.lo, i.hi);
        },
        py::arg("config"));
  m.def("estimate_qc",
        [](double lambda, const py::object& config) {
          io::json doc = from_python(config);
          doc["kind"] = "percolation-sweep";
          if (!doc.contains("lambdas")) doc["lambdas"] = {lambda};
          const ExperimentConfig c = io::config_from_json(doc);
          py::gil_scoped_release release;
          const Interval i = estimate_qc(lambda, c).interval;
          return std::make_pair(i.lo, i.hi);
        },
        py::arg("lam"), py::arg("config"));

  py::module_ t = m.def_submodule("theory", "Closed-form and series conditions");
  t.def("critical_q", [](double l, double lc) { return theory::critical_q(l, {lc}); }, py::arg("lam"),
        py::arg("lambda_c") = theory::CriticalConstants{}.lambda_c);
  t.def("nondecreasing_lhs",
        [](double l, const std::function<double(std::size_t)>& q) { return theory::nondecreasing_lhs(l, q); },
        py::arg("lam"), py::arg("q"));
  t.def("nonincreasing_lhs",
        [](double l, const std::function<double(std::size_t)>& q) { return theory::nonincreasing_lhs(l, q); },
        py::arg("lam"), py::arg("q"));
  t.def("thm1_nondecreasing",
        [](double l, const FailureRule& r) { return condition(theory::thm1_necessary_nondecreasing(l, r)); },
        py::arg("lam"), py::arg("rule"));
  t.def("thm1_nonincreasing",
        [](double l, const FailureRule& r) { return condition(theory::thm1_necessary_nonincreasing(l, r)); },
        py::arg("lam"), py::arg("rule"));
  t.def("thm2_no_cascade",
        [](double l, const ThresholdDistribution& d) { return condition(theory::thm2_no_cascade_condition(l, d)); },
        py::arg("lam"), py::arg("dist"));
  t.def("thm2_cascade",
        [](double mu, double mu1, const ThresholdDistribution& d, std::size_t k0) {
          return condition(theory::thm2_cascade_sufficient_check(mu, mu1, d, k0));
        },
        py::arg("mu"), py::arg("mu1"), py::arg("dist"), py::arg("k0"));
  t.def("k0", &theory::k0_diagnostic, py::arg("lam"), py::arg("d"));
  t.def("critical_phi", &theory::critical_phi, py::arg("lam"));
  t.def("circuit_bound", &theory::circuit_bound, py::arg("m"));
  t.def("enumerate_circuits", &theory::enumerate_circuits, py::arg("m"));
}
