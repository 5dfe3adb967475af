// geonet: command-line front end for graph generation, failure models,
// cascades, Monte Carlo sweeps and the closed-form condition evaluators.

#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "geonet/cascade.hpp"
#include "geonet/experiments.hpp"
#include "geonet/failure.hpp"
#include "geonet/graph.hpp"
#include "geonet/io.hpp"
#include "geonet/theory.hpp"
#include "geonet/version.hpp"

namespace {

using geonet::io::json;

struct Output {
  std::string path;
  std::string format = "json";
};

void emit(const Output& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
  } else {
    geonet::io::write_text_file(out.path, text);
  }
}

void emit_json(const Output& out, const json& doc) { emit(out, doc.dump(2) + "\n"); }

// All randomness flows from --seed; without it a seed is drawn and reported.
geonet::Seed resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  const geonet::Seed drawn = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << drawn << "\n";
  return drawn;
}

geonet::SpatialGraph load_graph_with_warnings(const std::string& path) {
  std::vector<std::string> warnings;
  geonet::SpatialGraph g = geonet::io::load_graph(path, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << path << ": " << w << "\n";
  return g;
}

geonet::PercolationProxy parse_proxy(const std::string& text) {
  if (text == "crossing") return geonet::PercolationProxy::crossing();
  if (text.rfind("giant", 0) == 0) {
    double theta = 0.1;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
      theta = std::stod(text.substr(colon + 1));
    }
    return geonet::PercolationProxy::giant_fraction(theta);
  }
  throw std::invalid_argument("--proxy: expected 'crossing' or 'giant[:theta]'");
}

void add_output_flags(CLI::App* cmd, Output& out, bool with_format) {
  cmd->add_option("--out", out.path, "Write the result to this path instead of stdout");
  if (with_format) {
    cmd->add_option("--format", out.format, "Result encoding")
        ->check(CLI::IsMember({"json", "csv"}));
  }
}

std::string render_sweep(const geonet::SweepResult& result, const Output& out) {
  if (out.format == "csv") return geonet::io::sweep_to_csv(result);
  return geonet::io::sweep_to_json(result).dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilience of random geometric graphs to degree-dependent and cascading failures"};
  app.set_version_flag("--version", std::string(geonet::kVersion));
  app.require_subcommand(1, 1);

  Output out;
  std::optional<std::uint64_t> seed;

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a point process and write a graph file");
  std::optional<std::size_t> gen_n;
  std::optional<double> gen_lambda;
  double gen_w = 0.0, gen_h = 0.0, gen_radius = 1.0;
  std::string gen_boundary = "open-box";
  auto* n_opt = gen->add_option("--n", gen_n, "Fixed node count (uniform placement)");
  gen->add_option("--lambda", gen_lambda, "Poisson density")->excludes(n_opt);
  gen->add_option("--width", gen_w, "Region width")->required();
  gen->add_option("--height", gen_h, "Region height")->required();
  gen->add_option("--boundary", gen_boundary, "open-box or torus");
  gen->add_option("--radius", gen_radius, "Connection radius");
  gen->add_option("--seed", seed, "Random seed");
  add_output_flags(gen, out, false);

  // fail
  auto* fail = app.add_subcommand("fail", "Apply a failure rule to a graph");
  std::string graph_path, rule_text;
  fail->add_option("--graph", graph_path, "Graph JSON file")->required();
  fail->add_option("--rule", rule_text, "indep:<q> | attack:<phi> | table:<q0,q1,..>;tail=<q> | margin[:lambda_c]")
      ->required();
  fail->add_option("--seed", seed, "Random seed");
  add_output_flags(fail, out, false);

  // cascade
  auto* cas = app.add_subcommand("cascade", "Run a threshold cascade on a graph");
  std::string dist_text;
  std::optional<std::uint32_t> seed_node;
  cas->add_option("--graph", graph_path, "Graph JSON file")->required();
  cas->add_option("--dist", dist_text, "uniform | pieces:lo,hi,density;...")->required();
  cas->add_option("--seed-node", seed_node, "Initial failure (default: drawn from --seed)");
  cas->add_option("--seed", seed, "Random seed");
  add_output_flags(cas, out, false);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a Monte Carlo experiment from a JSON config");
  std::string config_path;
  std::optional<unsigned> threads;
  sweep->add_option("--config", config_path, "Experiment config JSON")->required();
  sweep->add_option("--seed", seed, "Override the config's base_seed");
  sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
  add_output_flags(sweep, out, true);

  // estimate
  auto* est = app.add_subcommand("estimate", "Bisection estimates of critical values");
  est->require_subcommand(1, 1);
  double est_w = 50.0, est_h = 50.0, est_lo = 1.0, est_hi = 2.0, est_tol = 0.02, est_lambda = 0.0;
  double est_lambda_c = 1.435;
  std::size_t est_trials = 200;
  std::string est_proxy = "crossing";
  auto add_est_common = [&](CLI::App* cmd) {
    cmd->add_option("--width", est_w, "Region width");
    cmd->add_option("--height", est_h, "Region height");
    cmd->add_option("--trials", est_trials, "Trials per evaluation");
    cmd->add_option("--tolerance", est_tol, "Final interval width");
    cmd->add_option("--seed", seed, "Base seed");
    cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
    add_output_flags(cmd, out, true);
  };
  auto* est_lc = est->add_subcommand("lambda-c", "Critical density via crossing probability 1/2");
  add_est_common(est_lc);
  est_lc->add_option("--lo", est_lo, "Lower end of the initial bracket");
  est_lc->add_option("--hi", est_hi, "Upper end of the initial bracket");
  auto* est_qc = est->add_subcommand("qc", "Critical independent failure probability");
  add_est_common(est_qc);
  est_qc->add_option("--lambda", est_lambda, "Density")->required();
  est_qc->add_option("--lambda-c", est_lambda_c, "Critical density used for validation");
  est_qc->add_option("--proxy", est_proxy, "crossing | giant[:theta]");

  // theory
  auto* th = app.add_subcommand("theory", "Evaluate closed-form percolation conditions");
  th->require_subcommand(1, 1);
  double th_lambda = 0.0, th_lambda_c = 1.435, th_tol = 1e-12, th_d = 0.0, th_mu = 0.0,
         th_mu1 = 0.0;
  std::size_t th_k0 = 1;
  int th_m = 2;
  std::string th_rule, th_dist;
  auto* th_q = th->add_subcommand("critical-q", "q_c = 1 - lambda_c / lambda");
  th_q->add_option("--lambda", th_lambda)->required();
  th_q->add_option("--lambda-c", th_lambda_c);
  auto* th_nd = th->add_subcommand("thm1-nondecreasing", "Non-percolation test, non-decreasing q(k)");
  auto* th_ni = th->add_subcommand("thm1-nonincreasing", "Non-percolation test, non-increasing q(k)");
  for (auto* c : {th_nd, th_ni}) {
    c->add_option("--lambda", th_lambda)->required();
    c->add_option("--rule", th_rule)->required();
    c->add_option("--tolerance", th_tol);
    c->add_option("--lambda-c", th_lambda_c);
  }
  auto* th_k0s = th->add_subcommand("k0", "Node-count cap 2(d/2+2)(3d/2+2)lambda");
  th_k0s->add_option("--lambda", th_lambda)->required();
  th_k0s->add_option("--d", th_d)->required();
  auto* th_phi = th->add_subcommand("critical-phi", "Largest attack threshold that destroys percolation");
  th_phi->add_option("--lambda", th_lambda)->required();
  auto* th_nc = th->add_subcommand("thm2-no-cascade", "No-cascade condition for a threshold density");
  th_nc->add_option("--lambda", th_lambda)->required();
  th_nc->add_option("--dist", th_dist)->required();
  th_nc->add_option("--tolerance", th_tol);
  th_nc->add_option("--lambda-c", th_lambda_c);
  auto* th_cs = th->add_subcommand("thm2-cascade", "Check F(1/k0) >= mu1/mu");
  th_cs->add_option("--mu", th_mu)->required();
  th_cs->add_option("--mu1", th_mu1)->required();
  th_cs->add_option("--dist", th_dist)->required();
  th_cs->add_option("--k0", th_k0)->required();
  th_cs->add_option("--lambda-c", th_lambda_c);
  auto* th_cb = th->add_subcommand("circuit-bound", "(4/27)(m-1)3^(2m)");
  th_cb->add_option("--m", th_m)->required();
  auto* th_ec = th->add_subcommand("enumerate-circuits", "Exact count of circuits of length 2m");
  th_ec->add_option("--m", th_m)->required();
  for (auto* c : {th_q, th_nd, th_ni, th_k0s, th_phi, th_nc, th_cs, th_cb, th_ec}) {
    add_output_flags(c, out, false);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (gen->parsed()) {
      if (!gen_n && !gen_lambda) throw std::invalid_argument("generate: one of --n or --lambda is required");
      const geonet::Seed s = resolve_seed(seed);
      const geonet::Region region(gen_w, gen_h, geonet::parse_boundary(gen_boundary));
      geonet::PointSet ps = gen_n ? geonet::generate_uniform(*gen_n, region, s)
                                  : geonet::generate_poisson(*gen_lambda, region, s);
      const geonet::SpatialGraph g = geonet::build_graph(std::move(ps), gen_radius);
      json doc = geonet::io::graph_to_json(g);
      json meta = geonet::io::tool_meta();
      meta["seed"] = s;
      meta["node_count"] = g.size();
      meta["mean_degree"] = g.mean_degree();
      if (gen_n) meta["n"] = *gen_n;
      if (gen_lambda) meta["lambda"] = *gen_lambda;
      doc["meta"] = std::move(meta);
      emit(out, doc.dump() + "\n");
    } else if (fail->parsed()) {
      const geonet::SpatialGraph g = load_graph_with_warnings(graph_path);
      const geonet::Seed s = resolve_seed(seed);
      const geonet::FailureRule rule = geonet::resolve_rule(rule_text, g, {});
      const geonet::FailureOutcome outcome = geonet::apply_failures(g, rule, s);
      json doc = geonet::io::failure_outcome_to_json(outcome, g);
      doc["graph"] = graph_path;
      doc["degrees"] = g.degrees();
      emit_json(out, doc);
    } else if (cas->parsed()) {
      const geonet::SpatialGraph g = load_graph_with_warnings(graph_path);
      if (g.size() == 0) throw std::invalid_argument("cascade: the graph has no nodes");
      const geonet::Seed s = resolve_seed(seed);
      const auto dist = geonet::ThresholdDistribution::parse(dist_text);
      const geonet::NodeId start =
          seed_node ? *seed_node
                    : static_cast<geonet::NodeId>(
                          geonet::CounterStream(s, geonet::Stream::seed_node).below(0, g.size()));
      const geonet::CascadeState state =
          geonet::run_cascade(g, geonet::sample_thresholds(g, dist, s), start);
      json doc = geonet::io::cascade_state_to_json(state);
      doc["seed"] = s;
      doc["distribution"] = dist.to_string();
      doc["graph"] = graph_path;
      emit_json(out, doc);
    } else if (sweep->parsed()) {
      geonet::ExperimentConfig config =
          geonet::io::config_from_json(geonet::io::read_json_file(config_path));
      if (seed) config.base_seed = *seed;
      if (threads) config.threads = *threads;
      emit(out, render_sweep(geonet::run_sweep(config), out));
    } else if (est->parsed()) {
      geonet::ExperimentConfig config;
      config.region = geonet::Region(est_w, est_h, geonet::Boundary::open_box);
      config.trials = est_trials;
      config.tolerance = est_tol;
      config.base_seed = resolve_seed(seed);
      if (threads) config.threads = *threads;
      geonet::SweepResult result;
      geonet::BisectionResult b;
      if (est_lc->parsed()) {
        config.kind = geonet::ExperimentKind::lambda_c_estimate;
        config.lambdas = {est_lo, est_hi};
        b = geonet::estimate_lambda_c(config);
      } else {
        config.kind = geonet::ExperimentKind::failure_sweep;
        config.lambdas = {est_lambda};
        config.proxy = parse_proxy(est_proxy);
        config.constants.lambda_c = est_lambda_c;
        b = geonet::estimate_qc(est_lambda, config);
      }
      result.config = config;
      result.points = std::move(b.evaluations);
      result.interval = b.interval;
      emit(out, render_sweep(result, out));
    } else if (th->parsed()) {
      geonet::theory::CriticalConstants constants{th_lambda_c};
      geonet::theory::SeriesControl ctrl;
      ctrl.tail_tolerance = th_tol;
      json doc = geonet::io::tool_meta();
      if (th_q->parsed()) {
        const auto qc = geonet::theory::critical_q(th_lambda, constants);
        doc["condition"] = "critical-q";
        doc["lambda"] = th_lambda;
        doc["lambda_c"] = constants.lambda_c;
        doc["q_c"] = qc ? json(*qc) : json(nullptr);
        if (!qc) doc["subcritical"] = true;
      } else if (th_nd->parsed() || th_ni->parsed()) {
        const auto rule = geonet::FailureRule::parse(th_rule);
        const auto r = th_nd->parsed()
                           ? geonet::theory::thm1_necessary_nondecreasing(th_lambda, rule, ctrl, constants)
                           : geonet::theory::thm1_necessary_nonincreasing(th_lambda, rule, ctrl, constants);
        doc.update(geonet::io::condition_to_json(r));
        doc["lambda"] = th_lambda;
        doc["rule"] = rule.to_string();
      } else if (th_k0s->parsed()) {
        doc["condition"] = "k0";
        doc["k0"] = geonet::theory::k0_diagnostic(th_lambda, th_d);
      } else if (th_phi->parsed()) {
        const auto phi = geonet::theory::critical_phi(th_lambda);
        doc["condition"] = "critical-phi";
        doc["lambda"] = th_lambda;
        doc["phi"] = phi ? json(*phi) : json(nullptr);
        if (!phi) doc["unbounded"] = true;
      } else if (th_nc->parsed()) {
        const auto dist = geonet::ThresholdDistribution::parse(th_dist);
        doc.update(geonet::io::condition_to_json(
            geonet::theory::thm2_no_cascade_condition(th_lambda, dist, ctrl, constants)));
        doc["lambda"] = th_lambda;
        doc["distribution"] = dist.to_string();
      } else if (th_cs->parsed()) {
        const auto dist = geonet::ThresholdDistribution::parse(th_dist);
        doc.update(geonet::io::condition_to_json(
            geonet::theory::thm2_cascade_sufficient_check(th_mu, th_mu1, dist, th_k0, constants)));
      } else if (th_cb->parsed()) {
        doc["condition"] = "circuit-bound";
        doc["m"] = th_m;
        doc["bound"] = geonet::theory::circuit_bound(th_m);
      } else if (th_ec->parsed()) {
        doc["condition"] = "enumerate-circuits";
        doc["m"] = th_m;
        doc["count"] = geonet::theory::enumerate_circuits(th_m);
        doc["bound"] = geonet::theory::circuit_bound(th_m);
      }
      emit_json(out, doc);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
