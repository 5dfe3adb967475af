#include "geonet/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "geonet/parse.hpp"

namespace geonet {

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::percolation_sweep: return "percolation-sweep";
    case ExperimentKind::failure_sweep: return "failure-sweep";
    case ExperimentKind::cascade_trial: return "cascade-trial";
    case ExperimentKind::lambda_c_estimate: return "lambda-c-estimate";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  for (auto k : {ExperimentKind::percolation_sweep, ExperimentKind::failure_sweep,
                 ExperimentKind::cascade_trial, ExperimentKind::lambda_c_estimate}) {
    if (text == to_string(k)) return k;
  }
  throw std::invalid_argument("kind: unknown experiment kind '" + std::string(text) + "'");
}

std::string PercolationProxy::to_string() const {
  if (kind == Kind::crossing) return "crossing";
  std::ostringstream os;
  os.precision(17);
  os << "giant-fraction(" << theta << ")";
  return os.str();
}

std::string_view to_string(SeedingPolicy policy) noexcept {
  return policy == SeedingPolicy::random_node ? "random-node"
                                              : "adjacent-to-largest-vulnerable-component";
}

SeedingPolicy parse_seeding_policy(std::string_view text) {
  if (text == "random-node") return SeedingPolicy::random_node;
  if (text == "adjacent-to-largest-vulnerable-component" || text == "adjacent") {
    return SeedingPolicy::adjacent_to_largest_vulnerable_component;
  }
  throw std::invalid_argument("seeding: unknown policy '" + std::string(text) + "'");
}

void ExperimentConfig::validate_common() const {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be > 0");
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (proxy.kind == PercolationProxy::Kind::crossing && region.boundary == Boundary::torus) {
    throw std::invalid_argument("proxy: crossing requires an open-box region");
  }
  if (proxy.kind == PercolationProxy::Kind::giant_fraction &&
      !(proxy.theta > 0.0 && proxy.theta <= 1.0)) {
    throw std::invalid_argument("proxy.theta must be in (0,1]");
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    if (!(lambdas[i] >= 0.0) || !std::isfinite(lambdas[i])) {
      throw std::invalid_argument("lambdas[" + std::to_string(i) + "] must be >= 0");
    }
  }
  for (std::size_t i = 0; i < qs.size(); ++i) {
    if (!(qs[i] >= 0.0 && qs[i] <= 1.0)) {
      throw std::invalid_argument("qs[" + std::to_string(i) + "] must be in [0,1]");
    }
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
}

void ExperimentConfig::validate() const {
  validate_common();
  const bool single_density = node_count.has_value() ? lambdas.empty() : lambdas.size() == 1;
  switch (kind) {
    case ExperimentKind::percolation_sweep:
      if (lambdas.empty()) throw std::invalid_argument("lambdas: grid is empty");
      if (node_count) throw std::invalid_argument("node_count: not used by percolation-sweep");
      break;
    case ExperimentKind::failure_sweep:
      if (!single_density) {
        throw std::invalid_argument("lambdas: failure-sweep needs exactly one lambda or node_count");
      }
      if (qs.empty() && rules.empty()) throw std::invalid_argument("rules: grid is empty");
      for (std::size_t i = 0; i < rules.size(); ++i) {
        const std::string_view r = rules[i];
        if (r.substr(0, 6) == "margin") continue;
        try {
          (void)FailureRule::parse(r);
        } catch (const std::invalid_argument& e) {
          throw std::invalid_argument("rules[" + std::to_string(i) + "]: " + e.what());
        }
      }
      break;
    case ExperimentKind::cascade_trial:
      if (!single_density) {
        throw std::invalid_argument("lambdas: cascade-trial needs exactly one lambda or node_count");
      }
      if (distributions.empty()) throw std::invalid_argument("distributions: grid is empty");
      for (std::size_t i = 0; i < distributions.size(); ++i) {
        try {
          (void)ThresholdDistribution::parse(distributions[i]);
        } catch (const std::invalid_argument& e) {
          throw std::invalid_argument("distributions[" + std::to_string(i) + "]: " + e.what());
        }
      }
      break;
    case ExperimentKind::lambda_c_estimate:
      if (lambdas.size() < 2) {
        throw std::invalid_argument("lambdas: lambda-c-estimate needs a [lo, hi] bracket");
      }
      if (node_count) throw std::invalid_argument("node_count: not used by lambda-c-estimate");
      break;
  }
}

PointEstimate make_estimate(std::string label, double parameter, std::size_t successes,
                            std::size_t trials) {
  PointEstimate e;
  e.label = std::move(label);
  e.parameter = parameter;
  e.trials = trials;
  e.successes = successes;
  e.estimate = trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0;
  e.std_error = trials ? std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(trials))
                       : 0.0;
  return e;
}

Seed trial_seed(const ExperimentConfig& config, std::size_t point, std::size_t trial) noexcept {
  return derive_seed(config.base_seed, point, trial);
}

SpatialGraph make_graph(const ExperimentConfig& config, double lambda, Seed seed) {
  PointSet points = config.node_count ? generate_uniform(*config.node_count, config.region, seed)
                                      : generate_poisson(lambda, config.region, seed);
  return build_graph(std::move(points), config.radius);
}

bool percolates(const SpatialGraph& graph, std::span<const std::uint8_t> alive,
                const PercolationProxy& proxy) {
  if (proxy.kind == PercolationProxy::Kind::crossing) {
    return crosses(graph, alive, full_rect(graph.region()), Direction::left_right);
  }
  if (graph.size() == 0) return false;
  const ComponentLabeling labels = components(graph, alive);
  return static_cast<double>(labels.largest_size) >=
         proxy.theta * static_cast<double>(graph.size());
}

FailureRule resolve_rule(std::string_view text, const SpatialGraph& graph,
                         const theory::CriticalConstants& constants) {
  if (text.substr(0, 6) == "margin") {
    theory::CriticalConstants c = constants;
    if (text.size() > 6) {
      if (text[6] != ':') throw std::invalid_argument("rule: expected 'margin' or 'margin:<lambda_c>'");
      c.lambda_c = parse_number(text.substr(7), "rule lambda_c");
    }
    return margin_rule(c.mu_c(), graph.mean_degree(), graph.max_degree());
  }
  return FailureRule::parse(text);
}

namespace {

/// Runs body(i) for i in [0, count), possibly concurrently. Callers write into
/// slot i only, so reductions afterwards see the same values in the same order.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::mutex error_mutex;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::size_t count_true(const std::vector<std::uint8_t>& flags) {
  return static_cast<std::size_t>(std::count(flags.begin(), flags.end(), std::uint8_t{1}));
}

double single_density(const ExperimentConfig& config) {
  return config.lambdas.empty() ? 0.0 : config.lambdas.front();
}

std::string number_label(std::string_view name, double value) {
  std::ostringstream os;
  os.precision(17);
  os << name << '=' << value;
  return os.str();
}

/// Bisection for the point where a monotone empirical probability crosses 1/2.
/// `eval(x)` estimates the probability at x; `increasing` gives its direction.
template <class Eval>
BisectionResult bisect(double lo, double hi, double tolerance, bool increasing,
                       std::string_view name, Eval&& eval) {
  BisectionResult out;
  const auto at = [&](double x) {
    PointEstimate e = eval(x);
    e.label = number_label(name, x);
    out.evaluations.push_back(e);
    return e.estimate >= 0.5;
  };
  const bool lo_above = at(lo);
  const bool hi_above = at(hi);
  if (lo_above == hi_above || lo_above == increasing) {
    throw std::invalid_argument(std::string(name) + ": initial interval [" +
                                std::to_string(lo) + ", " + std::to_string(hi) +
                                "] does not bracket probability 1/2");
  }
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (at(mid) == increasing) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.interval = {lo, hi};
  return out;
}

}  // namespace

BisectionResult estimate_lambda_c(const ExperimentConfig& config) {
  config.validate();
  if (config.proxy.kind != PercolationProxy::Kind::crossing) {
    throw std::invalid_argument("proxy: lambda_c estimation uses the crossing proxy");
  }
  if (std::min(config.region.width, config.region.height) < 50.0 * config.radius) {
    throw std::invalid_argument("region: lambda_c estimation needs sides >= 50 radii");
  }
  if (config.lambdas.size() < 2) {
    throw std::invalid_argument("lambdas: lambda_c estimation needs a [lo, hi] bracket");
  }
  const auto [lo_it, hi_it] = std::minmax_element(config.lambdas.begin(), config.lambdas.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo) || !(hi > 0.0)) throw std::invalid_argument("lambdas: bracket is empty");

  std::vector<SpatialGraph> graphs(config.trials);
  std::vector<std::vector<double>> marks(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    const Seed seed = trial_seed(config, 0, t);
    graphs[t] = build_graph(generate_poisson(hi, config.region, seed), config.radius);
    const CounterStream stream(seed, Stream::marks);
    marks[t].resize(graphs[t].size());
    for (std::size_t i = 0; i < marks[t].size(); ++i) marks[t][i] = stream.uniform(i);
  });

  const auto eval = [&](double lambda) {
    std::vector<std::uint8_t> hit(config.trials, 0);
    const double keep = lambda / hi;
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
      Mask alive(graphs[t].size());
      for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = marks[t][i] < keep ? 1 : 0;
      hit[t] = percolates(graphs[t], alive, config.proxy) ? 1 : 0;
    });
    return make_estimate("", lambda, count_true(hit), config.trials);
  };
  return bisect(lo, hi, config.tolerance, /*increasing=*/true, "lambda", eval);
}

BisectionResult estimate_qc(double lambda, const ExperimentConfig& config) {
  config.validate_common();
  if (!config.node_count && !(lambda > config.constants.lambda_c)) {
    throw std::invalid_argument("lambda " + std::to_string(lambda) +
                                " is not above lambda_c; no failure threshold exists");
  }
  std::vector<SpatialGraph> graphs(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    graphs[t] = make_graph(config, lambda, trial_seed(config, 0, t));
  });
  const auto eval = [&](double q) {
    std::vector<std::uint8_t> hit(config.trials, 0);
    parallel_for(config.trials, config.threads, [&](std::size_t t) {
      const FailureOutcome outcome =
          apply_failures(graphs[t], FailureRule::independent(q), trial_seed(config, 0, t));
      hit[t] = percolates(graphs[t], outcome.alive, config.proxy) ? 1 : 0;
    });
    return make_estimate("", q, count_true(hit), config.trials);
  };
  return bisect(0.0, 1.0, config.tolerance, /*increasing=*/false, "q", eval);
}

std::optional<NodeId> choose_seed_node(const SpatialGraph& graph, const NodeClasses& classes,
                                       SeedingPolicy seeding, Seed seed) {
  const CounterStream stream(seed, Stream::seed_node);
  const std::size_t n = graph.size();
  if (n == 0) return std::nullopt;
  if (seeding == SeedingPolicy::random_node) return static_cast<NodeId>(stream.below(0, n));

  const Mask vulnerable = classes.vulnerable_mask();
  const ComponentLabeling labels = components(graph, vulnerable);
  if (labels.largest_id == kNoComponent) return std::nullopt;
  std::vector<NodeId> candidates;
  for (NodeId v = 0; v < n; ++v) {
    if (labels.id[v] == labels.largest_id) continue;
    const auto nbrs = graph.neighbors(v);
    if (std::any_of(nbrs.begin(), nbrs.end(),
                    [&](NodeId w) { return labels.id[w] == labels.largest_id; })) {
      candidates.push_back(v);
    }
  }
  if (candidates.empty()) {
    for (NodeId v = 0; v < n; ++v) {
      if (labels.id[v] == labels.largest_id) candidates.push_back(v);
    }
  }
  return candidates[stream.below(0, candidates.size())];
}

CascadeTrialRecord run_cascade_trial(const SpatialGraph& graph, const ThresholdDistribution& dist,
                                     SeedingPolicy seeding, Seed seed,
                                     const PercolationProxy& proxy) {
  CascadeTrialRecord rec;
  rec.nodes = graph.size();
  std::vector<double> psi = sample_thresholds(graph, dist, seed);
  const NodeClasses classes = classify(graph, psi);
  const double n = static_cast<double>(std::max<std::size_t>(1, graph.size()));
  rec.largest_vulnerable_fraction =
      static_cast<double>(components(graph, classes.vulnerable_mask()).largest_size) / n;

  const std::optional<NodeId> start = choose_seed_node(graph, classes, seeding, seed);
  if (!start) {
    rec.feasible = false;
    return rec;
  }
  rec.seed_node = *start;
  rec.seed_degree = graph.degree(*start);
  const CascadeState state = run_cascade(graph, std::move(psi), *start);
  rec.failed_count = state.failed_count();
  rec.failed_fraction = static_cast<double>(rec.failed_count) / n;
  rec.rounds = state.rounds.size();
  const FailedComponentSummary summary = largest_failed_component(graph, state);
  rec.largest_failed_fraction = static_cast<double>(summary.largest_size) / n;
  rec.largest_failed_contains_seed = summary.contains_seed;
  rec.failed_percolates = percolates(graph, state.failed, proxy);
  return rec;
}

CascadeTrialRecord run_cascade_trial(const ExperimentConfig& config, double lambda,
                                     const ThresholdDistribution& dist, SeedingPolicy seeding,
                                     Seed seed) {
  const SpatialGraph graph = make_graph(config, lambda, seed);
  return run_cascade_trial(graph, dist, seeding, seed, config.proxy);
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult result;
  result.config = config;

  switch (config.kind) {
    case ExperimentKind::percolation_sweep: {
      for (std::size_t p = 0; p < config.lambdas.size(); ++p) {
        const double lambda = config.lambdas[p];
        std::vector<std::uint8_t> hit(config.trials, 0);
        parallel_for(config.trials, config.threads, [&](std::size_t t) {
          const SpatialGraph g = make_graph(config, lambda, trial_seed(config, p, t));
          hit[t] = percolates(g, all_alive(g.size()), config.proxy) ? 1 : 0;
        });
        result.points.push_back(
            make_estimate(number_label("lambda", lambda), lambda, count_true(hit), config.trials));
      }
      break;
    }
    case ExperimentKind::failure_sweep: {
      std::vector<std::string> grid;
      std::vector<double> params;
      for (double q : config.qs) {
        grid.push_back(FailureRule::independent(q).to_string());
        params.push_back(q);
      }
      for (std::size_t i = 0; i < config.rules.size(); ++i) {
        grid.push_back(config.rules[i]);
        params.push_back(static_cast<double>(i));
      }
      const double lambda = single_density(config);
      for (std::size_t p = 0; p < grid.size(); ++p) {
        std::vector<std::uint8_t> hit(config.trials, 0);
        parallel_for(config.trials, config.threads, [&](std::size_t t) {
          const Seed seed = trial_seed(config, p, t);
          const SpatialGraph g = make_graph(config, lambda, seed);
          const FailureRule rule = resolve_rule(grid[p], g, config.constants);
          hit[t] = percolates(g, apply_failures(g, rule, seed).alive, config.proxy) ? 1 : 0;
        });
        result.points.push_back(make_estimate(grid[p], params[p], count_true(hit), config.trials));
      }
      break;
    }
    case ExperimentKind::cascade_trial: {
      const double lambda = single_density(config);
      for (std::size_t p = 0; p < config.distributions.size(); ++p) {
        const ThresholdDistribution dist = ThresholdDistribution::parse(config.distributions[p]);
        std::vector<CascadeTrialRecord> records(config.trials);
        parallel_for(config.trials, config.threads, [&](std::size_t t) {
          records[t] = run_cascade_trial(config, lambda, dist, config.seeding,
                                         trial_seed(config, p, t));
        });
        const auto hits = static_cast<std::size_t>(std::count_if(
            records.begin(), records.end(), [](const auto& r) { return r.failed_percolates; }));
        result.points.push_back(make_estimate(config.distributions[p], static_cast<double>(p),
                                              hits, config.trials));
        result.cascade_records.push_back(std::move(records));
      }
      break;
    }
    case ExperimentKind::lambda_c_estimate: {
      BisectionResult b = estimate_lambda_c(config);
      result.points = std::move(b.evaluations);
      result.interval = b.interval;
      break;
    }
  }
  return result;
}

}  // namespace geonet
