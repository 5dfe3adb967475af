#include "geonet/failure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "geonet/parse.hpp"

namespace geonet {
namespace {

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(what + " must be a probability in [0,1]");
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

FailureRule::FailureRule(Kind kind) : kind_(std::move(kind)) {
  std::visit(overloaded{
                 [](const IndependentFailure& r) { check_probability(r.q, "rule q"); },
                 [](const DegreeTableFailure& r) {
                   if (r.table.empty()) throw std::invalid_argument("rule table must be non-empty");
                   for (std::size_t k = 0; k < r.table.size(); ++k) {
                     check_probability(r.table[k], "rule table[" + std::to_string(k) + "]");
                   }
                   check_probability(r.tail, "rule tail");
                 },
                 [](const ThresholdAttack&) {},
             },
             kind_);
}

FailureRule FailureRule::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("rule: expected '<kind>:<args>', got '" + std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view args = text.substr(colon + 1);
  if (kind == "indep") return independent(parse_number(args, "rule q"));
  if (kind == "attack") {
    const double phi = parse_number(args, "rule phi");
    if (phi != std::floor(phi)) throw std::invalid_argument("rule phi must be an integer");
    return attack(static_cast<long>(phi));
  }
  if (kind == "table") {
    std::string_view values = args;
    double tail = 1.0;
    if (const auto semi = args.find(';'); semi != std::string_view::npos) {
      values = args.substr(0, semi);
      std::string_view rest = args.substr(semi + 1);
      if (rest.substr(0, 5) != "tail=") {
        throw std::invalid_argument("rule table: expected ';tail=<p>' after the values");
      }
      tail = parse_number(rest.substr(5), "rule tail");
    }
    std::vector<double> table;
    for (std::string_view item : split(values, ',')) {
      table.push_back(parse_number(item, "rule table[" + std::to_string(table.size()) + "]"));
    }
    return FailureRule::table(std::move(table), tail);
  }
  throw std::invalid_argument("rule: unknown kind '" + std::string(kind) +
                              "' (expected indep, attack or table)");
}

double FailureRule::probability(std::size_t degree) const noexcept {
  return std::visit(overloaded{
                        [](const IndependentFailure& r) { return r.q; },
                        [degree](const DegreeTableFailure& r) {
                          return degree < r.table.size() ? r.table[degree] : r.tail;
                        },
                        [degree](const ThresholdAttack& r) {
                          return static_cast<long>(degree) > r.phi ? 1.0 : 0.0;
                        },
                    },
                    kind_);
}

bool FailureRule::is_deterministic() const noexcept {
  return std::holds_alternative<ThresholdAttack>(kind_);
}

bool FailureRule::is_nondecreasing() const noexcept {
  if (const auto* t = std::get_if<DegreeTableFailure>(&kind_)) {
    return std::is_sorted(t->table.begin(), t->table.end()) && t->tail >= t->table.back();
  }
  return true;
}

bool FailureRule::is_nonincreasing() const noexcept {
  if (const auto* t = std::get_if<DegreeTableFailure>(&kind_)) {
    return std::is_sorted(t->table.rbegin(), t->table.rend()) && t->tail <= t->table.back();
  }
  if (const auto* a = std::get_if<ThresholdAttack>(&kind_)) {
    // Constant unless some degree k >= 0 exceeds phi while another does not.
    return a->phi < 0;
  }
  return true;
}

FailureRule FailureRule::as_table(std::size_t max_degree) const {
  std::vector<double> table(max_degree + 1);
  for (std::size_t k = 0; k <= max_degree; ++k) table[k] = probability(k);
  return FailureRule::table(std::move(table), probability(max_degree + 1));
}

std::string FailureRule::to_string() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{
                 [&](const IndependentFailure& r) { os << "indep:" << r.q; },
                 [&](const DegreeTableFailure& r) {
                   os << "table:";
                   for (std::size_t k = 0; k < r.table.size(); ++k) {
                     os << (k ? "," : "") << r.table[k];
                   }
                   os << ";tail=" << r.tail;
                 },
                 [&](const ThresholdAttack& r) { os << "attack:" << r.phi; },
             },
             kind_);
  return os.str();
}

FailureRule margin_rule(double mu_c, double mu, std::size_t max_degree) {
  if (!(mu > 0.0)) throw std::invalid_argument("margin rule: mean degree must be > 0");
  std::vector<double> table(max_degree + 1, 0.0);
  const auto q = [&](double k) { return std::clamp(1.0 - mu_c / mu - 1.0 / k, 0.0, 1.0); };
  for (std::size_t k = 1; k <= max_degree; ++k) table[k] = q(static_cast<double>(k));
  return FailureRule::table(std::move(table), std::clamp(1.0 - mu_c / mu, 0.0, 1.0));
}

std::size_t FailureOutcome::alive_count() const noexcept {
  return static_cast<std::size_t>(std::count(alive.begin(), alive.end(), std::uint8_t{1}));
}

FailureOutcome apply_failures(const SpatialGraph& graph, const FailureRule& rule, Seed seed) {
  FailureOutcome out{Mask(graph.size(), 1), rule, seed};
  const auto& degrees = graph.degrees();
  if (rule.is_deterministic()) {
    for (std::size_t i = 0; i < graph.size(); ++i) {
      out.alive[i] = rule.probability(degrees[i]) < 1.0 ? 1 : 0;
    }
    return out;
  }
  const CounterStream stream(seed, Stream::failures);
  for (std::size_t i = 0; i < graph.size(); ++i) {
    if (stream.uniform(i) < rule.probability(degrees[i])) out.alive[i] = 0;
  }
  return out;
}

double thinning_check(const SpatialGraph& graph, double q, Seed seed) {
  const FailureOutcome outcome = apply_failures(graph, FailureRule::independent(q), seed);
  return static_cast<double>(outcome.alive_count()) / graph.region().area();
}

}  // namespace geonet
