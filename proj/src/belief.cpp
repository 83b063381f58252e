#include "argus/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace argus::belief {

namespace {

double total(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("argument probability must lie in [0, 1], got " + std::to_string(p));
  }
}

void normalize(std::vector<double>& v) {
  const double s = total(v);
  for (auto& x : v) x /= s;
}

std::vector<double> prepared(const ModelDistribution& d, const ModelSet& consistent,
                             const UpdateOptions& options) {
  if (!(consistent.vocabulary() == d.vocabulary())) throw VocabularyMismatch();
  std::vector<double> probs(d.probs().begin(), d.probs().end());
  if (options.epsilon_floor) {
    for (auto& x : probs) x = std::max(x, options.floor);
    normalize(probs);
  }
  return probs;
}

}  // namespace

ModelDistribution::ModelDistribution(Vocabulary vocab, std::vector<double> probs)
    : vocab_(std::move(vocab)), probs_(std::move(probs)) {
  vocab_.require_enumerable();
  if (probs_.size() != vocab_.model_count()) {
    throw InvalidDistribution("expected " + std::to_string(vocab_.model_count()) +
                              " probabilities, got " + std::to_string(probs_.size()));
  }
  for (double x : probs_) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw InvalidDistribution("probability " + std::to_string(x) + " outside [0, 1]");
    }
  }
  const double s = total(probs_);
  if (std::abs(s - 1.0) > kNormalizationTolerance) {
    throw InvalidDistribution("probabilities sum to " + std::to_string(s));
  }
}

ModelDistribution ModelDistribution::from_weights(Vocabulary vocab, std::vector<double> weights) {
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidDistribution("weights must be non-negative");
  }
  if (!(total(weights) > 0.0)) throw InvalidDistribution("weights sum to zero");
  normalize(weights);
  return ModelDistribution(std::move(vocab), std::move(weights));
}

double ModelDistribution::mass(const ModelSet& models) const {
  if (!(models.vocabulary() == vocab_)) throw VocabularyMismatch();
  double s = 0.0;
  for (auto id : models.ids()) s += probs_[id];
  return s;
}

std::vector<std::uint64_t> ModelDistribution::argmax() const {
  const double top = *std::max_element(probs_.begin(), probs_.end());
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] == top) out.push_back(i);
  }
  return out;
}

ModelDistribution uniform_prior(const Vocabulary& vocab) {
  vocab.require_enumerable();
  const auto n = vocab.model_count();
  return ModelDistribution(vocab, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double degree_of_belief(const ModelDistribution& d, const Formula& f) {
  if (!(f.vocabulary() == d.vocabulary())) throw VocabularyMismatch();
  return d.mass(logic::models_of(f));
}

std::string_view to_string(const UpdateRule& rule) {
  if (rule == UpdateRule::proposed()) return "proposed";
  if (rule == UpdateRule::baseline1()) return "baseline1";
  if (rule == UpdateRule::baseline2()) return "baseline2";
  return "baseline3";
}

UpdateRule parse_rule(std::string_view name) {
  if (name == "proposed") return UpdateRule::proposed();
  if (name == "baseline1") return UpdateRule::baseline1();
  if (name == "baseline2") return UpdateRule::baseline2();
  if (name == "baseline3") return UpdateRule::baseline3();
  throw SchemaError("unknown update rule '" + std::string(name) + "'");
}

std::vector<UpdateRule> all_rules() {
  return {UpdateRule::baseline1(), UpdateRule::baseline2(), UpdateRule::baseline3(),
          UpdateRule::proposed()};
}

ModelDistribution bayesian_update(const ModelDistribution& d, const ModelSet& consistent,
                                  double p, const UpdateOptions& options) {
  check_probability(p);
  std::vector<double> probs = prepared(d, consistent, options);
  double in_mass = 0.0;
  double out_mass = 0.0;
  for (std::size_t id = 0; id < probs.size(); ++id) {
    (consistent.contains(id) ? in_mass : out_mass) += probs[id];
  }
  if (p > 0.0 && in_mass == 0.0) {
    throw DegenerateUpdate("argument holds in no model with positive probability");
  }
  if (p < 1.0 && out_mass == 0.0) {
    throw DegenerateUpdate("argument holds in every model with positive probability");
  }
  for (std::size_t id = 0; id < probs.size(); ++id) {
    if (consistent.contains(id)) {
      probs[id] = in_mass > 0.0 ? probs[id] / in_mass * p : 0.0;
    } else {
      probs[id] = out_mass > 0.0 ? probs[id] / out_mass * (1.0 - p) : 0.0;
    }
  }
  normalize(probs);
  return ModelDistribution(d.vocabulary(), std::move(probs));
}

ModelDistribution bayesian_update(const ModelDistribution& d, const Argument& a, double p,
                                  const UpdateOptions& options) {
  if (!(a.vocabulary() == d.vocabulary())) throw VocabularyMismatch();
  return bayesian_update(d, arg::consistent_models(a), p, options);
}

ModelDistribution baseline_update(const ModelDistribution& d, const ModelSet& consistent,
                                  double p, const UpdateOptions& options) {
  check_probability(p);
  std::vector<double> probs = prepared(d, consistent, options);
  double z = 0.0;
  for (std::size_t id = 0; id < probs.size(); ++id) {
    z += consistent.contains(id) ? p : probs[id];
  }
  if (!(z > 0.0)) throw DegenerateUpdate("normalizing constant is zero");
  for (std::size_t id = 0; id < probs.size(); ++id) {
    probs[id] = (consistent.contains(id) ? p : probs[id]) / z;
  }
  normalize(probs);
  return ModelDistribution(d.vocabulary(), std::move(probs));
}

ModelDistribution baseline_update(const ModelDistribution& d, const Argument& a, double p,
                                  const UpdateOptions& options) {
  if (!(a.vocabulary() == d.vocabulary())) throw VocabularyMismatch();
  return baseline_update(d, arg::consistent_models(a), p, options);
}

double move_probability(const Move& move, const UpdateRule& rule,
                        const trust::WeightingParams& params) {
  const double value = move.annotation().value;
  if (move.source() == arg::Source::kHuman) return value;
  if (rule.weighting == Weighting::kIdentity) return value;
  return trust::probability_of_trust(value, params);
}

MoveResult apply_move(const ModelDistribution& d, const Move& move, const UpdateRule& rule,
                      const trust::WeightingParams& params, const UpdateOptions& options) {
  const double p = move_probability(move, rule, params);
  if (rule.update == DistributionUpdate::kBayesian) {
    return {bayesian_update(d, move.argument(), p, options), p};
  }
  return {baseline_update(d, move.argument(), p, options), p};
}

std::vector<std::size_t> rank_perspectives(const ModelDistribution& d,
                                           std::span<const Formula> perspectives) {
  if (perspectives.empty()) throw DomainError("no perspectives to rank");
  std::vector<long long> key;
  key.reserve(perspectives.size());
  for (const auto& f : perspectives) {
    key.push_back(std::llround(degree_of_belief(d, f) * 1e12));
  }
  std::vector<std::size_t> order(perspectives.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
  return order;
}

}  // namespace argus::belief
