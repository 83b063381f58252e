#pragma once

// Probability distributions over the model space and the rules that revise
// them as arguments arrive.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argus/argument.hpp"
#include "argus/logic.hpp"
#include "argus/trust.hpp"

namespace argus::belief {

using arg::Argument;
using arg::Move;
using logic::Formula;
using logic::ModelSet;
using logic::Vocabulary;

inline constexpr double kNormalizationTolerance = 1e-9;

// P over the 2^n models, indexed by model id. Always normalized.
class ModelDistribution {
 public:
  // Throws InvalidDistribution unless every entry lies in [0, 1] and the
  // entries sum to 1 within kNormalizationTolerance.
  ModelDistribution(Vocabulary vocab, std::vector<double> probs);

  // Scales non-negative weights to sum to one.
  static ModelDistribution from_weights(Vocabulary vocab, std::vector<double> weights);

  const Vocabulary& vocabulary() const { return vocab_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](std::size_t id) const { return probs_[id]; }
  std::size_t size() const { return probs_.size(); }

  double mass(const ModelSet& models) const;

  // Model ids holding the maximum probability.
  std::vector<std::uint64_t> argmax() const;

  friend bool operator==(const ModelDistribution&, const ModelDistribution&) = default;

 private:
  Vocabulary vocab_;
  std::vector<double> probs_;
};

ModelDistribution uniform_prior(const Vocabulary& vocab);

// Sum of P(m) over the models of f.
double degree_of_belief(const ModelDistribution& d, const Formula& f);

enum class Weighting { kProspect, kIdentity };
enum class DistributionUpdate { kBayesian, kRenormalize };

struct UpdateRule {
  Weighting weighting = Weighting::kProspect;
  DistributionUpdate update = DistributionUpdate::kBayesian;

  static UpdateRule proposed() { return {Weighting::kProspect, DistributionUpdate::kBayesian}; }
  static UpdateRule baseline1() { return {Weighting::kIdentity, DistributionUpdate::kRenormalize}; }
  static UpdateRule baseline2() { return {Weighting::kIdentity, DistributionUpdate::kBayesian}; }
  static UpdateRule baseline3() { return {Weighting::kProspect, DistributionUpdate::kRenormalize}; }

  friend bool operator==(const UpdateRule&, const UpdateRule&) = default;
};

// "proposed", "baseline1", "baseline2", "baseline3"
std::string_view to_string(const UpdateRule& rule);
UpdateRule parse_rule(std::string_view name);
// The four rules in the order baseline1, baseline2, baseline3, proposed.
std::vector<UpdateRule> all_rules();

struct UpdateOptions {
  // Raise every probability to at least `floor` (then renormalize) before an
  // update, so that no side of a partition is ever empty of mass.
  bool epsilon_floor = false;
  double floor = 1e-9;
};

// Consistent models share mass p in proportion to their prior, the rest share
// 1 - p. Throws DegenerateUpdate when a side that must receive positive mass
// has none.
ModelDistribution bayesian_update(const ModelDistribution& d, const Argument& a, double p,
                                  const UpdateOptions& options = {});
ModelDistribution bayesian_update(const ModelDistribution& d, const ModelSet& consistent,
                                  double p, const UpdateOptions& options = {});

// Consistent models are set to p each, others keep their prior, then
// everything is divided by Z. Throws DegenerateUpdate when Z = 0.
ModelDistribution baseline_update(const ModelDistribution& d, const Argument& a, double p,
                                  const UpdateOptions& options = {});
ModelDistribution baseline_update(const ModelDistribution& d, const ModelSet& consistent,
                                  double p, const UpdateOptions& options = {});

// Probability an update rule attaches to a move: the inverted trust for agent
// moves under prospect weighting, the raw trust under identity weighting, and
// the declared certainty for human moves.
double move_probability(const Move& move, const UpdateRule& rule,
                        const trust::WeightingParams& params);

struct MoveResult {
  ModelDistribution distribution;
  double p_used;
};

MoveResult apply_move(const ModelDistribution& d, const Move& move, const UpdateRule& rule,
                      const trust::WeightingParams& params, const UpdateOptions& options = {});

// Perspective indices ordered by descending degree of belief; ties (equal to
// twelve decimal places) keep ascending index order.
std::vector<std::size_t> rank_perspectives(const ModelDistribution& d,
                                           std::span<const Formula> perspectives);

}  // namespace argus::belief
