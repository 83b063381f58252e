#pragma once

// Scenarios, dialogue traces, replay of a trace through the update rules,
// the agent's argument-selection policy and a simulated human participant.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "argus/argument.hpp"
#include "argus/belief.hpp"
#include "argus/logic.hpp"
#include "argus/trust.hpp"

namespace argus::dialogue {

using arg::Argument;
using arg::Move;
using belief::ModelDistribution;
using belief::UpdateRule;
using logic::Formula;
using logic::Model;
using logic::Vocabulary;

struct TrustLevel {
  std::string label;
  double tau;
  friend bool operator==(const TrustLevel&, const TrustLevel&) = default;
};

// Almost complete / high / average / low trust: 0.9, 0.7, 0.5, 0.2.
std::vector<TrustLevel> default_trust_levels();

struct CertaintyLevel {
  std::string label;
  double probability;
};

// High certainty 0.9 down to high uncertainty 0.1.
const std::vector<CertaintyLevel>& certainty_levels();
bool is_certainty_level(double p);

// A counterargument the human may pick, with its declared certainty and the
// linguistic cue shown alongside it.
struct PoolEntry {
  Argument argument;
  double certainty;
  std::string cue;
};

struct Perspective {
  std::string label;
  Formula formula;
};

struct Scenario {
  std::string name;
  Vocabulary vocab;
  std::vector<Formula> agent_kb;
  std::vector<PoolEntry> human_pool;
  std::vector<Perspective> perspectives;
  std::vector<TrustLevel> trust_levels = default_trust_levels();
  double gamma = 0.7;
  UpdateRule rule = UpdateRule::proposed();
  int max_rounds = 3;

  // Throws SchemaError if perspectives repeat, trust levels are not strictly
  // decreasing in tau, certainties are off the five-level scale, gamma lies
  // outside (0, 1] or max_rounds < 1.
  void validate() const;

  trust::WeightingParams weighting() const { return {.gamma = gamma}; }
  std::vector<Formula> perspective_formulas() const;
};

struct DialogueTrace {
  std::string scenario;
  Vocabulary vocab;
  std::vector<Move> moves;
  // Human-reported ordering of perspective indices (most likely first), one
  // per completed round.
  std::vector<std::vector<std::size_t>> rankings;
};

// A round is an agent move optionally followed by the human's counterargument.
struct Round {
  std::size_t agent_move;
  std::optional<std::size_t> human_move;
};

// Splits the moves into rounds. Throws MalformedTrace on non-increasing
// timesteps, a round that does not open with an agent move, two human moves
// in a row, more rounds than `max_rounds`, more rankings than rounds or a
// ranking that is not a permutation of `perspective_count` indices
// (`perspective_count` = 0 skips the size check).
std::vector<Round> rounds_of(const DialogueTrace& trace, int max_rounds,
                             std::size_t perspective_count = 0);

bool is_permutation_of(const std::vector<std::size_t>& order, std::size_t n);

struct ReplayResult {
  // The prior followed by the distribution after each move.
  std::vector<ModelDistribution> distributions;
  std::vector<double> p_used;
  std::vector<std::string> warnings;

  const ModelDistribution& final() const { return distributions.back(); }
};

// Applies every move in order. DegenerateUpdate is rethrown carrying the
// offending move's timestep. Human arguments that are not valid arguments are
// still applied and reported in `warnings`.
ReplayResult replay(const DialogueTrace& trace, const UpdateRule& rule,
                    const trust::WeightingParams& params, const belief::UpdateOptions& options = {});
ReplayResult replay(const DialogueTrace& trace, const Scenario& scenario);

// Distribution at the close of each round (after its last move).
std::vector<ModelDistribution> round_distributions(const ReplayResult& result,
                                                   const std::vector<Round>& rounds);

// Candidate arguments are the minimal supports in the agent's knowledge base
// for each perspective. The policy picks the one whose consistent models fall
// furthest short of the agent's own belief in it, where the agent's own
// belief is uniform over the models of its knowledge base (or over all models
// when that base is inconsistent). Arguments already in `history` are never
// repeated; earlier candidates win ties. Throws NoArgumentAvailable.
Argument select_agent_argument(const ModelDistribution& d, const Scenario& scenario,
                               const DialogueTrace& history);

struct HumanResponse {
  TrustLevel trust;
  std::optional<std::size_t> counter_index;
};

// Highest trust level if the ground truth satisfies the incoming argument,
// lowest otherwise; the counterargument is the first pool entry whose premises
// all hold in the ground truth.
HumanResponse simulated_human_respond(const Model& ground_truth, const Argument& incoming,
                                      const std::vector<PoolEntry>& pool,
                                      const std::vector<TrustLevel>& trust_levels);

// Ordering a participant who knows `ground_truth` would report: perspectives
// true in it first, index order otherwise.
std::vector<std::size_t> ground_truth_ranking(const Model& ground_truth,
                                              const std::vector<Perspective>& perspectives);

struct SimulationResult {
  DialogueTrace trace;
  std::vector<ModelDistribution> distributions;
};

// Closed-loop dialogue between the agent policy and the simulated human for
// up to `rounds` rounds (scenario.max_rounds when unset), stopping early when
// the agent runs out of arguments.
SimulationResult simulate_dialogue(const Scenario& scenario, const Model& ground_truth,
                                   std::optional<int> rounds = std::nullopt);

}  // namespace argus::dialogue
