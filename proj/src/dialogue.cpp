#include "argus/dialogue.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>

namespace argus::dialogue {

std::vector<TrustLevel> default_trust_levels() {
  return {{"Almost Complete Trust", 0.9},
          {"High Trust", 0.7},
          {"Average Trust", 0.5},
          {"Low Trust", 0.2}};
}

const std::vector<CertaintyLevel>& certainty_levels() {
  static const std::vector<CertaintyLevel> levels = {
      {"High Certainty", 0.9},
      {"Moderate Certainty", 0.7},
      {"Neutral Uncertainty", 0.5},
      {"Moderate Uncertainty", 0.3},
      {"High Uncertainty", 0.1},
  };
  return levels;
}

bool is_certainty_level(double p) {
  const auto& levels = certainty_levels();
  return std::any_of(levels.begin(), levels.end(),
                     [&](const CertaintyLevel& l) { return l.probability == p; });
}

void Scenario::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw SchemaError("gamma must lie in (0, 1]");
  if (max_rounds < 1) throw SchemaError("max_rounds must be at least 1");
  if (perspectives.empty()) throw SchemaError("scenario needs at least one perspective");
  for (std::size_t i = 0; i < perspectives.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (perspectives[i].formula == perspectives[j].formula) {
        throw SchemaError("perspectives[" + std::to_string(i) + "] repeats perspectives[" +
                          std::to_string(j) + "]");
      }
    }
  }
  if (trust_levels.empty()) throw SchemaError("scenario needs at least one trust level");
  for (std::size_t i = 0; i < trust_levels.size(); ++i) {
    const double tau = trust_levels[i].tau;
    if (!(tau >= 0.0 && tau <= 1.0)) {
      throw SchemaError("trust_levels[" + std::to_string(i) + "].tau outside [0, 1]");
    }
    if (i > 0 && !(tau < trust_levels[i - 1].tau)) {
      throw SchemaError("trust levels must be strictly decreasing in tau");
    }
  }
  for (std::size_t i = 0; i < human_pool.size(); ++i) {
    if (!is_certainty_level(human_pool[i].certainty)) {
      throw SchemaError("human_pool[" + std::to_string(i) +
                        "].certainty must be one of 0.9, 0.7, 0.5, 0.3, 0.1");
    }
  }
}

std::vector<Formula> Scenario::perspective_formulas() const {
  std::vector<Formula> out;
  out.reserve(perspectives.size());
  for (const auto& p : perspectives) out.push_back(p.formula);
  return out;
}

bool is_permutation_of(const std::vector<std::size_t>& order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (auto i : order) {
    if (i >= n || seen[i]) return false;
    seen[i] = true;
  }
  return true;
}

std::vector<Round> rounds_of(const DialogueTrace& trace, int max_rounds,
                             std::size_t perspective_count) {
  std::vector<Round> rounds;
  for (std::size_t i = 0; i < trace.moves.size(); ++i) {
    const Move& move = trace.moves[i];
    if (!(move.argument().vocabulary() == trace.vocab)) {
      throw MalformedTrace("move " + std::to_string(i) + " uses a different vocabulary");
    }
    if (i > 0 && move.timestep() <= trace.moves[i - 1].timestep()) {
      throw MalformedTrace("timesteps must be strictly increasing (move " + std::to_string(i) +
                           ", t=" + std::to_string(move.timestep()) + ")");
    }
    if (move.source() == arg::Source::kAgent) {
      rounds.push_back({i, std::nullopt});
    } else {
      if (rounds.empty()) {
        throw MalformedTrace("human move at t=" + std::to_string(move.timestep()) +
                             " precedes any agent argument");
      }
      if (rounds.back().human_move) {
        throw MalformedTrace("two human moves in one round at t=" +
                             std::to_string(move.timestep()));
      }
      rounds.back().human_move = i;
    }
  }
  if (static_cast<long long>(rounds.size()) > max_rounds) {
    throw MalformedTrace("trace has " + std::to_string(rounds.size()) +
                         " rounds, more than the allowed " + std::to_string(max_rounds));
  }
  if (trace.rankings.size() > rounds.size()) {
    throw MalformedTrace("more rankings than rounds");
  }
  for (std::size_t r = 0; r < trace.rankings.size(); ++r) {
    const auto& ranking = trace.rankings[r];
    const std::size_t n = perspective_count ? perspective_count : ranking.size();
    if (!is_permutation_of(ranking, n)) {
      throw MalformedTrace("ranking for round " + std::to_string(r + 1) +
                           " is not a permutation of " + std::to_string(n) + " perspectives");
    }
  }
  return rounds;
}

namespace {

ReplayResult replay_validated(const DialogueTrace& trace, const UpdateRule& rule,
                              const trust::WeightingParams& params,
                              const belief::UpdateOptions& options) {
  ReplayResult result;
  result.distributions.push_back(belief::uniform_prior(trace.vocab));
  for (const Move& move : trace.moves) {
    if (move.source() == arg::Source::kHuman) {
      bool valid = false;
      try {
        valid = arg::is_valid_argument(move.argument());
      } catch (const PremiseSetTooLarge&) {
      }
      if (!valid) {
        result.warnings.push_back("t=" + std::to_string(move.timestep()) + ": human argument " +
                                  arg::to_string(move.argument()) + " is not a valid argument");
      }
    }
    try {
      auto step = belief::apply_move(result.distributions.back(), move, rule, params, options);
      result.distributions.push_back(std::move(step.distribution));
      result.p_used.push_back(step.p_used);
    } catch (const DegenerateUpdate& e) {
      throw e.at_timestep(move.timestep());
    }
  }
  return result;
}

}  // namespace

ReplayResult replay(const DialogueTrace& trace, const UpdateRule& rule,
                    const trust::WeightingParams& params, const belief::UpdateOptions& options) {
  rounds_of(trace, INT_MAX);
  return replay_validated(trace, rule, params, options);
}

ReplayResult replay(const DialogueTrace& trace, const Scenario& scenario) {
  if (!(trace.vocab == scenario.vocab)) {
    throw MalformedTrace("trace vocabulary differs from the scenario's");
  }
  rounds_of(trace, scenario.max_rounds, scenario.perspectives.size());
  return replay_validated(trace, scenario.rule, scenario.weighting(), {});
}

std::vector<ModelDistribution> round_distributions(const ReplayResult& result,
                                                   const std::vector<Round>& rounds) {
  std::vector<ModelDistribution> out;
  out.reserve(rounds.size());
  for (const auto& round : rounds) {
    const std::size_t last = round.human_move.value_or(round.agent_move);
    out.push_back(result.distributions.at(last + 1));
  }
  return out;
}

Argument select_agent_argument(const ModelDistribution& d, const Scenario& scenario,
                               const DialogueTrace& history) {
  const Vocabulary& vocab = scenario.vocab;
  if (!(d.vocabulary() == vocab)) throw VocabularyMismatch();

  logic::ModelSet agent_models = logic::models_of_all(scenario.agent_kb, vocab);
  if (agent_models.empty()) agent_models = logic::ModelSet(vocab, true);
  const double agent_total = static_cast<double>(agent_models.count());

  std::vector<Argument> candidates;
  for (const auto& perspective : scenario.perspectives) {
    for (auto& a : arg::minimal_supports(scenario.agent_kb, perspective.formula)) {
      if (std::find(candidates.begin(), candidates.end(), a) != candidates.end()) continue;
      const bool used = std::any_of(history.moves.begin(), history.moves.end(),
                                    [&](const Move& m) { return m.argument() == a; });
      if (!used) candidates.push_back(std::move(a));
    }
  }

  std::optional<std::size_t> best;
  double best_shortfall = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const logic::ModelSet support = arg::consistent_models(candidates[i]);
    const double own = static_cast<double>((support & agent_models).count()) / agent_total;
    const double shortfall = own - d.mass(support);
    if (!best || shortfall > best_shortfall) {
      best = i;
      best_shortfall = shortfall;
    }
  }
  if (!best) throw NoArgumentAvailable();
  return candidates[*best];
}

HumanResponse simulated_human_respond(const Model& ground_truth, const Argument& incoming,
                                      const std::vector<PoolEntry>& pool,
                                      const std::vector<TrustLevel>& trust_levels) {
  if (trust_levels.empty()) throw DomainError("no trust levels configured");
  const auto by_tau = [](const TrustLevel& a, const TrustLevel& b) { return a.tau < b.tau; };
  HumanResponse response{
      arg::model_entails_argument(ground_truth, incoming)
          ? *std::max_element(trust_levels.begin(), trust_levels.end(), by_tau)
          : *std::min_element(trust_levels.begin(), trust_levels.end(), by_tau),
      std::nullopt};
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const auto& premises = pool[i].argument.premises();
    if (std::all_of(premises.begin(), premises.end(),
                    [&](const Formula& f) { return logic::eval(ground_truth, f); })) {
      response.counter_index = i;
      break;
    }
  }
  return response;
}

std::vector<std::size_t> ground_truth_ranking(const Model& ground_truth,
                                              const std::vector<Perspective>& perspectives) {
  std::vector<std::size_t> out;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < perspectives.size(); ++i) {
      if (logic::eval(ground_truth, perspectives[i].formula) == (pass == 0)) out.push_back(i);
    }
  }
  return out;
}

SimulationResult simulate_dialogue(const Scenario& scenario, const Model& ground_truth,
                                   std::optional<int> rounds) {
  const int total_rounds = rounds.value_or(scenario.max_rounds);
  if (total_rounds > scenario.max_rounds) {
    throw DomainError("simulation longer than the scenario's max_rounds");
  }
  const auto params = scenario.weighting();
  SimulationResult sim{{scenario.name, scenario.vocab, {}, {}},
                       {belief::uniform_prior(scenario.vocab)}};
  std::uint32_t t = 0;
  for (int r = 0; r < total_rounds; ++r) {
    std::optional<Argument> incoming;
    try {
      incoming = select_agent_argument(sim.distributions.back(), scenario, sim.trace);
    } catch (const NoArgumentAvailable&) {
      break;
    }
    const HumanResponse response = simulated_human_respond(
        ground_truth, *incoming, scenario.human_pool, scenario.trust_levels);

    Move agent_move(std::move(*incoming), arg::Source::kAgent, ++t,
                    arg::Annotation::trust(response.trust.tau));
    sim.distributions.push_back(
        belief::apply_move(sim.distributions.back(), agent_move, scenario.rule, params)
            .distribution);
    sim.trace.moves.push_back(std::move(agent_move));

    if (response.counter_index) {
      const PoolEntry& entry = scenario.human_pool[*response.counter_index];
      Move human_move(entry.argument, arg::Source::kHuman, ++t,
                      arg::Annotation::certainty(entry.certainty));
      sim.distributions.push_back(
          belief::apply_move(sim.distributions.back(), human_move, scenario.rule, params)
              .distribution);
      sim.trace.moves.push_back(std::move(human_move));
    }
    sim.trace.rankings.push_back(ground_truth_ranking(ground_truth, scenario.perspectives));
  }
  return sim;
}

}  // namespace argus::dialogue
