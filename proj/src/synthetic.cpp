#include "argus/synthetic.hpp"

#include <algorithm>
#include <random>

#include "argus/error.hpp"

namespace argus::synth {

using arg::Argument;
using arg::Move;
using dialogue::Scenario;

eval::TraceMap Cohort::traces() const {
  eval::TraceMap out;
  for (const auto& p : participants) out.emplace(p.id, p.trace);
  return out;
}

std::vector<Argument> probe_arguments(const Scenario& scenario) {
  std::vector<Argument> out;
  auto add = [&](Argument a) {
    if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(std::move(a));
  };
  for (const auto& f : scenario.agent_kb) {
    Argument a({f}, f);
    if (arg::is_valid_argument(a)) add(std::move(a));
  }
  for (const auto& p : scenario.perspectives) {
    for (auto& a : arg::minimal_supports(scenario.agent_kb, p.formula)) add(std::move(a));
  }
  return out;
}

namespace {

template <typename T>
const T& pick(const std::vector<T>& items, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> index(0, items.size() - 1);
  return items[index(rng)];
}

// Upper half of the scale when the argument holds in the true model, lower
// half otherwise.
const dialogue::TrustLevel& choose_trust(const std::vector<dialogue::TrustLevel>& levels,
                                         bool holds, std::mt19937_64& rng) {
  std::vector<dialogue::TrustLevel> sorted = levels;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.tau > b.tau; });
  const std::size_t half = std::max<std::size_t>(1, sorted.size() / 2);
  const std::size_t lo = holds ? 0 : sorted.size() - half;
  std::uniform_int_distribution<std::size_t> index(lo, lo + half - 1);
  const double tau = sorted[index(rng)].tau;
  return *std::find_if(levels.begin(), levels.end(),
                       [&](const auto& l) { return l.tau == tau; });
}

Participant run_participant(const Scenario& scenario, const CohortOptions& options,
                            const std::vector<Argument>& probes, std::size_t index,
                            std::vector<eval::RoundRecord>& records) {
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed),
                    static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  const double gamma = pick(options.gammas, rng);
  const int rounds = std::min(pick(options.rounds, rng), scenario.max_rounds);
  std::uniform_int_distribution<std::uint64_t> model_index(0, scenario.vocab.model_count() - 1);
  const logic::Model truth(scenario.vocab, model_index(rng));

  Participant p{options.id_prefix + std::to_string(index + 1), gamma, truth.id(),
                {scenario.name, scenario.vocab, {}, {}}};
  const auto perspectives = scenario.perspective_formulas();
  const trust::WeightingParams own{.gamma = gamma};
  const belief::UpdateRule rule = belief::UpdateRule::proposed();
  belief::ModelDistribution mind = belief::uniform_prior(scenario.vocab);
  belief::ModelDistribution framework = mind;
  std::uint32_t t = 0;

  auto apply = [&](Move move) {
    mind = belief::apply_move(mind, move, rule, own).distribution;
    if (options.agent_policy) {
      framework =
          belief::apply_move(framework, move, scenario.rule, scenario.weighting()).distribution;
    }
    p.trace.moves.push_back(std::move(move));
  };

  for (int r = 1; r <= rounds; ++r) {
    std::optional<Argument> incoming;
    if (options.agent_policy) {
      try {
        incoming = dialogue::select_agent_argument(framework, scenario, p.trace);
      } catch (const NoArgumentAvailable&) {
        break;
      }
    } else {
      std::vector<Argument> fresh;
      for (const auto& a : probes) {
        const bool used = std::any_of(p.trace.moves.begin(), p.trace.moves.end(),
                                      [&](const Move& m) { return m.argument() == a; });
        if (!used) fresh.push_back(a);
      }
      if (fresh.empty()) break;
      incoming = pick(fresh, rng);
    }

    const auto& level =
        choose_trust(scenario.trust_levels, arg::model_entails_argument(truth, *incoming), rng);
    apply(Move(std::move(*incoming), arg::Source::kAgent, ++t, arg::Annotation::trust(level.tau)));

    if (unit(rng) < options.counter_rate) {
      std::vector<std::size_t> honest;
      for (std::size_t i = 0; i < scenario.human_pool.size(); ++i) {
        const auto& premises = scenario.human_pool[i].argument.premises();
        if (std::all_of(premises.begin(), premises.end(),
                        [&](const logic::Formula& f) { return logic::eval(truth, f); })) {
          honest.push_back(i);
        }
      }
      if (!honest.empty()) {
        const auto& entry = scenario.human_pool[pick(honest, rng)];
        apply(Move(entry.argument, arg::Source::kHuman, ++t,
                   arg::Annotation::certainty(entry.certainty)));
      }
    }

    auto ranking = belief::rank_perspectives(mind, perspectives);
    for (std::size_t k = 0; k + 1 < ranking.size(); ++k) {
      if (unit(rng) < options.ranking_noise) std::swap(ranking[k], ranking[k + 1]);
    }
    p.trace.rankings.push_back(ranking);
    records.push_back({p.id, r, level.tau, ranking, {}});
  }
  return p;
}

}  // namespace

Cohort generate_cohort(const Scenario& scenario, const CohortOptions& options) {
  if (options.gammas.empty() || options.rounds.empty()) {
    throw DomainError("cohort needs at least one gamma and one round count");
  }
  for (double g : options.gammas) {
    if (!(g >= trust::kMinInvertibleGamma && g <= 1.0)) {
      throw DomainError("participant gamma " + std::to_string(g) + " is not invertible");
    }
  }
  for (int r : options.rounds) {
    if (r < 1) throw DomainError("round counts must be positive");
  }
  scenario.validate();
  const auto probes = probe_arguments(scenario);
  Cohort cohort;
  for (std::size_t i = 0; i < options.participants; ++i) {
    cohort.participants.push_back(run_participant(scenario, options, probes, i, cohort.records));
  }
  return cohort;
}

}  // namespace argus::synth
