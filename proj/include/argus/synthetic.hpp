#pragma once

// Synthetic participants for testing the evaluation pipeline. Each participant
// holds a hidden true model and a private gamma, turns every agent argument
// into a trust level, maps that level back to a probability through their own
// gamma and updates a private distribution with the proposed rule. The ranking
// they report each round is read off that private distribution, so a replay
// with the right gamma reproduces it exactly when no noise is added.

#include <cstdint>
#include <string>
#include <vector>

#include "argus/dialogue.hpp"
#include "argus/evaluation.hpp"

namespace argus::synth {

struct CohortOptions {
  std::size_t participants = 50;
  // Each participant's gamma and round count are drawn uniformly from these.
  std::vector<double> gammas{0.7};
  std::vector<int> rounds{3};
  std::uint64_t seed = 1;
  // Chance that the participant answers a round with a counterargument.
  double counter_rate = 1.0;
  // Chance of swapping each adjacent pair of the reported ranking.
  double ranking_noise = 0.0;
  // Let the agent policy pick arguments from the framework's own running
  // distribution instead of drawing them at random.
  bool agent_policy = false;
  std::string id_prefix = "p";
};

struct Participant {
  std::string id;
  double gamma;
  std::uint64_t true_model;
  dialogue::DialogueTrace trace;
};

struct Cohort {
  std::vector<Participant> participants;
  std::vector<eval::RoundRecord> records;

  eval::TraceMap traces() const;
};

// Arguments the random agent draws from: <{f}, f> for every knowledge-base
// formula that makes a valid argument on its own, then the minimal supports
// of each perspective, without repeats.
std::vector<arg::Argument> probe_arguments(const dialogue::Scenario& scenario);

// Deterministic for a given scenario and options. Participants who run out of
// fresh arguments stop early. Throws DomainError for empty gamma or round sets
// or a gamma below the inversion threshold.
Cohort generate_cohort(const dialogue::Scenario& scenario, const CohortOptions& options);

}  // namespace argus::synth
