#pragma once

// Comparing framework rankings with the rankings participants report:
// per-round Spearman correlation, gamma personalization and the comparison
// of update rules over a cohort.

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "argus/belief.hpp"
#include "argus/dialogue.hpp"
#include "argus/statistics.hpp"

namespace argus::eval {

using belief::UpdateRule;
using dialogue::DialogueTrace;
using logic::Formula;

struct RoundRecord {
  std::string participant;
  int round = 1;  // 1-based
  double trust = 0.0;
  std::vector<std::size_t> human_ranking;
  // Filled in by the evaluation routines.
  std::vector<std::size_t> framework_ranking;
};

using TraceMap = std::map<std::string, DialogueTrace>;

enum class Variant { kUpperBound, kPersonalization1, kPersonalization2 };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

// 0.1, 0.2, ..., 0.9
std::vector<double> default_gamma_grid();

struct GammaFit {
  std::string participant;
  double gamma = 0.0;
  std::vector<int> fit_rounds;
  std::vector<int> eval_rounds;
  double fit_rho = 0.0;
  double eval_rho = 0.0;
};

// Framework orderings at the close of each round of `trace` under `rule`.
std::vector<std::vector<std::size_t>> framework_rankings(const DialogueTrace& trace,
                                                         std::span<const Formula> perspectives,
                                                         const UpdateRule& rule, double gamma);

// Rounds used for fitting and for evaluation when a participant completed
// `rounds` rounds. Throws InsufficientRounds.
std::pair<std::vector<int>, std::vector<int>> split_rounds(Variant variant, int rounds);

// Per participant (in id order): replays the trace under the proposed rule
// for every usable gamma of `grid` (values below the inversion threshold are
// skipped), scores each by mean rho over the fit rounds and keeps the best,
// the smaller gamma winning ties. eval_rho is the mean rho of the chosen gamma
// over the evaluation rounds.
std::vector<GammaFit> fit_gamma(const std::vector<RoundRecord>& records, const TraceMap& traces,
                                std::span<const Formula> perspectives, Variant variant,
                                std::vector<double> grid = default_gamma_grid());

inline constexpr double kHighCorrelation = 0.75;
inline constexpr std::size_t kHistogramBins = 8;

struct MethodSummary {
  UpdateRule rule;
  std::vector<double> rhos;
  // Bins of width 0.25 over [-1, 1]; the last bin includes 1.
  std::array<std::size_t, kHistogramBins> histogram{};
  // Share of rho values in [0.75, 1].
  double high_fraction = 0.0;
  double mean_rho = 0.0;
  // Participants whose trace could not be replayed, with the reason.
  std::vector<std::pair<std::string, std::string>> failures;
};

// Replays every participant's trace under each rule with `gamma` and
// correlates the per-round framework ranking with the recorded human ranking.
// Throws DomainError for an empty cohort.
std::vector<MethodSummary> evaluate_methods(const std::vector<RoundRecord>& records,
                                            const TraceMap& traces,
                                            std::span<const Formula> perspectives,
                                            const std::vector<UpdateRule>& methods, double gamma);

struct TrustTest {
  std::string label;  // e.g. "group B, round 2 vs 3"
  std::size_t participants = 0;
  std::optional<stats::TTestResult> two_sided;
  std::optional<stats::TTestResult> greater;
  std::string note;
};

// Paired t-tests on trust: two-round participants compare rounds 1 and 2,
// three-round participants compare 1 vs 2 and 2 vs 3.
std::vector<TrustTest> trust_tests(const std::vector<RoundRecord>& records);

// CSV with header participant_id,round,trust,human_ranking; the ranking is a
// quoted comma-joined list of perspective indices, most likely first.
std::vector<RoundRecord> read_records_csv(const std::filesystem::path& path);
std::vector<RoundRecord> parse_records_csv(const std::string& text);
std::string format_records_csv(const std::vector<RoundRecord>& records);

// Reads every *.json trace in `dir`, keyed by file stem.
TraceMap read_trace_dir(const std::filesystem::path& dir);

}  // namespace argus::eval
