#include <doctest.h>

#include <filesystem>

#include "argus/error.hpp"
#include "argus/evaluation.hpp"
#include "argus/serialization.hpp"
#include "argus/synthetic.hpp"

using namespace argus;
using namespace argus::eval;

namespace {

const std::filesystem::path kScenarios = ARGUS_SCENARIO_DIR;

dialogue::Scenario probe() { return io::load_scenario(kScenarios / "probe.json"); }
dialogue::Scenario venue() { return io::load_scenario(kScenarios / "venue.json"); }

}  // namespace

TEST_CASE("round splits per variant") {
  CHECK(split_rounds(Variant::kUpperBound, 3) ==
        std::pair<std::vector<int>, std::vector<int>>{{1, 2, 3}, {1, 2, 3}});
  CHECK(split_rounds(Variant::kPersonalization1, 3) ==
        std::pair<std::vector<int>, std::vector<int>>{{1, 2}, {3}});
  CHECK(split_rounds(Variant::kPersonalization1, 2) ==
        std::pair<std::vector<int>, std::vector<int>>{{1}, {2}});
  CHECK(split_rounds(Variant::kPersonalization2, 3) ==
        std::pair<std::vector<int>, std::vector<int>>{{1}, {2, 3}});
  CHECK_THROWS_AS(split_rounds(Variant::kPersonalization1, 1), InsufficientRounds);
  CHECK_THROWS_AS(split_rounds(Variant::kPersonalization2, 1), InsufficientRounds);
  CHECK_THROWS_AS(split_rounds(Variant::kUpperBound, 0), InsufficientRounds);
  CHECK(parse_variant("personalization_2") == Variant::kPersonalization2);
  CHECK_THROWS_AS(parse_variant("variant_9"), DomainError);
}

TEST_CASE("records CSV round-trips") {
  std::vector<RoundRecord> records{{"p1", 1, 0.7, {2, 0, 1, 3}, {}}, {"p1", 2, 0.9, {0, 1, 2, 3}, {}}};
  const std::string text = format_records_csv(records);
  CHECK(text.substr(0, text.find('\n')) == "participant_id,round,trust,human_ranking");
  const auto back = parse_records_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].human_ranking == records[0].human_ranking);
  CHECK(back[1].trust == 0.9);
  CHECK_THROWS_AS(parse_records_csv("participant_id,round,trust,human_ranking\np,1,0.5,\"0,0\"\n"),
                  SchemaError);
  CHECK_THROWS_AS(parse_records_csv("id,round\n"), SchemaError);
  CHECK_THROWS_AS(parse_records_csv("participant_id,round,trust,human_ranking\np,x,0.5,\"0\"\n"),
                  SchemaError);
  CHECK_THROWS_AS(read_records_csv("/nonexistent/records.csv"), IoError);
}

TEST_CASE("a participant generated at gamma 0.7 is fitted at 0.7") {
  synth::CohortOptions options;
  options.participants = 1;
  options.gammas = {0.7};
  options.rounds = {20};
  options.seed = 4;
  const auto cohort = synth::generate_cohort(probe(), options);
  const auto fits = fit_gamma(cohort.records, cohort.traces(), probe().perspective_formulas(),
                              Variant::kUpperBound);
  REQUIRE(fits.size() == 1);
  CHECK(fits[0].gamma == 0.7);
  CHECK(fits[0].fit_rho == doctest::Approx(1.0));
}

TEST_CASE("fit_gamma contract") {
  synth::CohortOptions options;
  options.participants = 6;
  options.rounds = {3};
  const auto s = venue();
  const auto cohort = synth::generate_cohort(s, options);
  const auto traces = cohort.traces();
  const auto ps = s.perspective_formulas();

  const auto single = fit_gamma(cohort.records, traces, ps, Variant::kUpperBound, {0.55});
  for (const auto& f : single) CHECK(f.gamma == 0.55);

  // Values below the inversion threshold are skipped.
  const auto low = fit_gamma(cohort.records, traces, ps, Variant::kUpperBound, {0.1, 0.2, 0.6});
  for (const auto& f : low) CHECK(f.gamma == 0.6);
  CHECK_THROWS_AS(fit_gamma(cohort.records, traces, ps, Variant::kUpperBound, {0.1}), DomainError);

  const auto p1 = fit_gamma(cohort.records, traces, ps, Variant::kPersonalization1);
  for (const auto& f : p1) {
    CHECK(f.fit_rounds == std::vector<int>{1, 2});
    CHECK(f.eval_rounds == std::vector<int>{3});
  }
  // Deterministic.
  const auto again = fit_gamma(cohort.records, traces, ps, Variant::kPersonalization1);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].gamma == again[i].gamma);
    CHECK(p1[i].eval_rho == again[i].eval_rho);
  }

  std::vector<RoundRecord> one_round;
  for (const auto& r : cohort.records) {
    if (r.round == 1) one_round.push_back(r);
  }
  CHECK_THROWS_AS(fit_gamma(one_round, traces, ps, Variant::kPersonalization1), InsufficientRounds);
  CHECK_NOTHROW(fit_gamma(one_round, traces, ps, Variant::kUpperBound));
  CHECK_THROWS_AS(fit_gamma(cohort.records, {}, ps, Variant::kUpperBound), InsufficientRounds);
}

TEST_CASE("evaluate_methods shape") {
  synth::CohortOptions options;
  options.participants = 1;
  const auto s = venue();
  const auto cohort = synth::generate_cohort(s, options);
  const auto summaries = evaluate_methods(cohort.records, cohort.traces(), s.perspective_formulas(),
                                          belief::all_rules(), 0.7);
  REQUIRE(summaries.size() == 4);
  for (const auto& m : summaries) {
    CHECK(m.rhos.size() == cohort.records.size());
    std::size_t total = 0;
    for (auto c : m.histogram) total += c;
    CHECK(total == m.rhos.size());
    CHECK(m.high_fraction >= 0.0);
    CHECK(m.high_fraction <= 1.0);
  }
  CHECK_THROWS_AS(evaluate_methods({}, {}, s.perspective_formulas(), belief::all_rules(), 0.7),
                  DomainError);
}

TEST_CASE("evaluate_methods skips traces that fail and reports them") {
  synth::CohortOptions options;
  options.participants = 3;
  const auto s = venue();
  auto cohort = synth::generate_cohort(s, options);
  auto traces = cohort.traces();
  traces.erase("p2");
  const auto summaries =
      evaluate_methods(cohort.records, traces, s.perspective_formulas(), {belief::UpdateRule::proposed()}, 0.7);
  REQUIRE(summaries[0].failures.size() == 1);
  CHECK(summaries[0].failures[0].first == "p2");
}

TEST_CASE("trust tests by round count") {
  std::vector<RoundRecord> records;
  const double two[][2] = {{0.5, 0.7}, {0.2, 0.5}, {0.5, 0.9}};
  for (int i = 0; i < 3; ++i) {
    for (int r = 0; r < 2; ++r) records.push_back({"a" + std::to_string(i), r + 1, two[i][r], {0, 1}, {}});
  }
  const double three[][3] = {{0.2, 0.5, 0.7}, {0.5, 0.5, 0.9}, {0.5, 0.7, 0.7}, {0.2, 0.7, 0.9}};
  for (int i = 0; i < 4; ++i) {
    for (int r = 0; r < 3; ++r) records.push_back({"b" + std::to_string(i), r + 1, three[i][r], {0, 1}, {}});
  }
  const auto tests = trust_tests(records);
  REQUIRE(tests.size() == 3);
  CHECK(tests[0].participants == 3);
  CHECK(tests[1].participants == 4);
  REQUIRE(tests[0].two_sided);
  CHECK(tests[0].two_sided->mean_difference == doctest::Approx(0.3));
  CHECK(tests[0].greater->p_value < tests[0].two_sided->p_value);
}

TEST_CASE("synthetic cohorts are reproducible per seed") {
  synth::CohortOptions options;
  options.participants = 5;
  options.gammas = {0.5, 0.9};
  options.rounds = {2, 3};
  options.ranking_noise = 0.3;
  const auto s = venue();
  const auto a = synth::generate_cohort(s, options);
  const auto b = synth::generate_cohort(s, options);
  CHECK(format_records_csv(a.records) == format_records_csv(b.records));
  for (std::size_t i = 0; i < a.participants.size(); ++i) {
    CHECK(io::dump_canonical(io::to_json(a.participants[i].trace)) ==
          io::dump_canonical(io::to_json(b.participants[i].trace)));
  }
  options.seed = 2;
  CHECK(format_records_csv(synth::generate_cohort(s, options).records) != format_records_csv(a.records));
  options.gammas = {0.2};
  CHECK_THROWS_AS(synth::generate_cohort(s, options), DomainError);
}
