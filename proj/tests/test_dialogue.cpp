#include <doctest.h>

#include <climits>

#include "argus/dialogue.hpp"
#include "argus/error.hpp"
#include "argus/serialization.hpp"
#include "support/oracle.hpp"

using namespace argus;
using namespace argus::dialogue;
using arg::Annotation;
using arg::Source;

namespace {

const std::filesystem::path kScenarios = ARGUS_SCENARIO_DIR;

Scenario example() { return io::load_scenario(kScenarios / "example.json"); }
DialogueTrace example_trace() { return io::load_trace(kScenarios / "example_trace.json"); }

Argument arg_of(const Vocabulary& v, std::vector<const char*> premises, const char* claim) {
  std::vector<Formula> ps;
  for (const char* p : premises) ps.push_back(logic::parse_formula(p, v));
  return Argument(ps, logic::parse_formula(claim, v));
}

// Two atoms, an agent that knows a, b and a -> b, and five rounds to play.
Scenario convergence_scenario() {
  Scenario s;
  s.name = "convergence";
  s.vocab = Vocabulary({"a", "b"});
  for (const char* f : {"a", "b", "a -> b", "a & b"}) {
    s.agent_kb.push_back(logic::parse_formula(f, s.vocab));
  }
  s.human_pool.push_back({arg_of(s.vocab, {"b"}, "b"), 0.7, "fairly sure"});
  for (const char* f : {"a & b", "a & !b", "!a & b", "!a & !b"}) {
    s.perspectives.push_back({f, logic::parse_formula(f, s.vocab)});
  }
  s.max_rounds = 5;
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("rounds split on agent moves") {
  const auto t = example_trace();
  const auto rounds = rounds_of(t, 3, 4);
  REQUIRE(rounds.size() == 1);
  CHECK(rounds[0].agent_move == 0);
  CHECK(rounds[0].human_move == 1);
}

TEST_CASE("malformed traces") {
  const auto base = example_trace();
  auto t = base;
  std::swap(t.moves[0], t.moves[1]);
  CHECK_THROWS_AS(rounds_of(t, 3), MalformedTrace);

  t = base;
  t.moves.push_back(t.moves[1]);
  CHECK_THROWS_AS(rounds_of(t, 3), MalformedTrace);

  t = base;
  t.moves.push_back(Move(t.moves[1].argument(), Source::kHuman, 9, Annotation::certainty(0.5)));
  CHECK_THROWS_AS(rounds_of(t, 3), MalformedTrace);

  t = base;
  t.rankings = {{0, 0, 1, 2}};
  CHECK_THROWS_AS(rounds_of(t, 3, 4), MalformedTrace);
  t.rankings = {{0, 1, 2, 3}, {0, 1, 2, 3}};
  CHECK_THROWS_AS(rounds_of(t, 3, 4), MalformedTrace);

  CHECK_THROWS_AS(rounds_of(base, 0), MalformedTrace);
}

TEST_CASE("replaying the worked trace") {
  const auto result = replay(example_trace(), example());
  REQUIRE(result.distributions.size() == 3);
  const auto& d = result.final();
  CHECK(std::abs(d[3] - 0.083) <= 0.001);
  CHECK(std::abs(d[1] - 0.017) <= 0.001);
  CHECK(std::abs(d[2] - 0.45) <= 1e-12);
  CHECK(std::abs(d[0] - 0.45) <= 1e-12);
  CHECK(result.warnings.empty());
}

TEST_CASE("baseline 2 at gamma 1 matches the oracle chain") {
  const auto result = replay(example_trace(), belief::UpdateRule::baseline2(), {.gamma = 1.0});
  auto expected = oracle::bayesian({0.25, 0.25, 0.25, 0.25}, {false, false, false, true}, 0.6);
  expected = oracle::bayesian(expected, {true, false, true, false}, 0.9);
  for (std::size_t m = 0; m < 4; ++m) {
    CHECK(result.final()[m] == doctest::Approx(expected[m]).epsilon(1e-12));
  }
}

TEST_CASE("degenerate replays name the timestep") {
  const auto t = io::load_trace(kScenarios / "degenerate_trace.json");
  try {
    replay(t, belief::UpdateRule::proposed(), {.gamma = 0.7});
    FAIL("expected a degenerate update");
  } catch (const DegenerateUpdate& e) {
    CHECK(e.timestep() == 2);
  }
}

TEST_CASE("invalid human arguments are applied with a warning") {
  auto t = example_trace();
  const auto& v = t.vocab;
  t.moves[1] = Move(arg_of(v, {"!a", "b"}, "!a"), Source::kHuman, 2, Annotation::certainty(0.9));
  const auto result = replay(t, belief::UpdateRule::proposed(), {.gamma = 0.85});
  CHECK(result.warnings.size() == 1);
}

TEST_CASE("the agent opens with its argument for the first perspective") {
  const auto s = example();
  const DialogueTrace empty{s.name, s.vocab, {}, {}};
  const auto a = select_agent_argument(belief::uniform_prior(s.vocab), s, empty);
  CHECK(a == arg_of(s.vocab, {"a", "a -> b"}, "a & b"));
  DialogueTrace used = empty;
  used.moves.push_back(Move(a, Source::kAgent, 1, Annotation::trust(0.6)));
  CHECK_THROWS_AS(select_agent_argument(belief::uniform_prior(s.vocab), s, used),
                  NoArgumentAvailable);
}

TEST_CASE("the simulated human") {
  const auto s = example();
  const auto a = arg_of(s.vocab, {"a", "a -> b"}, "a & b");
  const auto yes = simulated_human_respond(Model(s.vocab, 3), a, s.human_pool, s.trust_levels);
  CHECK(yes.trust.tau == 0.9);
  CHECK_FALSE(yes.counter_index);
  const auto no = simulated_human_respond(Model(s.vocab, 0), a, s.human_pool, s.trust_levels);
  CHECK(no.trust.tau == 0.2);
  CHECK(no.counter_index == 0);
  CHECK(ground_truth_ranking(Model(s.vocab, 2), s.perspectives) ==
        std::vector<std::size_t>{2, 0, 1, 3});
}

TEST_CASE("closed-loop dialogues never repeat and converge on the truth") {
  const auto s = convergence_scenario();
  for (std::uint64_t truth = 0; truth < 4; ++truth) {
    const auto sim = simulate_dialogue(s, Model(s.vocab, truth));
    const auto& moves = sim.trace.moves;
    for (std::size_t i = 0; i < moves.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (moves[i].source() == Source::kAgent && moves[j].source() == Source::kAgent) {
          CHECK_FALSE(moves[i].argument() == moves[j].argument());
        }
      }
    }
    CHECK(sim.trace.rankings.size() <= 5);
    // The replayed trace lands on the same distribution the loop tracked.
    CHECK(replay(sim.trace, s).final() == sim.distributions.back());
    if (truth == 3) {
      // An agent whose knowledge matches the truth only ever strengthens it.
      CHECK(sim.distributions.back()[3] > 0.25);
      CHECK(sim.distributions.back().argmax() == std::vector<std::uint64_t>{3});
    }
  }
  CHECK_THROWS_AS(simulate_dialogue(s, Model(s.vocab, 0), 6), DomainError);
}

TEST_CASE("scenario validation") {
  auto s = example();
  s.perspectives.push_back(s.perspectives.front());
  CHECK_THROWS_AS(s.validate(), SchemaError);
  s = example();
  s.trust_levels = {{"x", 0.5}, {"y", 0.7}};
  CHECK_THROWS_AS(s.validate(), SchemaError);
  s = example();
  s.max_rounds = 0;
  CHECK_THROWS_AS(s.validate(), SchemaError);
  s = example();
  s.gamma = 0.0;
  CHECK_THROWS_AS(s.validate(), SchemaError);
}
