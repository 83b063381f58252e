#include <doctest.h>

#include <random>

#include "argus/argument.hpp"
#include "support/oracle.hpp"

using namespace argus;
using namespace argus::arg;
using logic::parse_formula;

namespace {

const logic::Vocabulary& abcdef() {
  static const logic::Vocabulary v({"a", "b", "c", "d", "e", "f"});
  return v;
}

Formula f(const char* text) { return parse_formula(text, abcdef()); }

}  // namespace

TEST_CASE("arguments for c from the worked knowledge base") {
  const Argument a1({f("a"), f("b"), f("a & b -> c")}, f("c"));
  const Argument a2({f("b"), f("d"), f("d -> a"), f("a & b -> c")}, f("c"));
  CHECK(is_valid_argument(a1));
  CHECK(is_valid_argument(a2));
  // Adding a redundant premise breaks minimality.
  CHECK_FALSE(is_valid_argument(Argument({f("a"), f("b"), f("a & b -> c"), f("e")}, f("c"))));
  CHECK_FALSE(is_valid_argument(Argument({f("a"), f("!a"), f("c")}, f("c"))));
  CHECK_FALSE(is_valid_argument(Argument({f("a")}, f("c"))));
}

TEST_CASE("counterarguments") {
  const Argument a1({f("a"), f("b"), f("a & b -> c")}, f("c"));
  const Argument a2({f("f"), f("d"), f("f & d -> !b")}, f("!b"));
  const Argument a3({f("e"), f("e -> !c")}, f("!c"));
  CHECK(is_counterargument(a2, a1));
  CHECK(is_counterargument(a3, a1));
  CHECK(is_counterargument(a1, a3));
  CHECK_FALSE(is_counterargument(a2, a3));
}

TEST_CASE("premises behave as a set") {
  const Argument x({f("a"), f("a -> b"), f("a")}, f("b"));
  CHECK(x.premises().size() == 2);
  CHECK(x == Argument({f("a -> b"), f("a")}, f("b")));
  CHECK(to_string(x) == "<{a, a -> b}, b>");
}

TEST_CASE("minimal supports are enumerated by size then position") {
  const std::vector<Formula> kb{f("a"), f("a -> b"), f("b"), f("c"), f("c -> b")};
  const auto supports = minimal_supports(kb, f("b"));
  REQUIRE(supports.size() == 3);
  CHECK(supports[0] == Argument({f("b")}, f("b")));
  CHECK(supports[1] == Argument({f("a"), f("a -> b")}, f("b")));
  CHECK(supports[2] == Argument({f("c"), f("c -> b")}, f("b")));
  CHECK(minimal_supports(kb, f("b"), 1).size() == 1);
  CHECK(minimal_supports(kb, f("a | !a")).front().premises().empty());
}

TEST_CASE("premise cap") {
  std::vector<Formula> many;
  const char* names[] = {"a", "b", "c", "d", "e", "f"};
  for (const char* n : names) many.push_back(f(n));
  for (const char* n : names) many.push_back(f(n) || f("a"));
  many.push_back(f("a & b"));
  const Argument big(many, f("a"));
  CHECK_THROWS_AS(is_valid_argument(big), PremiseSetTooLarge);
  CHECK_FALSE(is_valid_argument(big, 13));
}

TEST_CASE("consistent models") {
  const auto v = logic::Vocabulary({"a", "b"});
  const Argument a({parse_formula("a", v), parse_formula("a -> b", v)}, parse_formula("b", v));
  CHECK(consistent_models(a).ids() == std::vector<std::uint64_t>{3});
  CHECK(model_entails_argument(logic::Model(v, 3), a));
  CHECK_FALSE(model_entails_argument(logic::Model(v, 2), a));
}

TEST_CASE("moves validate their annotation") {
  const Argument a({f("a")}, f("a"));
  CHECK_NOTHROW(Move(a, Source::kAgent, 1, Annotation::trust(0.6)));
  CHECK_THROWS_AS(Move(a, Source::kAgent, 1, Annotation::certainty(0.6)), InvalidMove);
  CHECK_THROWS_AS(Move(a, Source::kHuman, 1, Annotation::trust(0.6)), InvalidMove);
  CHECK_THROWS_AS(Move(a, Source::kHuman, 1, Annotation::certainty(1.2)), InvalidMove);
  CHECK_THROWS_AS(Move(a, Source::kAgent, 1, Annotation::trust(-0.1)), InvalidMove);
}

TEST_CASE("validity agrees with the four-condition oracle on random knowledge bases") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> n{"a", "b", "c", "d"};
  const logic::Vocabulary v(n);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<oracle::ExprPtr> kb;
    for (int i = 0; i < 5; ++i) kb.push_back(oracle::random_expr(rng, 4, 2));
    const auto claim = oracle::random_expr(rng, 4, 2);
    const Formula claim_f = parse_formula(oracle::print(*claim, n), v);
    for (std::uint32_t mask = 0; mask < 32; ++mask) {
      std::vector<const oracle::Expr*> ps;
      std::vector<Formula> fs;
      for (int i = 0; i < 5; ++i) {
        if ((mask >> i) & 1U) {
          ps.push_back(kb[i].get());
          fs.push_back(parse_formula(oracle::print(*kb[i], n), v));
        }
      }
      const Argument a(fs, claim_f);
      // The library drops duplicate premises; the oracle sees the same set.
      std::vector<const oracle::Expr*> unique;
      std::vector<Formula> seen;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        if (std::find(seen.begin(), seen.end(), fs[i]) == seen.end()) {
          seen.push_back(fs[i]);
          unique.push_back(ps[i]);
        }
      }
      REQUIRE(is_valid_argument(a) == oracle::valid_argument(unique, *claim, 4));
    }
  }
}
