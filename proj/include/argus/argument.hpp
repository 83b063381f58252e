#pragma once

// Logical arguments <premises, claim>, counterarguments, and the annotated
// moves that make up a dialogue.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "argus/logic.hpp"

namespace argus::arg {

using logic::Formula;
using logic::Model;
using logic::ModelSet;
using logic::Vocabulary;

// Minimality is decided over subsets of the premise set, so premise sets are
// capped.
inline constexpr std::size_t kDefaultPremiseCap = 12;

// An argument as a logical object. The premise list behaves as a set:
// duplicates are dropped on construction and equality ignores order.
class Argument {
 public:
  Argument(std::vector<Formula> premises, Formula claim);

  const std::vector<Formula>& premises() const { return premises_; }
  const Formula& claim() const { return claim_; }
  const Vocabulary& vocabulary() const { return claim_.vocabulary(); }

  friend bool operator==(const Argument& lhs, const Argument& rhs);

 private:
  std::vector<Formula> premises_;
  Formula claim_;
};

// "<{a, a -> b}, b>"
std::string to_string(const Argument& a);

// All four conditions: premises in the language, premises entail the claim,
// premises consistent, and no proper subset entails the claim.
bool is_valid_argument(const Argument& a, std::size_t premise_cap = kDefaultPremiseCap);

// True iff the union of both premise sets is inconsistent. Symmetric.
bool is_counterargument(const Argument& attacker, const Argument& target);

// Every subset of `kb` that is a valid argument for `claim`, ordered by size
// and then lexicographically by knowledge-base position. A tautological claim
// yields the single argument with no premises.
std::vector<Argument> minimal_supports(std::span<const Formula> kb, const Formula& claim,
                                       std::size_t limit = std::numeric_limits<std::size_t>::max(),
                                       std::size_t premise_cap = kDefaultPremiseCap);

// m satisfies every premise and the claim.
bool model_entails_argument(const Model& m, const Argument& a);

// {m : model_entails_argument(m, a)}
ModelSet consistent_models(const Argument& a);

enum class Source { kAgent, kHuman };

std::string_view to_string(Source s);
Source parse_source(std::string_view text);

// Agent moves are annotated with the human's trust tau, human moves with the
// human's own certainty p. Both lie in [0, 1].
struct Annotation {
  enum class Kind { kTrust, kCertainty };
  Kind kind;
  double value;

  static Annotation trust(double tau) { return {Kind::kTrust, tau}; }
  static Annotation certainty(double p) { return {Kind::kCertainty, p}; }

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

// One annotated entry (A_i, x_i)^{t_i} of a dialogue trace.
class Move {
 public:
  // Throws InvalidMove when the annotation kind does not match the source or
  // the value lies outside [0, 1].
  Move(Argument argument, Source source, std::uint32_t timestep, Annotation annotation);

  const Argument& argument() const { return argument_; }
  Source source() const { return source_; }
  std::uint32_t timestep() const { return timestep_; }
  const Annotation& annotation() const { return annotation_; }

  friend bool operator==(const Move&, const Move&) = default;

 private:
  Argument argument_;
  Source source_;
  std::uint32_t timestep_;
  Annotation annotation_;
};

}  // namespace argus::arg
