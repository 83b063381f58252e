#include "argus/argument.hpp"

#include <algorithm>
#include <cmath>

namespace argus::arg {

Argument::Argument(std::vector<Formula> premises, Formula claim) : claim_(std::move(claim)) {
  for (auto& p : premises) {
    if (!(p.vocabulary() == claim_.vocabulary())) throw VocabularyMismatch();
    if (std::find(premises_.begin(), premises_.end(), p) == premises_.end()) {
      premises_.push_back(std::move(p));
    }
  }
}

bool operator==(const Argument& lhs, const Argument& rhs) {
  if (!(lhs.claim_ == rhs.claim_) || lhs.premises_.size() != rhs.premises_.size()) return false;
  return std::all_of(lhs.premises_.begin(), lhs.premises_.end(), [&](const Formula& p) {
    return std::find(rhs.premises_.begin(), rhs.premises_.end(), p) != rhs.premises_.end();
  });
}

std::string to_string(const Argument& a) {
  std::string out = "<{";
  for (std::size_t i = 0; i < a.premises().size(); ++i) {
    if (i) out += ", ";
    out += logic::to_string(a.premises()[i]);
  }
  out += "}, ";
  out += logic::to_string(a.claim());
  out += '>';
  return out;
}

namespace {

// Premise truth tables intersected over the members of `mask`.
ModelSet support_of(const std::vector<ModelSet>& tables, std::uint64_t mask,
                    const Vocabulary& vocab) {
  ModelSet out(vocab, true);
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if ((mask >> i) & 1U) out &= tables[i];
  }
  return out;
}

// Conditions (ii)-(iv) over precomputed tables. Entailment is monotone in the
// premise set, so a subset entailing the claim exists iff some subset missing
// exactly one premise entails it.
bool valid_subset(const std::vector<ModelSet>& tables, std::uint64_t mask,
                  const ModelSet& claim_models, const Vocabulary& vocab) {
  const ModelSet support = support_of(tables, mask, vocab);
  if (support.empty()) return false;
  if (!support.subset_of(claim_models)) return false;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (!((mask >> i) & 1U)) continue;
    if (support_of(tables, mask & ~(std::uint64_t{1} << i), vocab).subset_of(claim_models)) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool is_valid_argument(const Argument& a, std::size_t premise_cap) {
  const auto& premises = a.premises();
  if (premises.size() > premise_cap) throw PremiseSetTooLarge(premises.size(), premise_cap);
  const Vocabulary& vocab = a.vocabulary();
  std::vector<ModelSet> tables;
  tables.reserve(premises.size());
  for (const auto& p : premises) tables.push_back(logic::models_of(p));
  const std::uint64_t all = (std::uint64_t{1} << premises.size()) - 1;
  return valid_subset(tables, all, logic::models_of(a.claim()), vocab);
}

bool is_counterargument(const Argument& attacker, const Argument& target) {
  if (!(attacker.vocabulary() == target.vocabulary())) throw VocabularyMismatch();
  ModelSet joint = logic::models_of_all(attacker.premises(), attacker.vocabulary());
  joint &= logic::models_of_all(target.premises(), target.vocabulary());
  return joint.empty();
}

std::vector<Argument> minimal_supports(std::span<const Formula> kb, const Formula& claim,
                                       std::size_t limit, std::size_t premise_cap) {
  std::vector<Formula> base;
  for (const auto& f : kb) {
    if (!(f.vocabulary() == claim.vocabulary())) throw VocabularyMismatch();
    if (std::find(base.begin(), base.end(), f) == base.end()) base.push_back(f);
  }
  if (base.size() > premise_cap) throw PremiseSetTooLarge(base.size(), premise_cap);

  const Vocabulary& vocab = claim.vocabulary();
  std::vector<ModelSet> tables;
  for (const auto& f : base) tables.push_back(logic::models_of(f));
  const ModelSet claim_models = logic::models_of(claim);

  std::vector<Argument> out;
  const std::size_t n = base.size();
  // Combinations of each size in lexicographic index order.
  for (std::size_t k = 0; k <= n && out.size() < limit; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::uint64_t mask = 0;
      for (auto i : idx) mask |= std::uint64_t{1} << i;
      if (valid_subset(tables, mask, claim_models, vocab)) {
        std::vector<Formula> premises;
        for (auto i : idx) premises.push_back(base[i]);
        out.emplace_back(std::move(premises), claim);
        if (out.size() >= limit) break;
      }
      // Advance to the next combination.
      std::size_t pos = k;
      while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

bool model_entails_argument(const Model& m, const Argument& a) {
  if (!(m.vocabulary() == a.vocabulary())) throw VocabularyMismatch();
  return std::all_of(a.premises().begin(), a.premises().end(),
                     [&](const Formula& p) { return logic::eval(m, p); }) &&
         logic::eval(m, a.claim());
}

ModelSet consistent_models(const Argument& a) {
  ModelSet out = logic::models_of_all(a.premises(), a.vocabulary());
  out &= logic::models_of(a.claim());
  return out;
}

std::string_view to_string(Source s) { return s == Source::kAgent ? "agent" : "human"; }

Source parse_source(std::string_view text) {
  if (text == "agent") return Source::kAgent;
  if (text == "human") return Source::kHuman;
  throw InvalidMove("unknown move source '" + std::string(text) + "'");
}

Move::Move(Argument argument, Source source, std::uint32_t timestep, Annotation annotation)
    : argument_(std::move(argument)),
      source_(source),
      timestep_(timestep),
      annotation_(annotation) {
  const bool agent = source == Source::kAgent;
  if (agent && annotation.kind != Annotation::Kind::kTrust) {
    throw InvalidMove("agent moves carry a trust annotation");
  }
  if (!agent && annotation.kind != Annotation::Kind::kCertainty) {
    throw InvalidMove("human moves carry a certainty annotation");
  }
  if (!(annotation.value >= 0.0 && annotation.value <= 1.0)) {
    throw InvalidMove("annotation value must lie in [0, 1]");
  }
}

}  // namespace argus::arg
