#pragma once

// Propositional language over a finite vocabulary: formulas, models
// (possible worlds) and the model-checking based semantic relations.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "argus/error.hpp"

namespace argus::logic {

inline constexpr std::size_t kDefaultMaxAtoms = 20;
// Model ids are 64-bit, so no vocabulary may ever exceed this many atoms.
inline constexpr std::size_t kHardMaxAtoms = 62;

class Vocabulary {
 public:
  Vocabulary();
  explicit Vocabulary(std::vector<std::string> atoms, std::size_t max_atoms = kDefaultMaxAtoms);

  std::size_t size() const;
  const std::vector<std::string>& atoms() const;
  const std::string& name(std::size_t index) const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  std::size_t max_atoms() const;
  bool enumerable() const { return size() <= max_atoms(); }
  // Throws VocabularyTooLarge unless the 2^n model space may be enumerated.
  void require_enumerable() const;
  std::uint64_t model_count() const { return std::uint64_t{1} << size(); }

  friend bool operator==(const Vocabulary& lhs, const Vocabulary& rhs);

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

bool is_identifier(std::string_view text);

enum class Connective { kAtom, kNot, kAnd, kOr, kImplies, kIff };

// Immutable propositional formula. Subterms are shared, so copies are cheap.
class Formula {
 public:
  static Formula atom(const Vocabulary& vocab, std::size_t index);
  static Formula atom(const Vocabulary& vocab, std::string_view name);
  static Formula negation(Formula operand);
  static Formula binary(Connective op, Formula lhs, Formula rhs);

  Connective connective() const;
  // Valid only for atoms.
  std::size_t atom_index() const;
  // Number of direct subformulas: 0, 1 or 2.
  std::size_t arity() const;
  Formula operand(std::size_t i) const;

  const Vocabulary& vocabulary() const { return vocab_; }
  std::size_t depth() const;

  friend bool operator==(const Formula& lhs, const Formula& rhs);

 private:
  struct Node;
  Formula(std::shared_ptr<const Node> node, Vocabulary vocab);

  std::shared_ptr<const Node> node_;
  Vocabulary vocab_;
};

Formula operator!(Formula f);
Formula operator&&(Formula lhs, Formula rhs);
Formula operator||(Formula lhs, Formula rhs);
Formula implies(Formula lhs, Formula rhs);
Formula iff(Formula lhs, Formula rhs);

// Concrete syntax: identifiers, `!`/`~`, `&`, `|`, `->`, `<->`, parentheses.
// Binding strength ! > & > | > -> > <->; `->` associates to the right, the
// other binary connectives to the left. The UTF-8 symbols ¬ ∧ ∨ → ↔ are
// accepted as aliases.
Formula parse_formula(std::string_view text, const Vocabulary& vocab);

// Prints with the minimum parentheses needed to re-parse to the same tree.
std::string to_string(const Formula& f);

// A complete truth assignment. Bit k of the id is the value of atom k.
class Model {
 public:
  Model(Vocabulary vocab, std::uint64_t id);

  const Vocabulary& vocabulary() const { return vocab_; }
  std::uint64_t id() const { return id_; }
  bool value(std::size_t atom) const { return ((id_ >> atom) & 1U) != 0; }
  // e.g. "a=1 b=0"
  std::string describe() const;

  friend bool operator==(const Model& lhs, const Model& rhs) {
    return lhs.id_ == rhs.id_ && lhs.vocab_ == rhs.vocab_;
  }

 private:
  Vocabulary vocab_;
  std::uint64_t id_;
};

// Set of models over a vocabulary, stored as a bitset indexed by model id.
class ModelSet {
 public:
  explicit ModelSet(const Vocabulary& vocab, bool full = false);

  const Vocabulary& vocabulary() const { return vocab_; }
  std::uint64_t universe_size() const { return vocab_.model_count(); }

  bool contains(std::uint64_t id) const;
  void insert(std::uint64_t id);
  std::uint64_t count() const;
  bool empty() const;
  std::vector<std::uint64_t> ids() const;
  std::vector<Model> models() const;

  bool subset_of(const ModelSet& other) const;
  ModelSet& operator&=(const ModelSet& other);
  ModelSet& operator|=(const ModelSet& other);
  ModelSet complement() const;

  friend ModelSet operator&(ModelSet lhs, const ModelSet& rhs) { return lhs &= rhs; }
  friend ModelSet operator|(ModelSet lhs, const ModelSet& rhs) { return lhs |= rhs; }
  friend bool operator==(const ModelSet& lhs, const ModelSet& rhs);

  std::span<const std::uint64_t> words() const { return words_; }

 private:
  friend ModelSet models_of(const Formula& f);
  void trim();

  Vocabulary vocab_;
  std::vector<std::uint64_t> words_;
};

bool eval(const Model& m, const Formula& f);

ModelSet models_of(const Formula& f);
// Models satisfying every formula; the full space for an empty span.
ModelSet models_of_all(std::span<const Formula> formulas, const Vocabulary& vocab);

bool entails(std::span<const Formula> premises, const Formula& claim);
bool consistent(std::span<const Formula> formulas, const Vocabulary& vocab);

}  // namespace argus::logic
