#include "argus/logic.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <unordered_map>

namespace argus::logic {

// ---------------------------------------------------------------- Vocabulary

struct Vocabulary::Data {
  std::vector<std::string> atoms;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t max_atoms = kDefaultMaxAtoms;
};

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '_'; });
}

Vocabulary::Vocabulary() : data_(std::make_shared<Data>()) {}

Vocabulary::Vocabulary(std::vector<std::string> atoms, std::size_t max_atoms) {
  if (atoms.size() > kHardMaxAtoms) {
    throw InvalidVocabulary("vocabulary may hold at most " + std::to_string(kHardMaxAtoms) +
                            " atoms");
  }
  auto data = std::make_shared<Data>();
  data->max_atoms = std::min(max_atoms, kHardMaxAtoms);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (!is_identifier(atoms[i])) throw InvalidVocabulary("invalid atom name '" + atoms[i] + "'");
    if (!data->index.emplace(atoms[i], i).second) {
      throw InvalidVocabulary("duplicate atom '" + atoms[i] + "'");
    }
  }
  data->atoms = std::move(atoms);
  data_ = std::move(data);
}

std::size_t Vocabulary::size() const { return data_->atoms.size(); }
const std::vector<std::string>& Vocabulary::atoms() const { return data_->atoms; }
const std::string& Vocabulary::name(std::size_t index) const { return data_->atoms.at(index); }
std::size_t Vocabulary::max_atoms() const { return data_->max_atoms; }

std::optional<std::size_t> Vocabulary::index_of(std::string_view name) const {
  auto it = data_->index.find(std::string(name));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::require_enumerable() const {
  if (!enumerable()) throw VocabularyTooLarge(size(), max_atoms());
}

bool operator==(const Vocabulary& lhs, const Vocabulary& rhs) {
  return lhs.data_ == rhs.data_ || lhs.data_->atoms == rhs.data_->atoms;
}

// ------------------------------------------------------------------- Formula

struct Formula::Node {
  Connective op;
  std::size_t atom = 0;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
  std::size_t depth = 1;
};

Formula::Formula(std::shared_ptr<const Node> node, Vocabulary vocab)
    : node_(std::move(node)), vocab_(std::move(vocab)) {}

Formula Formula::atom(const Vocabulary& vocab, std::size_t index) {
  if (index >= vocab.size()) throw UnknownAtom("#" + std::to_string(index));
  auto node = std::make_shared<Node>();
  node->op = Connective::kAtom;
  node->atom = index;
  return Formula(std::move(node), vocab);
}

Formula Formula::atom(const Vocabulary& vocab, std::string_view name) {
  auto index = vocab.index_of(name);
  if (!index) throw UnknownAtom(std::string(name));
  return atom(vocab, *index);
}

Formula Formula::negation(Formula operand) {
  auto node = std::make_shared<Node>();
  node->op = Connective::kNot;
  node->depth = operand.node_->depth + 1;
  node->lhs = std::move(operand.node_);
  return Formula(std::move(node), std::move(operand.vocab_));
}

Formula Formula::binary(Connective op, Formula lhs, Formula rhs) {
  if (op == Connective::kAtom || op == Connective::kNot) {
    throw std::invalid_argument("binary() needs a binary connective");
  }
  if (!(lhs.vocab_ == rhs.vocab_)) throw VocabularyMismatch();
  auto node = std::make_shared<Node>();
  node->op = op;
  node->depth = std::max(lhs.node_->depth, rhs.node_->depth) + 1;
  node->lhs = std::move(lhs.node_);
  node->rhs = std::move(rhs.node_);
  return Formula(std::move(node), std::move(lhs.vocab_));
}

Connective Formula::connective() const { return node_->op; }

std::size_t Formula::atom_index() const {
  assert(node_->op == Connective::kAtom);
  return node_->atom;
}

std::size_t Formula::arity() const {
  switch (node_->op) {
    case Connective::kAtom:
      return 0;
    case Connective::kNot:
      return 1;
    default:
      return 2;
  }
}

Formula Formula::operand(std::size_t i) const {
  if (i >= arity()) throw std::out_of_range("formula operand index");
  return Formula(i == 0 ? node_->lhs : node_->rhs, vocab_);
}

std::size_t Formula::depth() const { return node_->depth; }

bool operator==(const Formula& lhs, const Formula& rhs) {
  if (!(lhs.vocab_ == rhs.vocab_)) return false;
  if (lhs.node_ == rhs.node_) return true;
  if (lhs.connective() != rhs.connective()) return false;
  if (lhs.connective() == Connective::kAtom) return lhs.atom_index() == rhs.atom_index();
  for (std::size_t i = 0; i < lhs.arity(); ++i) {
    if (!(lhs.operand(i) == rhs.operand(i))) return false;
  }
  return true;
}

Formula operator!(Formula f) { return Formula::negation(std::move(f)); }
Formula operator&&(Formula lhs, Formula rhs) {
  return Formula::binary(Connective::kAnd, std::move(lhs), std::move(rhs));
}
Formula operator||(Formula lhs, Formula rhs) {
  return Formula::binary(Connective::kOr, std::move(lhs), std::move(rhs));
}
Formula implies(Formula lhs, Formula rhs) {
  return Formula::binary(Connective::kImplies, std::move(lhs), std::move(rhs));
}
Formula iff(Formula lhs, Formula rhs) {
  return Formula::binary(Connective::kIff, std::move(lhs), std::move(rhs));
}

// ------------------------------------------------------------ Parse / print

namespace {

enum class Tok { kIdent, kNot, kAnd, kOr, kImplies, kIff, kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string_view text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto starts = [&](std::string_view lit) { return s.substr(i, lit.size()) == lit; };
  while (i < s.size()) {
    const char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) {
      std::size_t j = i + 1;
      while (j < s.size() && ((s[j] >= 'a' && s[j] <= 'z') || (s[j] >= 'A' && s[j] <= 'Z') ||
                              (s[j] >= '0' && s[j] <= '9') || s[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::kIdent, i, s.substr(i, j - i)});
      i = j;
      continue;
    }
    struct Lexeme {
      std::string_view text;
      Tok kind;
    };
    // Longest match first: "<->" before "->".
    static constexpr Lexeme kLexemes[] = {
        {"<->", Tok::kIff}, {"->", Tok::kImplies}, {"!", Tok::kNot},     {"~", Tok::kNot},
        {"&", Tok::kAnd},   {"|", Tok::kOr},       {"(", Tok::kLParen},  {")", Tok::kRParen},
        {"¬", Tok::kNot}, {"∧", Tok::kAnd}, {"∨", Tok::kOr},
        {"→", Tok::kImplies}, {"↔", Tok::kIff},
    };
    bool matched = false;
    for (const auto& lx : kLexemes) {
      if (starts(lx.text)) {
        out.push_back({lx.kind, i, lx.text});
        i += lx.text.size();
        matched = true;
        break;
      }
    }
    if (!matched) throw SyntaxError("unexpected character '" + std::string(1, c) + "'", i);
  }
  out.push_back({Tok::kEnd, s.size(), {}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocab) : tokens_(tokenize(text)), vocab_(vocab) {}

  Formula parse() {
    if (peek().kind == Tok::kEnd) throw SyntaxError("empty formula", peek().pos);
    Formula f = parse_iff();
    if (peek().kind != Tok::kEnd) {
      throw SyntaxError("unexpected '" + std::string(peek().text) + "'", peek().pos);
    }
    return f;
  }

 private:
  const Token& peek() const { return tokens_[cursor_]; }
  const Token& next() { return tokens_[cursor_++]; }

  Formula parse_iff() {
    Formula lhs = parse_implies();
    while (peek().kind == Tok::kIff) {
      next();
      lhs = iff(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_implies() {
    Formula lhs = parse_or();
    if (peek().kind == Tok::kImplies) {
      next();
      return implies(std::move(lhs), parse_implies());
    }
    return lhs;
  }

  Formula parse_or() {
    Formula lhs = parse_and();
    while (peek().kind == Tok::kOr) {
      next();
      lhs = std::move(lhs) || parse_and();
    }
    return lhs;
  }

  Formula parse_and() {
    Formula lhs = parse_unary();
    while (peek().kind == Tok::kAnd) {
      next();
      lhs = std::move(lhs) && parse_unary();
    }
    return lhs;
  }

  Formula parse_unary() {
    const Token& tok = next();
    if (++nesting_ > kMaxNesting) throw SyntaxError("formula nested too deeply", tok.pos);
    struct Unnest {
      int& n;
      ~Unnest() { --n; }
    } unnest{nesting_};
    switch (tok.kind) {
      case Tok::kNot:
        return !parse_unary();
      case Tok::kIdent: {
        auto index = vocab_.index_of(tok.text);
        if (!index) throw UnknownAtom(std::string(tok.text));
        return Formula::atom(vocab_, *index);
      }
      case Tok::kLParen: {
        Formula inner = parse_iff();
        if (peek().kind != Tok::kRParen) throw SyntaxError("expected ')'", peek().pos);
        next();
        return inner;
      }
      case Tok::kEnd:
        throw SyntaxError("unexpected end of formula", tok.pos);
      default:
        throw SyntaxError("unexpected '" + std::string(tok.text) + "'", tok.pos);
    }
  }

  static constexpr int kMaxNesting = 2000;

  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  int nesting_ = 0;
  const Vocabulary& vocab_;
};

int precedence(Connective op) {
  switch (op) {
    case Connective::kIff:
      return 1;
    case Connective::kImplies:
      return 2;
    case Connective::kOr:
      return 3;
    case Connective::kAnd:
      return 4;
    case Connective::kNot:
      return 5;
    case Connective::kAtom:
      return 6;
  }
  return 0;
}

std::string_view symbol(Connective op) {
  switch (op) {
    case Connective::kAnd:
      return " & ";
    case Connective::kOr:
      return " | ";
    case Connective::kImplies:
      return " -> ";
    case Connective::kIff:
      return " <-> ";
    default:
      return "";
  }
}

void print(const Formula& f, std::string& out) {
  const Connective op = f.connective();
  if (op == Connective::kAtom) {
    out += f.vocabulary().name(f.atom_index());
    return;
  }
  auto emit = [&](const Formula& child, bool parens) {
    if (parens) out += '(';
    print(child, out);
    if (parens) out += ')';
  };
  if (op == Connective::kNot) {
    out += '!';
    emit(f.operand(0), f.operand(0).arity() == 2);
    return;
  }
  const int prec = precedence(op);
  const bool right_assoc = op == Connective::kImplies;
  const Formula lhs = f.operand(0);
  const Formula rhs = f.operand(1);
  const int lp = precedence(lhs.connective());
  const int rp = precedence(rhs.connective());
  emit(lhs, lp < prec || (lp == prec && right_assoc));
  out += symbol(op);
  emit(rhs, rp < prec || (rp == prec && !right_assoc));
}

}  // namespace

Formula parse_formula(std::string_view text, const Vocabulary& vocab) {
  return Parser(text, vocab).parse();
}

std::string to_string(const Formula& f) {
  std::string out;
  print(f, out);
  return out;
}

// --------------------------------------------------------------------- Model

Model::Model(Vocabulary vocab, std::uint64_t id) : vocab_(std::move(vocab)), id_(id) {
  if (vocab_.size() < 64 && id_ >= vocab_.model_count()) {
    throw std::out_of_range("model id " + std::to_string(id_) + " outside the model space");
  }
}

std::string Model::describe() const {
  std::string out;
  for (std::size_t k = 0; k < vocab_.size(); ++k) {
    if (k) out += ' ';
    out += vocab_.name(k);
    out += value(k) ? "=1" : "=0";
  }
  return out;
}

// ------------------------------------------------------------------ ModelSet

namespace {

std::size_t word_count(const Vocabulary& vocab) {
  return static_cast<std::size_t>((vocab.model_count() + 63) / 64);
}

}  // namespace

ModelSet::ModelSet(const Vocabulary& vocab, bool full) : vocab_(vocab) {
  vocab.require_enumerable();
  words_.assign(word_count(vocab), full ? ~std::uint64_t{0} : 0);
  trim();
}

void ModelSet::trim() {
  const std::uint64_t n = vocab_.model_count();
  if (n % 64 != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
}

bool ModelSet::contains(std::uint64_t id) const {
  if (id >= universe_size()) return false;
  return ((words_[id / 64] >> (id % 64)) & 1U) != 0;
}

void ModelSet::insert(std::uint64_t id) {
  if (id >= universe_size()) throw std::out_of_range("model id outside the model space");
  words_[id / 64] |= std::uint64_t{1} << (id % 64);
}

std::uint64_t ModelSet::count() const {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

bool ModelSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::vector<std::uint64_t> ModelSet::ids() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    std::uint64_t w = words_[i];
    while (w) {
      const int bit = std::countr_zero(w);
      out.push_back(i * 64 + static_cast<std::uint64_t>(bit));
      w &= w - 1;
    }
  }
  return out;
}

std::vector<Model> ModelSet::models() const {
  std::vector<Model> out;
  for (auto id : ids()) out.emplace_back(vocab_, id);
  return out;
}

bool ModelSet::subset_of(const ModelSet& other) const {
  if (!(vocab_ == other.vocab_)) throw VocabularyMismatch();
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

ModelSet& ModelSet::operator&=(const ModelSet& other) {
  if (!(vocab_ == other.vocab_)) throw VocabularyMismatch();
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

ModelSet& ModelSet::operator|=(const ModelSet& other) {
  if (!(vocab_ == other.vocab_)) throw VocabularyMismatch();
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

ModelSet ModelSet::complement() const {
  ModelSet out = *this;
  for (auto& w : out.words_) w = ~w;
  out.trim();
  return out;
}

bool operator==(const ModelSet& lhs, const ModelSet& rhs) {
  return lhs.vocab_ == rhs.vocab_ && lhs.words_ == rhs.words_;
}

// ----------------------------------------------------------------- Semantics

bool eval(const Model& m, const Formula& f) {
  if (!(m.vocabulary() == f.vocabulary())) throw VocabularyMismatch();
  switch (f.connective()) {
    case Connective::kAtom:
      return m.value(f.atom_index());
    case Connective::kNot:
      return !eval(m, f.operand(0));
    case Connective::kAnd:
      return eval(m, f.operand(0)) && eval(m, f.operand(1));
    case Connective::kOr:
      return eval(m, f.operand(0)) || eval(m, f.operand(1));
    case Connective::kImplies:
      return !eval(m, f.operand(0)) || eval(m, f.operand(1));
    case Connective::kIff:
      return eval(m, f.operand(0)) == eval(m, f.operand(1));
  }
  return false;
}

namespace {

// Bit-parallel truth table: word i holds models 64*i .. 64*i+63.
std::vector<std::uint64_t> table(const Formula& f, std::size_t words) {
  switch (f.connective()) {
    case Connective::kAtom: {
      const std::size_t k = f.atom_index();
      std::vector<std::uint64_t> out(words);
      if (k < 6) {
        static constexpr std::uint64_t kPatterns[6] = {
            0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
            0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL};
        std::fill(out.begin(), out.end(), kPatterns[k]);
      } else {
        for (std::size_t i = 0; i < words; ++i) {
          out[i] = ((i >> (k - 6)) & 1U) ? ~std::uint64_t{0} : 0;
        }
      }
      return out;
    }
    case Connective::kNot: {
      auto out = table(f.operand(0), words);
      for (auto& w : out) w = ~w;
      return out;
    }
    default: {
      auto lhs = table(f.operand(0), words);
      const auto rhs = table(f.operand(1), words);
      for (std::size_t i = 0; i < words; ++i) {
        switch (f.connective()) {
          case Connective::kAnd:
            lhs[i] &= rhs[i];
            break;
          case Connective::kOr:
            lhs[i] |= rhs[i];
            break;
          case Connective::kImplies:
            lhs[i] = ~lhs[i] | rhs[i];
            break;
          default:
            lhs[i] = ~(lhs[i] ^ rhs[i]);
            break;
        }
      }
      return lhs;
    }
  }
}

}  // namespace

ModelSet models_of(const Formula& f) {
  ModelSet out(f.vocabulary());
  out.words_ = table(f, out.words_.size());
  out.trim();
  return out;
}

ModelSet models_of_all(std::span<const Formula> formulas, const Vocabulary& vocab) {
  ModelSet out(vocab, true);
  for (const auto& f : formulas) {
    if (!(f.vocabulary() == vocab)) throw VocabularyMismatch();
    out &= models_of(f);
  }
  return out;
}

bool entails(std::span<const Formula> premises, const Formula& claim) {
  return models_of_all(premises, claim.vocabulary()).subset_of(models_of(claim));
}

bool consistent(std::span<const Formula> formulas, const Vocabulary& vocab) {
  return !models_of_all(formulas, vocab).empty();
}

}  // namespace argus::logic
