#include "argus/serialization.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace argus::io {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

std::string child(const std::string& path, const char* key) { return path + "." + key; }
std::string child(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

long long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

logic::Formula formula_from(const json& j, const logic::Vocabulary& vocab,
                            const std::string& path) {
  const std::string text = as_string(j, path);
  try {
    return logic::parse_formula(text, vocab);
  } catch (const SyntaxError& e) {
    fail(path, std::string("syntax error: ") + e.what());
  } catch (const UnknownAtom& e) {
    fail(path, e.what());
  }
}

std::vector<logic::Formula> formulas_from(const json& j, const logic::Vocabulary& vocab,
                                          const std::string& path) {
  std::vector<logic::Formula> out;
  const json& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(formula_from(arr[i], vocab, child(path, i)));
  }
  return out;
}

logic::Vocabulary vocab_from(const json& j, const std::string& path) {
  std::vector<std::string> atoms;
  const json& arr = as_array(j, path);
  for (std::size_t i = 0; i < arr.size(); ++i) atoms.push_back(as_string(arr[i], child(path, i)));
  try {
    return logic::Vocabulary(std::move(atoms));
  } catch (const InvalidVocabulary& e) {
    fail(path, e.what());
  }
}

void check_schema(const json& j, const std::string& what) {
  const json& version = field(j, "schema", what);
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    fail(what + ".schema", "unsupported schema version (expected " +
                               std::to_string(kSchemaVersion) + ")");
  }
}

json formula_list(const std::vector<logic::Formula>& fs) {
  json out = json::array();
  for (const auto& f : fs) out.push_back(logic::to_string(f));
  return out;
}

}  // namespace

json to_json(const arg::Argument& a) {
  return json{{"premises", formula_list(a.premises())}, {"claim", logic::to_string(a.claim())}};
}

arg::Argument argument_from_json(const json& j, const logic::Vocabulary& vocab,
                                 const std::string& path) {
  auto premises = formulas_from(field(j, "premises", path), vocab, child(path, "premises"));
  auto claim = formula_from(field(j, "claim", path), vocab, child(path, "claim"));
  return arg::Argument(std::move(premises), std::move(claim));
}

json to_json(const arg::Move& m) {
  json out = to_json(m.argument());
  out["source"] = std::string(arg::to_string(m.source()));
  out["t"] = m.timestep();
  out[m.annotation().kind == arg::Annotation::Kind::kTrust ? "trust" : "certainty"] =
      m.annotation().value;
  return out;
}

arg::Move move_from_json(const json& j, const logic::Vocabulary& vocab, const std::string& path) {
  arg::Argument a = argument_from_json(j, vocab, path);
  const std::string source_text = as_string(field(j, "source", path), child(path, "source"));
  if (source_text != "agent" && source_text != "human") {
    fail(child(path, "source"), "expected \"agent\" or \"human\"");
  }
  const arg::Source source = arg::parse_source(source_text);
  const long long t = as_integer(field(j, "t", path), child(path, "t"));
  if (t < 0 || t > static_cast<long long>(UINT32_MAX)) fail(child(path, "t"), "out of range");
  const char* key = source == arg::Source::kAgent ? "trust" : "certainty";
  const double value = as_number(field(j, key, path), child(path, key));
  const auto annotation = source == arg::Source::kAgent ? arg::Annotation::trust(value)
                                                        : arg::Annotation::certainty(value);
  try {
    return arg::Move(std::move(a), source, static_cast<std::uint32_t>(t), annotation);
  } catch (const InvalidMove& e) {
    fail(path, e.what());
  }
}

json to_json(const belief::ModelDistribution& d) {
  return json{{"vocab", d.vocabulary().atoms()},
              {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
}

belief::ModelDistribution distribution_from_json(const json& j) {
  const std::string path = "distribution";
  auto vocab = vocab_from(field(j, "vocab", path), child(path, "vocab"));
  std::vector<double> probs;
  const json& arr = as_array(field(j, "probs", path), child(path, "probs"));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    probs.push_back(as_number(arr[i], child(child(path, "probs"), i)));
  }
  try {
    return belief::ModelDistribution(std::move(vocab), std::move(probs));
  } catch (const InvalidDistribution& e) {
    fail(path, e.what());
  }
}

json to_json(const dialogue::Scenario& s) {
  json pool = json::array();
  for (const auto& entry : s.human_pool) {
    json e = to_json(entry.argument);
    e["certainty"] = entry.certainty;
    e["cue"] = entry.cue;
    pool.push_back(std::move(e));
  }
  json perspectives = json::array();
  for (const auto& p : s.perspectives) {
    perspectives.push_back({{"label", p.label}, {"formula", logic::to_string(p.formula)}});
  }
  json levels = json::array();
  for (const auto& l : s.trust_levels) levels.push_back({{"label", l.label}, {"tau", l.tau}});
  return json{{"schema", kSchemaVersion},
              {"name", s.name},
              {"vocab", s.vocab.atoms()},
              {"agent_kb", formula_list(s.agent_kb)},
              {"human_pool", std::move(pool)},
              {"perspectives", std::move(perspectives)},
              {"trust_levels", std::move(levels)},
              {"gamma", s.gamma},
              {"rule", std::string(belief::to_string(s.rule))},
              {"max_rounds", s.max_rounds}};
}

dialogue::Scenario scenario_from_json(const json& j) {
  const std::string path = "scenario";
  check_schema(j, path);
  dialogue::Scenario s;
  s.name = as_string(field(j, "name", path), child(path, "name"));
  s.vocab = vocab_from(field(j, "vocab", path), child(path, "vocab"));
  s.agent_kb = formulas_from(field(j, "agent_kb", path), s.vocab, child(path, "agent_kb"));

  if (j.contains("human_pool")) {
    const std::string pool_path = child(path, "human_pool");
    const json& pool = as_array(j["human_pool"], pool_path);
    for (std::size_t i = 0; i < pool.size(); ++i) {
      const std::string entry_path = child(pool_path, i);
      dialogue::PoolEntry entry{
          argument_from_json(pool[i], s.vocab, entry_path),
          as_number(field(pool[i], "certainty", entry_path), child(entry_path, "certainty")),
          pool[i].contains("cue") ? as_string(pool[i]["cue"], child(entry_path, "cue")) : ""};
      s.human_pool.push_back(std::move(entry));
    }
  }

  const std::string persp_path = child(path, "perspectives");
  const json& persp = as_array(field(j, "perspectives", path), persp_path);
  for (std::size_t i = 0; i < persp.size(); ++i) {
    const std::string p = child(persp_path, i);
    if (persp[i].is_string()) {
      s.perspectives.push_back({persp[i].get<std::string>(), formula_from(persp[i], s.vocab, p)});
    } else {
      s.perspectives.push_back(
          {persp[i].contains("label") ? as_string(persp[i]["label"], child(p, "label")) : "",
           formula_from(field(persp[i], "formula", p), s.vocab, child(p, "formula"))});
    }
  }

  if (j.contains("trust_levels")) {
    s.trust_levels.clear();
    const std::string levels_path = child(path, "trust_levels");
    const json& levels = as_array(j["trust_levels"], levels_path);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const std::string p = child(levels_path, i);
      s.trust_levels.push_back({as_string(field(levels[i], "label", p), child(p, "label")),
                                as_number(field(levels[i], "tau", p), child(p, "tau"))});
    }
  }
  if (j.contains("gamma")) s.gamma = as_number(j["gamma"], child(path, "gamma"));
  if (j.contains("rule")) {
    try {
      s.rule = belief::parse_rule(as_string(j["rule"], child(path, "rule")));
    } catch (const SchemaError& e) {
      fail(child(path, "rule"), e.what());
    }
  }
  if (j.contains("max_rounds")) {
    s.max_rounds = static_cast<int>(as_integer(j["max_rounds"], child(path, "max_rounds")));
  }
  try {
    s.validate();
  } catch (const SchemaError& e) {
    fail(path, e.what());
  }
  return s;
}

json to_json(const dialogue::DialogueTrace& t) {
  json moves = json::array();
  for (const auto& m : t.moves) moves.push_back(to_json(m));
  return json{{"schema", kSchemaVersion},
              {"scenario", t.scenario},
              {"vocab", t.vocab.atoms()},
              {"moves", std::move(moves)},
              {"rankings", t.rankings}};
}

dialogue::DialogueTrace trace_from_json(const json& j) {
  const std::string path = "trace";
  check_schema(j, path);
  dialogue::DialogueTrace t;
  t.scenario = j.contains("scenario") ? as_string(j["scenario"], child(path, "scenario")) : "";
  t.vocab = vocab_from(field(j, "vocab", path), child(path, "vocab"));
  const std::string moves_path = child(path, "moves");
  const json& moves = as_array(field(j, "moves", path), moves_path);
  for (std::size_t i = 0; i < moves.size(); ++i) {
    t.moves.push_back(move_from_json(moves[i], t.vocab, child(moves_path, i)));
  }
  if (j.contains("rankings")) {
    const std::string rk_path = child(path, "rankings");
    const json& rankings = as_array(j["rankings"], rk_path);
    for (std::size_t r = 0; r < rankings.size(); ++r) {
      const json& order = as_array(rankings[r], child(rk_path, r));
      std::vector<std::size_t> ranking;
      for (std::size_t k = 0; k < order.size(); ++k) {
        const long long v = as_integer(order[k], child(child(rk_path, r), k));
        if (v < 0) fail(child(child(rk_path, r), k), "negative index");
        ranking.push_back(static_cast<std::size_t>(v));
      }
      t.rankings.push_back(std::move(ranking));
    }
  }
  return t;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

dialogue::Scenario load_scenario(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return scenario_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

dialogue::DialogueTrace load_trace(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    return trace_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

}  // namespace argus::io
