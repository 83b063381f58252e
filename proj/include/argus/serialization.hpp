#pragma once

// JSON encodings for arguments, distributions, scenarios and traces. Scenario
// and trace documents carry "schema": 1. Output is canonical: object keys are
// sorted and formulas are printed in their normal form, so serializing a
// parsed document reproduces it byte for byte.

#include <filesystem>
#include <string>

#include <json.hpp>

#include "argus/argument.hpp"
#include "argus/belief.hpp"
#include "argus/dialogue.hpp"

namespace argus::io {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// {"premises": ["a", "a -> b"], "claim": "b"}
json to_json(const arg::Argument& a);
arg::Argument argument_from_json(const json& j, const logic::Vocabulary& vocab,
                                 const std::string& path = "argument");

// Argument fields plus "source", "t" and "trust" or "certainty".
json to_json(const arg::Move& m);
arg::Move move_from_json(const json& j, const logic::Vocabulary& vocab,
                         const std::string& path = "move");

// {"vocab": ["a", "b"], "probs": [...]} with probabilities in model-id order.
json to_json(const belief::ModelDistribution& d);
belief::ModelDistribution distribution_from_json(const json& j);

json to_json(const dialogue::Scenario& s);
dialogue::Scenario scenario_from_json(const json& j);

json to_json(const dialogue::DialogueTrace& t);
dialogue::DialogueTrace trace_from_json(const json& j);

std::string dump_canonical(const json& j);

// Throws IoError for unreadable files and SchemaError for malformed JSON.
json read_json_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

dialogue::Scenario load_scenario(const std::filesystem::path& path);
dialogue::DialogueTrace load_trace(const std::filesystem::path& path);

}  // namespace argus::io
