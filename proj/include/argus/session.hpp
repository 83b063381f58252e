#pragma once

// Live dialogue sessions. A round runs: the agent presents an argument, the
// human states a trust level, optionally answers with a counterargument from
// the scenario's pool, then ranks the perspectives.
//
//   awaiting_trust -> awaiting_counter -> awaiting_ranking
//       -> (between_rounds -> awaiting_trust) | ended
//
// between_rounds only lasts while the next argument is being chosen. Any
// state but ended may jump to ended. SessionService speaks JSON in and out and
// is what the HTTP layer calls; it can be driven directly in tests.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "argus/belief.hpp"
#include "argus/dialogue.hpp"

namespace argus::service {

using nlohmann::json;

enum class SessionState { kAwaitingTrust, kAwaitingCounter, kAwaitingRanking, kBetweenRounds, kEnded };

std::string_view to_string(SessionState s);
SessionState parse_state(std::string_view text);

struct Session {
  std::string id{};
  dialogue::Scenario scenario;
  belief::ModelDistribution distribution;
  dialogue::DialogueTrace trace;
  SessionState state = SessionState::kAwaitingTrust;
  int round = 1;
  // Argument on the table while awaiting trust; it joins the trace once the
  // trust value is known.
  std::optional<arg::Argument> pending{};
  std::vector<std::optional<double>> rhos{};
  std::string created{};
  std::string updated{};
};

struct Response {
  int status = 200;
  json body;
};

struct ServiceConfig {
  // Sessions are written here as <id>.json and reloaded on startup.
  std::optional<std::filesystem::path> data_dir;
  // Scenarios that POST /sessions may name instead of sending one inline.
  std::map<std::string, dialogue::Scenario> scenarios;
};

class SessionService {
 public:
  explicit SessionService(ServiceConfig config = {});

  // Routes "/v1/..." requests. Unknown paths give 404, known paths with the
  // wrong method 405.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  Response list_scenarios() const;
  // {"scenario": {...}} or {"scenario_name": "..."}
  Response create(const json& body);
  Response get(const std::string& id);
  Response trace(const std::string& id);
  // {"level_label": "High Trust"} or {"tau": 0.7}
  Response trust(const std::string& id, const json& body);
  // {"pool_index": 2}, or {"pool_index": null} to pass
  Response counter(const std::string& id, const json& body);
  // {"permutation": [2, 0, 1, 3]}
  Response ranking(const std::string& id, const json& body);
  Response end(const std::string& id);

  std::size_t session_count() const;

 private:
  struct Slot {
    explicit Slot(Session s) : session(std::move(s)) {}
    std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Slot> find(const std::string& id) const;
  void persist(const Session& s) const;
  std::string fresh_id();

  ServiceConfig config_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

json session_to_json(const Session& s);
Session session_from_json(const json& j);

// Distribution with a readable label per model.
json describe_distribution(const belief::ModelDistribution& d);

}  // namespace argus::service
