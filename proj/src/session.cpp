#include "argus/session.hpp"

#include <algorithm>
#include <ctime>
#include <iomanip>
#include <random>
#include <sstream>

#include "argus/error.hpp"
#include "argus/serialization.hpp"
#include "argus/statistics.hpp"

namespace argus::service {

namespace {

using arg::Move;

Response error_response(int status, const std::string& kind, const std::string& message) {
  return {status, {{"error", kind}, {"message", message}}};
}

Response conflict(const Session& s, std::string_view action) {
  return error_response(409, "out_of_order",
                        std::string(action) + " is not allowed in state " +
                            std::string(to_string(s.state)));
}

std::string now_iso8601() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&t, &utc);
  std::ostringstream out;
  out << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::uint32_t next_timestep(const Session& s) {
  return s.trace.moves.empty() ? 1 : s.trace.moves.back().timestep() + 1;
}

json argument_view(const arg::Argument& a) {
  json j = io::to_json(a);
  j["text"] = arg::to_string(a);
  return j;
}

json counter_options(const dialogue::Scenario& scenario) {
  json out = json::array();
  for (std::size_t i = 0; i < scenario.human_pool.size(); ++i) {
    const auto& entry = scenario.human_pool[i];
    out.push_back({{"pool_index", i},
                   {"argument", argument_view(entry.argument)},
                   {"certainty", entry.certainty},
                   {"cue", entry.cue}});
  }
  return out;
}

json perspective_list(const dialogue::Scenario& scenario) {
  json out = json::array();
  for (std::size_t i = 0; i < scenario.perspectives.size(); ++i) {
    out.push_back({{"index", i},
                   {"label", scenario.perspectives[i].label},
                   {"formula", logic::to_string(scenario.perspectives[i].formula)}});
  }
  return out;
}

json trust_level_list(const dialogue::Scenario& scenario) {
  json out = json::array();
  for (const auto& level : scenario.trust_levels) {
    out.push_back({{"label", level.label}, {"tau", level.tau}});
  }
  return out;
}

// Picks the next agent argument. Leaves the session ended when the agent has
// nothing left to say.
void open_round(Session& s) {
  try {
    s.pending = dialogue::select_agent_argument(s.distribution, s.scenario, s.trace);
    s.state = SessionState::kAwaitingTrust;
  } catch (const NoArgumentAvailable&) {
    s.pending.reset();
    s.state = SessionState::kEnded;
  }
}

json rho_list(const Session& s) {
  json out = json::array();
  for (const auto& r : s.rhos) out.push_back(r ? json(*r) : json(nullptr));
  return out;
}

// Applies `move` to a copy; the session is only touched if the update works.
std::optional<Response> apply_move(Session& s, Move move) {
  try {
    auto result =
        belief::apply_move(s.distribution, move, s.scenario.rule, s.scenario.weighting());
    s.distribution = std::move(result.distribution);
    s.trace.moves.push_back(std::move(move));
    return std::nullopt;
  } catch (const DegenerateUpdate& e) {
    return Response{500,
                    {{"error", "degenerate_update"},
                     {"message", e.detail()},
                     {"timestep", move.timestep()}}};
  }
}

const json* member(const json& body, const char* key) {
  if (!body.is_object()) return nullptr;
  auto it = body.find(key);
  return it == body.end() ? nullptr : &*it;
}

}  // namespace

std::string_view to_string(SessionState s) {
  switch (s) {
    case SessionState::kAwaitingTrust:
      return "awaiting_trust";
    case SessionState::kAwaitingCounter:
      return "awaiting_counter";
    case SessionState::kAwaitingRanking:
      return "awaiting_ranking";
    case SessionState::kBetweenRounds:
      return "between_rounds";
    case SessionState::kEnded:
      return "ended";
  }
  return "";
}

SessionState parse_state(std::string_view text) {
  for (auto s : {SessionState::kAwaitingTrust, SessionState::kAwaitingCounter,
                 SessionState::kAwaitingRanking, SessionState::kBetweenRounds,
                 SessionState::kEnded}) {
    if (to_string(s) == text) return s;
  }
  throw SchemaError("unknown session state '" + std::string(text) + "'");
}

json describe_distribution(const belief::ModelDistribution& d) {
  json j = io::to_json(d);
  json models = json::array();
  for (std::uint64_t id = 0; id < d.size(); ++id) {
    models.push_back({{"id", id},
                      {"label", logic::Model(d.vocabulary(), id).describe()},
                      {"p", d[id]}});
  }
  j["models"] = std::move(models);
  return j;
}

json session_to_json(const Session& s) {
  json j = {{"id", s.id},
            {"scenario", io::to_json(s.scenario)},
            {"trace", io::to_json(s.trace)},
            {"state", to_string(s.state)},
            {"round", s.round},
            {"rhos", rho_list(s)},
            {"created", s.created},
            {"updated", s.updated}};
  j["pending"] = s.pending ? io::to_json(*s.pending) : json(nullptr);
  return j;
}

Session session_from_json(const json& j) {
  try {
    dialogue::Scenario scenario = io::scenario_from_json(j.at("scenario"));
    dialogue::DialogueTrace trace = io::trace_from_json(j.at("trace"));
    // The trace is the source of truth; the distribution is rebuilt from it.
    auto replayed = dialogue::replay(trace, scenario);
    Session s{j.at("id").get<std::string>(),
              std::move(scenario),
              replayed.final(),
              std::move(trace),
              parse_state(j.at("state").get<std::string>()),
              j.at("round").get<int>(),
              std::nullopt,
              {},
              j.at("created").get<std::string>(),
              j.at("updated").get<std::string>()};
    if (!j.at("pending").is_null()) {
      s.pending = io::argument_from_json(j.at("pending"), s.scenario.vocab, "session.pending");
    }
    for (const auto& r : j.at("rhos")) {
      s.rhos.push_back(r.is_null() ? std::nullopt : std::optional<double>(r.get<double>()));
    }
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("session: ") + e.what());
  }
}

SessionService::SessionService(ServiceConfig config) : config_(std::move(config)) {
  if (!config_.data_dir) return;
  std::filesystem::create_directories(*config_.data_dir);
  for (const auto& entry : std::filesystem::directory_iterator(*config_.data_dir)) {
    if (entry.path().extension() != ".json") continue;
    auto slot = std::make_shared<Slot>(session_from_json(io::read_json_file(entry.path())));
    sessions_.emplace(slot->session.id, std::move(slot));
  }
}

std::size_t SessionService::session_count() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

std::shared_ptr<SessionService::Slot> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

void SessionService::persist(const Session& s) const {
  if (!config_.data_dir) return;
  io::write_file_atomic(*config_.data_dir / (s.id + ".json"), io::dump_canonical(session_to_json(s)));
}

std::string SessionService::fresh_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << rng();
  return out.str();
}

Response SessionService::list_scenarios() const {
  json names = json::array();
  for (const auto& [name, scenario] : config_.scenarios) names.push_back(name);
  return {200, {{"scenarios", names}}};
}

Response SessionService::create(const json& body) {
  dialogue::Scenario scenario;
  try {
    if (const json* inline_scenario = member(body, "scenario")) {
      scenario = io::scenario_from_json(*inline_scenario);
    } else if (const json* name = member(body, "scenario_name"); name && name->is_string()) {
      auto it = config_.scenarios.find(name->get<std::string>());
      if (it == config_.scenarios.end()) {
        return error_response(404, "unknown_scenario", "no scenario named " + name->dump());
      }
      scenario = it->second;
    } else {
      return error_response(422, "schema", "body needs \"scenario\" or \"scenario_name\"");
    }
  } catch (const Error& e) {
    return error_response(422, "schema", e.what());
  }

  auto prior = belief::uniform_prior(scenario.vocab);
  dialogue::DialogueTrace empty{scenario.name, scenario.vocab, {}, {}};
  auto slot = std::make_shared<Slot>(Session{.scenario = std::move(scenario),
                                             .distribution = std::move(prior),
                                             .trace = std::move(empty)});
  Session& s = slot->session;
  s.created = s.updated = now_iso8601();
  open_round(s);
  {
    std::lock_guard lock(mutex_);
    do {
      s.id = fresh_id();
    } while (sessions_.count(s.id));
    sessions_.emplace(s.id, slot);
  }
  std::lock_guard lock(slot->mutex);
  persist(s);
  json out = session_to_json(s);
  out["distribution"] = describe_distribution(s.distribution);
  out["trust_levels"] = trust_level_list(s.scenario);
  return {201, std::move(out)};
}

Response SessionService::get(const std::string& id) {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no session " + id);
  std::lock_guard lock(slot->mutex);
  const Session& s = slot->session;
  json out = session_to_json(s);
  out["distribution"] = describe_distribution(s.distribution);
  out["trust_levels"] = trust_level_list(s.scenario);
  out["counter_options"] = counter_options(s.scenario);
  out["perspectives"] = perspective_list(s.scenario);
  out["ranking"] = belief::rank_perspectives(s.distribution, s.scenario.perspective_formulas());
  return {200, std::move(out)};
}

Response SessionService::trace(const std::string& id) {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no session " + id);
  std::lock_guard lock(slot->mutex);
  return {200, io::to_json(slot->session.trace)};
}

Response SessionService::trust(const std::string& id, const json& body) {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no session " + id);
  std::lock_guard lock(slot->mutex);
  Session& s = slot->session;
  if (s.state != SessionState::kAwaitingTrust) return conflict(s, "trust");

  double tau = 0.0;
  if (const json* label = member(body, "level_label")) {
    const auto& levels = s.scenario.trust_levels;
    auto it = std::find_if(levels.begin(), levels.end(), [&](const dialogue::TrustLevel& l) {
      return label->is_string() && l.label == label->get<std::string>();
    });
    if (it == levels.end()) return error_response(422, "schema", "unknown trust level " + label->dump());
    tau = it->tau;
  } else if (const json* raw = member(body, "tau"); raw && raw->is_number()) {
    tau = raw->get<double>();
    if (!(tau >= 0.0 && tau <= 1.0)) return error_response(422, "schema", "tau must lie in [0, 1]");
  } else {
    return error_response(422, "schema", "body needs \"level_label\" or a numeric \"tau\"");
  }

  if (auto failure = apply_move(s, Move(*s.pending, arg::Source::kAgent, next_timestep(s),
                                        arg::Annotation::trust(tau)))) {
    return *failure;
  }
  s.pending.reset();
  s.state = SessionState::kAwaitingCounter;
  s.updated = now_iso8601();
  persist(s);
  return {200,
          {{"state", to_string(s.state)},
           {"round", s.round},
           {"distribution", describe_distribution(s.distribution)},
           {"counter_options", counter_options(s.scenario)}}};
}

Response SessionService::counter(const std::string& id, const json& body) {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no session " + id);
  std::lock_guard lock(slot->mutex);
  Session& s = slot->session;
  if (s.state != SessionState::kAwaitingCounter) return conflict(s, "counter");

  const json* index = member(body, "pool_index");
  if (!index) return error_response(422, "schema", "body needs \"pool_index\"");
  if (!index->is_null()) {
    if (!index->is_number_integer() || index->get<long long>() < 0 ||
        index->get<unsigned long long>() >= s.scenario.human_pool.size()) {
      return error_response(422, "schema", "pool_index out of range");
    }
    const auto& entry = s.scenario.human_pool[index->get<std::size_t>()];
    if (auto failure = apply_move(s, Move(entry.argument, arg::Source::kHuman, next_timestep(s),
                                          arg::Annotation::certainty(entry.certainty)))) {
      return *failure;
    }
  }
  s.state = SessionState::kAwaitingRanking;
  s.updated = now_iso8601();
  persist(s);
  return {200,
          {{"state", to_string(s.state)},
           {"round", s.round},
           {"distribution", describe_distribution(s.distribution)},
           {"perspectives", perspective_list(s.scenario)}}};
}

Response SessionService::ranking(const std::string& id, const json& body) {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no session " + id);
  std::lock_guard lock(slot->mutex);
  Session& s = slot->session;
  if (s.state != SessionState::kAwaitingRanking) return conflict(s, "ranking");

  const json* perm = member(body, "permutation");
  std::vector<std::size_t> order;
  if (!perm || !perm->is_array()) return error_response(422, "schema", "body needs \"permutation\"");
  for (const auto& v : *perm) {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      return error_response(422, "schema", "permutation entries must be non-negative integers");
    }
    order.push_back(v.get<std::size_t>());
  }
  if (!dialogue::is_permutation_of(order, s.scenario.perspectives.size())) {
    return error_response(422, "schema",
                          "permutation must list each of the " +
                              std::to_string(s.scenario.perspectives.size()) +
                              " perspective indices once");
  }

  const auto framework = belief::rank_perspectives(s.distribution, s.scenario.perspective_formulas());
  std::optional<double> rho;
  if (order.size() >= 2) rho = stats::spearman_rho_orderings(framework, order);
  s.trace.rankings.push_back(order);
  s.rhos.push_back(rho);

  if (s.round >= s.scenario.max_rounds) {
    s.state = SessionState::kEnded;
  } else {
    s.state = SessionState::kBetweenRounds;
    open_round(s);
    if (s.state == SessionState::kAwaitingTrust) ++s.round;
  }
  s.updated = now_iso8601();
  persist(s);

  json out = {{"state", to_string(s.state)},
              {"round", s.round},
              {"rho", rho ? json(*rho) : json(nullptr)},
              {"rhos", rho_list(s)},
              {"framework_ranking", framework}};
  out["next_argument"] = s.pending ? argument_view(*s.pending) : json(nullptr);
  return {200, std::move(out)};
}

Response SessionService::end(const std::string& id) {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no session " + id);
  std::lock_guard lock(slot->mutex);
  Session& s = slot->session;
  if (s.state == SessionState::kEnded) return conflict(s, "end");
  s.state = SessionState::kEnded;
  s.pending.reset();
  s.updated = now_iso8601();
  persist(s);
  return {200, {{"state", to_string(s.state)}, {"round", s.round}}};
}

Response SessionService::handle(std::string_view method, std::string_view path,
                                std::string_view body) {
  constexpr std::string_view kPrefix = "/v1/";
  if (path.substr(0, kPrefix.size()) != kPrefix) return error_response(404, "not_found", "no route");
  std::vector<std::string> parts;
  std::string_view rest = path.substr(kPrefix.size());
  while (!rest.empty()) {
    const auto slash = rest.find('/');
    parts.emplace_back(rest.substr(0, slash));
    rest = slash == std::string_view::npos ? std::string_view{} : rest.substr(slash + 1);
  }
  auto method_not_allowed = [] { return error_response(405, "method_not_allowed", "wrong method"); };

  json parsed;
  if (method == "POST") {
    parsed = json::parse(body.empty() ? std::string_view("{}") : body, nullptr, false);
    if (parsed.is_discarded()) return error_response(422, "schema", "body is not valid JSON");
  }

  try {
    if (parts.size() == 1 && parts[0] == "scenarios") {
      return method == "GET" ? list_scenarios() : method_not_allowed();
    }
    if (parts.empty() || parts[0] != "sessions") return error_response(404, "not_found", "no route");
    if (parts.size() == 1) return method == "POST" ? create(parsed) : method_not_allowed();
    const std::string& id = parts[1];
    if (parts.size() == 2) return method == "GET" ? get(id) : method_not_allowed();
    if (parts.size() == 3) {
      const std::string& action = parts[2];
      if (action == "trace") return method == "GET" ? trace(id) : method_not_allowed();
      if (method != "POST") {
        if (action == "trust" || action == "counter" || action == "ranking" || action == "end") {
          return method_not_allowed();
        }
      } else if (action == "trust") {
        return trust(id, parsed);
      } else if (action == "counter") {
        return counter(id, parsed);
      } else if (action == "ranking") {
        return ranking(id, parsed);
      } else if (action == "end") {
        return end(id);
      }
    }
    return error_response(404, "not_found", "no route");
  } catch (const IoError& e) {
    return error_response(500, "io", e.what());
  } catch (const Error& e) {
    return error_response(500, "internal", e.what());
  }
}

}  // namespace argus::service
