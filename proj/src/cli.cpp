#include "argus/cli.hpp"

#include <CLI11.hpp>

#include <climits>
#include <cstdlib>
#include <iomanip>
#include <random>
#include <sstream>

#include "argus/error.hpp"
#include "argus/evaluation.hpp"
#include "argus/http_server.hpp"
#include "argus/serialization.hpp"
#include "argus/statistics.hpp"
#include "argus/synthetic.hpp"

namespace argus::cli {

namespace {

using dialogue::DialogueTrace;
using dialogue::Scenario;
using io::json;

struct Options {
  std::string scenario;
  std::string trace;
  std::string records;
  std::string rule;
  std::optional<double> gamma;
  std::uint64_t seed = 1;
  std::string out;
  std::string variant = "upper_bound";
  std::vector<double> grid;
  std::size_t participants = 0;
  std::vector<double> cohort_gammas;
  std::vector<int> rounds;
  double noise = 0.0;
  bool agent_policy = false;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string static_dir;
  std::string scenario_dir;
};

std::string fixed(double v, int digits = 6) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string join(const std::vector<std::size_t>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

std::string join(const std::vector<int>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
  return out;
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    io::write_file_atomic(o.out, text);
  }
}

std::vector<std::string> model_labels(const logic::Vocabulary& vocab) {
  std::vector<std::string> labels;
  for (std::uint64_t id = 0; id < vocab.model_count(); ++id) {
    labels.push_back(logic::Model(vocab, id).describe());
  }
  return labels;
}

int cmd_replay(const Options& o, std::ostream& out) {
  const DialogueTrace trace = io::load_trace(o.trace);
  std::optional<Scenario> scenario;
  if (!o.scenario.empty()) scenario = io::load_scenario(o.scenario);

  belief::UpdateRule rule = scenario ? scenario->rule : belief::UpdateRule::proposed();
  if (!o.rule.empty()) rule = belief::parse_rule(o.rule);
  trust::WeightingParams params{.gamma = scenario ? scenario->gamma : 0.7};
  if (o.gamma) params.gamma = *o.gamma;

  if (scenario && !(scenario->vocab == trace.vocab)) {
    throw MalformedTrace("trace vocabulary differs from the scenario's");
  }
  const auto rounds = dialogue::rounds_of(trace, scenario ? scenario->max_rounds : INT_MAX,
                                          scenario ? scenario->perspectives.size() : 0);
  const auto result = dialogue::replay(trace, rule, params);

  out << "rule " << belief::to_string(rule) << ", gamma " << params.gamma << "\n";
  const auto labels = model_labels(trace.vocab);
  out << "models:";
  for (std::size_t i = 0; i < labels.size(); ++i) out << "  [" << i << "] " << labels[i];
  out << "\n";
  for (std::size_t step = 0; step < result.distributions.size(); ++step) {
    std::string head = "prior";
    if (step > 0) {
      const auto& move = trace.moves[step - 1];
      head = "t=" + std::to_string(move.timestep()) + " " +
             std::string(arg::to_string(move.source())) + " p=" + fixed(result.p_used[step - 1]);
    }
    out << std::left << std::setw(22) << head << std::right;
    for (double p : result.distributions[step].probs()) out << " " << fixed(p);
    out << "\n";
  }
  for (const auto& w : result.warnings) out << "warning: " << w << "\n";

  if (scenario) {
    const auto perspectives = scenario->perspective_formulas();
    const auto final_ranking = belief::rank_perspectives(result.final(), perspectives);
    out << "final ranking:";
    for (std::size_t k = 0; k < final_ranking.size(); ++k) {
      const std::size_t i = final_ranking[k];
      out << " " << (k + 1) << "." << scenario->perspectives[i].label << " ("
          << fixed(belief::degree_of_belief(result.final(), perspectives[i]), 4) << ")";
    }
    out << "\n";
    const auto per_round = dialogue::round_distributions(result, rounds);
    for (std::size_t r = 0; r < trace.rankings.size(); ++r) {
      const auto framework = belief::rank_perspectives(per_round[r], perspectives);
      out << "round " << (r + 1) << " rho " << fixed(stats::spearman_rho_orderings(framework, trace.rankings[r]), 4)
          << " (framework " << join(framework) << ", human " << join(trace.rankings[r]) << ")\n";
    }
  }
  if (!o.out.empty()) {
    json report = {{"final", io::to_json(result.final())}, {"p_used", result.p_used}};
    io::write_file_atomic(o.out, io::dump_canonical(report));
  }
  return kExitOk;
}

struct Cohort {
  Scenario scenario;
  std::vector<eval::RoundRecord> records;
  eval::TraceMap traces;
};

Cohort load_cohort(const Options& o) {
  if (o.scenario.empty() || o.trace.empty() || o.records.empty()) {
    throw SchemaError("--scenario, --trace (a directory of traces) and --records are required");
  }
  return {io::load_scenario(o.scenario), eval::read_records_csv(o.records),
          eval::read_trace_dir(o.trace)};
}

int cmd_fit(const Options& o, std::ostream& out) {
  const Cohort c = load_cohort(o);
  const auto fits =
      eval::fit_gamma(c.records, c.traces, c.scenario.perspective_formulas(),
                      eval::parse_variant(o.variant),
                      o.grid.empty() ? eval::default_gamma_grid() : o.grid);
  std::ostringstream text;
  text << "participant_id,gamma,fit_rounds,eval_rounds,fit_rho,eval_rho\n";
  for (const auto& f : fits) {
    text << f.participant << ',' << f.gamma << ",\"" << join(f.fit_rounds) << "\",\""
         << join(f.eval_rounds) << "\"," << fixed(f.fit_rho) << ',' << fixed(f.eval_rho) << "\n";
  }
  emit(o, out, text.str());
  return kExitOk;
}

json test_json(const std::optional<stats::TTestResult>& r) {
  if (!r) return nullptr;
  return {{"t", r->t}, {"df", r->df}, {"p_value", r->p_value}, {"mean_difference", r->mean_difference}};
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  const Cohort c = load_cohort(o);
  const double gamma = o.gamma.value_or(c.scenario.gamma);
  const std::vector<belief::UpdateRule> methods =
      o.rule.empty() ? belief::all_rules() : std::vector{belief::parse_rule(o.rule)};
  const auto summaries =
      eval::evaluate_methods(c.records, c.traces, c.scenario.perspective_formulas(), methods, gamma);

  std::ostringstream text;
  json report = {{"gamma", gamma}, {"methods", json::array()}, {"trust_tests", json::array()}};
  text << "gamma " << gamma << "\n";
  text << "method,n,mean_rho,high_fraction,histogram\n";
  for (const auto& s : summaries) {
    std::vector<std::size_t> bins(s.histogram.begin(), s.histogram.end());
    text << belief::to_string(s.rule) << ',' << s.rhos.size() << ',' << fixed(s.mean_rho, 4) << ','
         << fixed(s.high_fraction, 4) << ",\"" << join(bins) << "\"\n";
    for (const auto& [id, why] : s.failures) text << "  skipped " << id << ": " << why << "\n";
    json failures = json::array();
    for (const auto& [id, why] : s.failures) failures.push_back({{"participant", id}, {"reason", why}});
    report["methods"].push_back({{"rule", belief::to_string(s.rule)},
                                 {"rhos", s.rhos},
                                 {"histogram", bins},
                                 {"high_fraction", s.high_fraction},
                                 {"mean_rho", s.mean_rho},
                                 {"failures", failures}});
  }
  text << "trust t-tests (after - before)\n";
  for (const auto& t : eval::trust_tests(c.records)) {
    text << "  " << t.label << ": n=" << t.participants;
    if (t.two_sided) {
      text << " t=" << fixed(t.two_sided->t, 4) << " df=" << t.two_sided->df
           << " p(two-sided)=" << fixed(t.two_sided->p_value, 6)
           << " p(greater)=" << fixed(t.greater->p_value, 6);
    } else {
      text << " not computed: " << t.note;
    }
    text << "\n";
    report["trust_tests"].push_back({{"label", t.label},
                                     {"participants", t.participants},
                                     {"two_sided", test_json(t.two_sided)},
                                     {"greater", test_json(t.greater)},
                                     {"note", t.note}});
  }
  out << text.str();
  if (!o.out.empty()) io::write_file_atomic(o.out, io::dump_canonical(report));
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (o.scenario.empty()) throw SchemaError("--scenario is required");
  Scenario scenario = io::load_scenario(o.scenario);
  if (!o.rule.empty()) scenario.rule = belief::parse_rule(o.rule);
  if (o.gamma) scenario.gamma = *o.gamma;
  scenario.validate();

  if (o.participants == 0) {
    // One closed-loop dialogue against a simulated human whose true model is
    // drawn from the seed.
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, scenario.vocab.model_count() - 1);
    const logic::Model truth(scenario.vocab, pick(rng));
    const auto sim = dialogue::simulate_dialogue(scenario, truth);
    emit(o, out, io::dump_canonical(io::to_json(sim.trace)));
    return kExitOk;
  }

  if (o.out.empty()) throw SchemaError("cohort simulation needs --out DIR");
  synth::CohortOptions options;
  options.participants = o.participants;
  options.seed = o.seed;
  if (!o.cohort_gammas.empty()) {
    options.gammas = o.cohort_gammas;
  } else if (o.gamma) {
    options.gammas = {*o.gamma};
  }
  if (!o.rounds.empty()) options.rounds = o.rounds;
  options.ranking_noise = o.noise;
  options.agent_policy = o.agent_policy;
  const auto cohort = synth::generate_cohort(scenario, options);

  const std::filesystem::path dir(o.out);
  std::filesystem::create_directories(dir / "traces");
  for (const auto& p : cohort.participants) {
    io::write_file_atomic(dir / "traces" / (p.id + ".json"), io::dump_canonical(io::to_json(p.trace)));
  }
  io::write_file_atomic(dir / "records.csv", eval::format_records_csv(cohort.records));
  std::ostringstream truth;
  truth << "participant_id,gamma,true_model\n";
  for (const auto& p : cohort.participants) {
    truth << p.id << ',' << p.gamma << ',' << p.true_model << "\n";
  }
  io::write_file_atomic(dir / "participants.csv", truth.str());
  out << "wrote " << cohort.participants.size() << " participants, " << cohort.records.size()
      << " round records to " << dir.string() << "\n";
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  service::ServiceConfig config;
  if (const char* dir = std::getenv("ARGUS_DATA_DIR"); dir && *dir) config.data_dir = dir;
  if (!o.scenario.empty()) {
    auto s = io::load_scenario(o.scenario);
    config.scenarios.emplace(s.name, std::move(s));
  }
  if (!o.scenario_dir.empty()) {
    for (const auto& entry : std::filesystem::directory_iterator(o.scenario_dir)) {
      if (entry.path().extension() != ".json") continue;
      auto s = io::load_scenario(entry.path());
      config.scenarios.emplace(s.name, std::move(s));
    }
  }
  service::SessionService sessions(std::move(config));
  service::ServerOptions options{o.host, o.port, std::nullopt};
  if (!o.static_dir.empty()) options.static_dir = o.static_dir;
  service::HttpServer server(sessions, options);
  const int port = server.bind();
  out << "listening on http://" << o.host << ":" << port << "/v1 (" << sessions.session_count()
      << " sessions loaded)" << std::endl;
  server.run();
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learns a probabilistic model of a human's knowledge from argumentation dialogues",
               "argus"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> rules{"proposed", "baseline1", "baseline2", "baseline3"};

  auto* replay = app.add_subcommand("replay", "Replay a trace and print every distribution");
  replay->add_option("--trace", o.trace, "Trace file")->required();
  replay->add_option("--scenario", o.scenario, "Scenario file (enables rankings and rho)");

  auto* fit = app.add_subcommand("fit", "Fit a personal gamma for every participant");
  auto* evaluate = app.add_subcommand("evaluate", "Compare update rules over a cohort");
  for (auto* sub : {fit, evaluate}) {
    sub->add_option("--scenario", o.scenario, "Scenario file")->required();
    sub->add_option("--trace,--traces", o.trace, "Directory of trace files")->required();
    sub->add_option("--records", o.records, "Round records CSV")->required();
  }
  fit->add_option("--variant", o.variant, "upper_bound, personalization_1 or personalization_2")
      ->check(CLI::IsMember({"upper_bound", "personalization_1", "personalization_2"}));
  fit->add_option("--grid", o.grid, "Candidate gamma values")->delimiter(',');

  auto* simulate = app.add_subcommand("simulate", "Run simulated dialogues");
  simulate->add_option("--scenario", o.scenario, "Scenario file")->required();
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--participants", o.participants, "Generate a cohort of this size");
  simulate->add_option("--gammas", o.cohort_gammas, "Cohort gamma values")->delimiter(',');
  simulate->add_option("--rounds", o.rounds, "Cohort round counts")->delimiter(',');
  simulate->add_option("--noise", o.noise, "Chance of swapping adjacent ranks")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_flag("--agent-policy", o.agent_policy, "Cohort arguments come from the agent policy");

  auto* serve = app.add_subcommand("serve", "Serve the session API over HTTP");
  serve->add_option("--scenario", o.scenario, "Scenario offered to new sessions");
  serve->add_option("--scenario-dir", o.scenario_dir, "Directory of scenarios to offer");
  serve->add_option("--host", o.host, "Address to bind");
  serve->add_option("--port", o.port, "Port (0 picks one)");
  serve->add_option("--static", o.static_dir, "Directory served at /");

  for (auto* sub : {replay, evaluate, simulate}) {
    sub->add_option("--rule", o.rule, "Update rule")->check(CLI::IsMember(rules));
  }
  for (auto* sub : {replay, evaluate, simulate}) sub->add_option("--gamma", o.gamma, "Gamma");
  for (auto* sub : {replay, fit, evaluate, simulate}) sub->add_option("--out", o.out, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*replay) return cmd_replay(o, out);
    if (*fit) return cmd_fit(o, out);
    if (*evaluate) return cmd_evaluate(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const DegenerateUpdate& e) {
    err << "error: degenerate update";
    if (e.timestep()) err << " at timestep " << *e.timestep();
    err << ": " << e.detail() << "\n";
    return kExitDegenerate;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace argus::cli
