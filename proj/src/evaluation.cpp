#include "argus/evaluation.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "argus/serialization.hpp"

namespace argus::eval {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::kUpperBound:
      return "upper_bound";
    case Variant::kPersonalization1:
      return "personalization_1";
    case Variant::kPersonalization2:
      return "personalization_2";
  }
  return "";
}

Variant parse_variant(std::string_view name) {
  if (name == "upper_bound") return Variant::kUpperBound;
  if (name == "personalization_1") return Variant::kPersonalization1;
  if (name == "personalization_2") return Variant::kPersonalization2;
  throw DomainError("unknown variant '" + std::string(name) + "'");
}

std::vector<double> default_gamma_grid() {
  return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
}

std::vector<std::vector<std::size_t>> framework_rankings(const DialogueTrace& trace,
                                                         std::span<const Formula> perspectives,
                                                         const UpdateRule& rule, double gamma) {
  const auto rounds = dialogue::rounds_of(trace, INT_MAX);
  const auto result = dialogue::replay(trace, rule, {.gamma = gamma});
  std::vector<std::vector<std::size_t>> out;
  for (const auto& d : dialogue::round_distributions(result, rounds)) {
    out.push_back(belief::rank_perspectives(d, perspectives));
  }
  return out;
}

std::pair<std::vector<int>, std::vector<int>> split_rounds(Variant variant, int rounds) {
  std::vector<int> all(static_cast<std::size_t>(std::max(rounds, 0)));
  std::iota(all.begin(), all.end(), 1);
  switch (variant) {
    case Variant::kUpperBound:
      if (rounds < 1) throw InsufficientRounds("upper bound needs at least one round");
      return {all, all};
    case Variant::kPersonalization1:
      // Fit on every round but the last, evaluate on the last.
      if (rounds < 2) throw InsufficientRounds("personalization_1 needs at least two rounds");
      return {std::vector<int>(all.begin(), all.end() - 1), {rounds}};
    case Variant::kPersonalization2:
      // Fit on the first round only, evaluate on the rest.
      if (rounds < 2) throw InsufficientRounds("personalization_2 needs at least two rounds");
      return {{1}, std::vector<int>(all.begin() + 1, all.end())};
  }
  return {};
}

namespace {

std::map<std::string, std::vector<const RoundRecord*>> by_participant(
    const std::vector<RoundRecord>& records) {
  std::map<std::string, std::vector<const RoundRecord*>> out;
  for (const auto& r : records) out[r.participant].push_back(&r);
  for (auto& [id, rs] : out) {
    std::sort(rs.begin(), rs.end(),
              [](const RoundRecord* a, const RoundRecord* b) { return a->round < b->round; });
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (rs[i]->round != static_cast<int>(i) + 1) {
        throw InsufficientRounds("participant " + id + " has non-contiguous rounds");
      }
    }
  }
  return out;
}

const DialogueTrace& trace_for(const TraceMap& traces, const std::string& id) {
  auto it = traces.find(id);
  if (it == traces.end()) throw InsufficientRounds("no trace for participant " + id);
  return it->second;
}

double mean_rho(const std::vector<std::vector<std::size_t>>& framework,
                const std::vector<const RoundRecord*>& rounds, const std::vector<int>& which) {
  double total = 0.0;
  for (int r : which) {
    const auto& human = rounds[static_cast<std::size_t>(r - 1)]->human_ranking;
    total += stats::spearman_rho_orderings(framework[static_cast<std::size_t>(r - 1)], human);
  }
  return total / static_cast<double>(which.size());
}

}  // namespace

std::vector<GammaFit> fit_gamma(const std::vector<RoundRecord>& records, const TraceMap& traces,
                                std::span<const Formula> perspectives, Variant variant,
                                std::vector<double> grid) {
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::erase_if(grid, [](double g) { return g < trust::kMinInvertibleGamma || g > 1.0; });
  if (grid.empty()) throw DomainError("gamma grid has no invertible values");

  std::vector<GammaFit> fits;
  for (const auto& [id, rounds] : by_participant(records)) {
    const DialogueTrace& trace = trace_for(traces, id);
    const int n_rounds = static_cast<int>(rounds.size());
    auto [fit_rounds, eval_rounds] = split_rounds(variant, n_rounds);
    const auto trace_rounds = dialogue::rounds_of(trace, INT_MAX);
    if (static_cast<int>(trace_rounds.size()) < n_rounds) {
      throw InsufficientRounds("participant " + id + " has records for " +
                               std::to_string(n_rounds) + " rounds but the trace has " +
                               std::to_string(trace_rounds.size()));
    }

    GammaFit best{id, 0.0, fit_rounds, eval_rounds, -std::numeric_limits<double>::infinity(), 0.0};
    for (double gamma : grid) {
      std::vector<std::vector<std::size_t>> framework;
      try {
        framework = framework_rankings(trace, perspectives, UpdateRule::proposed(), gamma);
      } catch (const DegenerateUpdate&) {
        continue;
      }
      const double score = mean_rho(framework, rounds, fit_rounds);
      if (score > best.fit_rho) {
        best.gamma = gamma;
        best.fit_rho = score;
        best.eval_rho = mean_rho(framework, rounds, eval_rounds);
      }
    }
    if (!std::isfinite(best.fit_rho)) {
      throw DegenerateUpdate("no gamma in the grid replays participant " + id);
    }
    fits.push_back(std::move(best));
  }
  return fits;
}

std::vector<MethodSummary> evaluate_methods(const std::vector<RoundRecord>& records,
                                            const TraceMap& traces,
                                            std::span<const Formula> perspectives,
                                            const std::vector<UpdateRule>& methods, double gamma) {
  if (records.empty() || traces.empty()) throw DomainError("empty cohort");
  const auto participants = by_participant(records);
  std::vector<MethodSummary> out;
  for (const auto& rule : methods) {
    MethodSummary summary{rule, {}, {}, 0.0, 0.0, {}};
    for (const auto& [id, rounds] : participants) {
      try {
        const auto framework =
            framework_rankings(trace_for(traces, id), perspectives, rule, gamma);
        if (framework.size() < rounds.size()) {
          throw InsufficientRounds("trace shorter than the recorded rounds");
        }
        for (std::size_t r = 0; r < rounds.size(); ++r) {
          summary.rhos.push_back(
              stats::spearman_rho_orderings(framework[r], rounds[r]->human_ranking));
        }
      } catch (const Error& e) {
        summary.failures.emplace_back(id, e.what());
      }
    }
    std::size_t high = 0;
    for (double rho : summary.rhos) {
      const auto bin = std::min<std::size_t>(
          kHistogramBins - 1, static_cast<std::size_t>(std::floor((rho + 1.0) / 0.25)));
      ++summary.histogram[bin];
      if (rho >= kHighCorrelation) ++high;
    }
    if (!summary.rhos.empty()) {
      const auto n = static_cast<double>(summary.rhos.size());
      summary.high_fraction = static_cast<double>(high) / n;
      summary.mean_rho = std::accumulate(summary.rhos.begin(), summary.rhos.end(), 0.0) / n;
    }
    out.push_back(std::move(summary));
  }
  return out;
}

std::vector<TrustTest> trust_tests(const std::vector<RoundRecord>& records) {
  const auto participants = by_participant(records);
  auto run = [&](const std::string& label, int rounds, int from, int to) {
    TrustTest test;
    test.label = label;
    std::vector<double> before;
    std::vector<double> after;
    for (const auto& [id, rs] : participants) {
      if (static_cast<int>(rs.size()) != rounds) continue;
      before.push_back(rs[static_cast<std::size_t>(from - 1)]->trust);
      after.push_back(rs[static_cast<std::size_t>(to - 1)]->trust);
    }
    test.participants = before.size();
    try {
      test.two_sided = stats::paired_t_test(before, after, stats::Alternative::kTwoSided);
      test.greater = stats::paired_t_test(before, after, stats::Alternative::kGreater);
    } catch (const Error& e) {
      test.note = e.what();
    }
    return test;
  };
  return {run("group A, round 1 vs 2", 2, 1, 2), run("group B, round 1 vs 2", 3, 1, 2),
          run("group B, round 2 vs 3", 3, 2, 3)};
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw SchemaError("records line " + std::to_string(line_no) + ": unclosed quote");
  return fields;
}

}  // namespace

std::vector<RoundRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<RoundRecord> out;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line, line_no);
    if (header) {
      header = false;
      if (fields.size() != 4 || fields[0] != "participant_id" || fields[1] != "round" ||
          fields[2] != "trust" || fields[3] != "human_ranking") {
        throw SchemaError("records header must be participant_id,round,trust,human_ranking");
      }
      continue;
    }
    const std::string where = "records line " + std::to_string(line_no);
    if (fields.size() != 4) throw SchemaError(where + ": expected 4 fields");
    RoundRecord r;
    r.participant = fields[0];
    try {
      std::size_t used = 0;
      r.round = std::stoi(fields[1], &used);
      if (used != fields[1].size() || r.round < 1) throw std::invalid_argument("round");
      r.trust = std::stod(fields[2], &used);
      if (used != fields[2].size() || !(r.trust >= 0.0 && r.trust <= 1.0)) {
        throw std::invalid_argument("trust");
      }
      std::stringstream ranking(fields[3]);
      std::string item;
      while (std::getline(ranking, item, ',')) {
        const long v = std::stol(item, &used);
        if (used != item.size() || v < 0) throw std::invalid_argument("ranking");
        r.human_ranking.push_back(static_cast<std::size_t>(v));
      }
    } catch (const std::exception&) {
      throw SchemaError(where + ": malformed field");
    }
    if (!dialogue::is_permutation_of(r.human_ranking, r.human_ranking.size())) {
      throw SchemaError(where + ": human_ranking is not a permutation");
    }
    out.push_back(std::move(r));
  }
  if (header) throw SchemaError("records file is empty");
  return out;
}

std::vector<RoundRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_records_csv(buffer.str());
}

std::string format_records_csv(const std::vector<RoundRecord>& records) {
  std::ostringstream out;
  out << "participant_id,round,trust,human_ranking\n";
  for (const auto& r : records) {
    out << r.participant << ',' << r.round << ',' << io::json(r.trust).dump() << ",\"";
    for (std::size_t i = 0; i < r.human_ranking.size(); ++i) {
      if (i) out << ',';
      out << r.human_ranking[i];
    }
    out << "\"\n";
  }
  return out.str();
}

TraceMap read_trace_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError("'" + dir.string() + "' is not a directory");
  TraceMap out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    out.emplace(entry.path().stem().string(), io::load_trace(entry.path()));
  }
  return out;
}

}  // namespace argus::eval
