#include "hypabc/report.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace hypabc {

namespace {

template <typename T>
T field(const nlohmann::json& doc, const char* name) {
  if (!doc.contains(name)) throw std::runtime_error(std::string("run result is missing '") + name + "'");
  try {
    return doc.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::runtime_error(std::string("run result field '") + name + "' has the wrong type");
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string key_value(const RunSummary& r, const std::string& key) {
  if (key == "method") return r.method;
  if (key == "objective") return r.objective;
  if (key == "np") return r.np == 0 ? "-" : std::to_string(r.np);
  throw std::invalid_argument("unknown group key '" + key + "'");
}

}  // namespace

nlohmann::ordered_json run_result_to_json(const RunResult& result, const RunSummary& meta,
                                          const std::string& log_path) {
  nlohmann::ordered_json doc;
  doc["method"] = result.method;
  doc["objective"] = meta.objective;
  doc["np"] = meta.np;
  doc["seed"] = meta.seed;
  doc["best_config"] = result.best.to_json();
  doc["best_objective"] = result.best_objective;
  doc["best_accuracy"] = result.best_accuracy();
  doc["evaluations_used"] = result.evaluations_used;
  doc["cycles"] = result.cycles;
  doc["wall_time_s"] = result.wall_time_s;
  doc["cache_hits"] = result.cache_hits;
  doc["cache_misses"] = result.cache_misses;
  doc["stop_reason"] = result.stop_reason;
  if (result.grid_cardinality) doc["grid_cardinality"] = *result.grid_cardinality;
  doc["log_path"] = log_path;
  return doc;
}

RunSummary run_summary_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::runtime_error("run result must be an object");
  RunSummary s;
  s.method = field<std::string>(doc, "method");
  s.objective = field<std::string>(doc, "objective");
  s.np = field<std::size_t>(doc, "np");
  s.seed = field<std::uint64_t>(doc, "seed");
  s.best_objective = field<double>(doc, "best_objective");
  s.evaluations_used = field<std::size_t>(doc, "evaluations_used");
  s.cycles = field<std::size_t>(doc, "cycles");
  s.wall_time_s = field<double>(doc, "wall_time_s");
  return s;
}

RunSummary summary_of(const RunResult& result, const std::string& objective, std::size_t np,
                      std::uint64_t seed) {
  return {result.method, objective,        np,           seed, result.best_objective,
          result.evaluations_used, result.cycles, result.wall_time_s};
}

std::vector<SummaryRow> summarize(const std::vector<RunSummary>& runs,
                                  const std::vector<std::string>& group_keys) {
  if (runs.empty()) throw std::invalid_argument("summarize needs at least one run");
  for (const auto& k : group_keys) {
    if (std::find(kGroupKeys.begin(), kGroupKeys.end(), k) == kGroupKeys.end()) {
      throw std::invalid_argument("unknown group key '" + k + "'");
    }
  }
  auto uses = [&](const char* k) {
    return std::find(group_keys.begin(), group_keys.end(), k) != group_keys.end();
  };
  using Key = std::tuple<std::string, std::string, std::size_t>;
  std::map<Key, std::vector<const RunSummary*>> groups;
  for (const auto& r : runs) {
    groups[{uses("method") ? r.method : "", uses("objective") ? r.objective : "",
            uses("np") ? r.np : 0}]
        .push_back(&r);
  }

  std::vector<SummaryRow> rows;
  for (const auto& [key, members] : groups) {
    SummaryRow row;
    for (const auto& k : group_keys) row.group.emplace_back(k, key_value(*members.front(), k));
    row.runs = members.size();
    std::vector<double> best;
    double evals = 0.0;
    double wall = 0.0;
    for (const auto* m : members) {
      best.push_back(m->best_objective);
      evals += static_cast<double>(m->evaluations_used);
      wall += m->wall_time_s;
    }
    const double n = static_cast<double>(members.size());
    row.median_best = median(best);
    double sum = 0.0;
    for (double b : best) sum += b;
    row.mean_best = sum / n;
    row.min_best = *std::min_element(best.begin(), best.end());
    row.mean_evaluations = evals / n;
    row.mean_wall_time_s = wall / n;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  if (rows.empty()) return;
  for (const auto& [k, v] : rows.front().group) out << k << ',';
  out << "runs,median_best_objective,mean_best_objective,min_best_objective,"
         "median_best_accuracy,mean_evaluations,mean_wall_time_s\n";
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.group) out << v << ',';
    out << r.runs << ',' << format_real(r.median_best) << ',' << format_real(r.mean_best) << ','
        << format_real(r.min_best) << ',' << format_real(1.0 - r.median_best) << ','
        << format_real(r.mean_evaluations) << ',' << format_real(r.mean_wall_time_s) << '\n';
  }
}

void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows) {
  if (rows.empty()) return;
  std::vector<std::string> header;
  for (const auto& [k, v] : rows.front().group) header.push_back(k);
  for (const char* h : {"runs", "median_obj", "mean_obj", "min_obj", "median_acc", "mean_evals",
                        "mean_wall_s"}) {
    header.emplace_back(h);
  }
  std::vector<std::vector<std::string>> table{header};
  for (const auto& r : rows) {
    std::vector<std::string> line;
    for (const auto& [k, v] : r.group) line.push_back(v);
    auto fixed = [](double x, int prec) {
      std::ostringstream s;
      s << std::fixed << std::setprecision(prec) << x;
      return s.str();
    };
    line.push_back(std::to_string(r.runs));
    line.push_back(fixed(r.median_best, 6));
    line.push_back(fixed(r.mean_best, 6));
    line.push_back(fixed(r.min_best, 6));
    line.push_back(fixed(1.0 - r.median_best, 6));
    line.push_back(fixed(r.mean_evaluations, 1));
    line.push_back(fixed(r.mean_wall_time_s, 3));
    table.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : table) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  for (const auto& line : table) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out << "  ";
      out << std::setw(static_cast<int>(width[c])) << line[c];
    }
    out << '\n';
  }
}

std::string np_trend_report(const std::vector<SummaryRow>& rows) {
  std::map<std::string, std::vector<std::pair<std::size_t, double>>> series;
  for (const auto& r : rows) {
    std::string rest;
    std::size_t np = 0;
    bool has_np = false;
    for (const auto& [k, v] : r.group) {
      if (k == "np") {
        if (v == "-") break;
        np = std::stoul(v);
        has_np = true;
      } else {
        rest += k + "=" + v + " ";
      }
    }
    if (has_np) series[rest].emplace_back(np, r.median_best);
  }
  std::ostringstream out;
  for (auto& [label, points] : series) {
    if (points.size() < 2) continue;
    std::sort(points.begin(), points.end());
    bool monotone = true;
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i].second > points[i - 1].second) monotone = false;
    }
    out << label << "median best objective by np:";
    for (const auto& [np, v] : points) out << ' ' << np << "->" << format_real(v);
    out << (monotone ? "  (non-increasing with np)" : "  (not monotone in np)") << '\n';
  }
  return out.str();
}

}  // namespace hypabc
