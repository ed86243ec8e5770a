#include "hypabc/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hypabc/baselines.hpp"
#include "hypabc/colony.hpp"
#include "hypabc/external.hpp"
#include "hypabc/knn.hpp"
#include "hypabc/oracle.hpp"

namespace hypabc {

namespace {

const std::vector<std::string> kMethods = {"hypabc", "random", "grid"};
const std::vector<std::string> kObjectives = {"mixed_sphere", "knn_cv", "external"};

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void require_knn_space(const SearchSpace& space) {
  const auto& k = space[space.index_of("k")];
  const auto& w = space[space.index_of("weighting")];
  const auto& p = space[space.index_of("p")];
  if (k.kind != ParamKind::integer || k.lower < 1) {
    throw SpaceError("knn_cv needs an integer 'k' >= 1");
  }
  if (w.kind != ParamKind::categorical) throw SpaceError("knn_cv needs a categorical 'weighting'");
  for (const auto& c : w.choices) {
    if (c != "uniform" && c != "distance") {
      throw SpaceError("knn_cv weighting choices must be 'uniform' or 'distance'");
    }
  }
  if (p.kind == ParamKind::categorical || p.effective_lower() < 1.0) {
    throw SpaceError("knn_cv needs a numeric 'p' >= 1");
  }
}

ObjectiveHandle make_objective(const RunConfig& cfg, const SearchSpace& space,
                               const nlohmann::json& raw_space) {
  if (cfg.objective == "mixed_sphere") {
    return builtin_mixed_sphere(space, sphere_targets_from_json(space, raw_space));
  }
  if (cfg.objective == "knn_cv") {
    require_knn_space(space);
    return builtin_knn_cv();
  }
  return external_objective(cfg.external_cmd, cfg.timeout_s);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

}  // namespace

void RunConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("no method given");
  for (const auto& m : methods) {
    if (!contains(kMethods, m)) {
      throw std::invalid_argument("unknown method '" + m + "' (expected hypabc, random or grid)");
    }
  }
  if (!contains(kObjectives, objective)) {
    throw std::invalid_argument("unknown objective '" + objective +
                                "' (expected mixed_sphere, knn_cv or external)");
  }
  if (objective == "external" && external_cmd.empty()) {
    throw std::invalid_argument("objective 'external' needs --external-cmd");
  }
  if (space_path.empty()) throw std::invalid_argument("--space is required");
  if (repeats < 1) throw std::invalid_argument("--repeats must be at least 1");
  if (parallel < 1) throw std::invalid_argument("--parallel must be at least 1");
  const bool needs_budget = contains(methods, "hypabc") || contains(methods, "random");
  if (needs_budget && budget < 1) throw std::invalid_argument("--budget is required");
  if (contains(methods, "hypabc")) {
    if (populations.empty()) throw std::invalid_argument("--np needs at least one value");
    for (auto np : populations) {
      if (np < 2) throw std::invalid_argument("--np must be at least 2");
      if (budget < np) {
        throw std::invalid_argument("budget (" + std::to_string(budget) +
                                    ") is smaller than the population (" + std::to_string(np) +
                                    ")");
      }
    }
  }
}

std::filesystem::path resolve_space_path(const std::string& path) {
  const std::filesystem::path p(path);
  if (std::filesystem::exists(p)) return p;
  if (p.is_relative()) {
    const std::filesystem::path bundled = std::filesystem::path(HYPABC_DATA_DIR) / "spaces" / p;
    if (std::filesystem::exists(bundled)) return bundled;
    auto with_ext = bundled;
    with_ext += ".json";
    if (std::filesystem::exists(with_ext)) return with_ext;
  }
  throw SpaceError("cannot read space file " + path);
}

std::vector<RunSummary> execute_runs(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  const auto space_path = resolve_space_path(cfg.space_path);
  const auto raw_space = read_json(space_path);
  const auto space = validate_space(raw_space);
  const auto objective = make_objective(cfg, space, raw_space);
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<RunSummary> summaries;
  auto persist = [&](const RunResult& result, const std::string& stem, std::size_t np,
                     std::uint64_t seed) {
    const auto log_path = cfg.out_dir / (stem + ".csv");
    std::ostringstream csv;
    write_log_csv(csv, result.log, cfg.log_timing);
    write_text(log_path, csv.str());
    write_text(cfg.out_dir / (stem + ".log.json"), log_to_json(result.log, cfg.log_timing).dump(1) + "\n");
    const auto meta = summary_of(result, cfg.objective, np, seed);
    write_text(cfg.out_dir / (stem + ".result.json"),
               run_result_to_json(result, meta, log_path.filename().string()).dump(2) + "\n");
    out << stem << ": best objective " << format_real(result.best_objective) << " (accuracy "
        << format_real(result.best_accuracy()) << "), " << result.evaluations_used
        << " evaluations, stop: " << result.stop_reason << '\n';
    summaries.push_back(meta);
  };

  for (const auto& method : cfg.methods) {
    if (method == "grid") {
      GridOptions opts;
      opts.cap = cfg.grid_cap;
      opts.parallel_width = cfg.parallel;
      const auto result = grid_search(space, GridSpec::parse(cfg.grid_steps), objective, opts);
      persist(result, "grid", 0, 0);
      continue;
    }
    const std::vector<std::size_t> nps =
        method == "hypabc" ? cfg.populations : std::vector<std::size_t>{0};
    for (const auto np : nps) {
      for (std::size_t r = 0; r < cfg.repeats; ++r) {
        const std::uint64_t seed = cfg.seed + r;
        if (method == "random") {
          RandomSearchOptions opts;
          opts.parallel_width = cfg.parallel;
          persist(random_search(space, cfg.budget, objective, seed, opts),
                  "random-s" + std::to_string(seed), 0, seed);
        } else {
          ColonyParams params;
          params.population = np;
          params.trial_limit = cfg.trial_limit;
          params.max_evaluations = cfg.budget;
          params.target_objective = cfg.target;
          params.seed = seed;
          params.parallel_width = cfg.parallel;
          params.max_idle_cycles = cfg.max_idle_cycles;
          persist(run_hypabc(space, params, objective),
                  "hypabc-np" + std::to_string(np) + "-s" + std::to_string(seed), np, seed);
        }
      }
    }
  }

  const auto rows = summarize(summaries, {"method", "objective", "np"});
  std::ostringstream csv;
  write_summary_csv(csv, rows);
  write_text(cfg.out_dir / "summary.csv", csv.str());
  std::ostringstream text;
  write_summary_text(text, rows);
  text << np_trend_report(rows);
  write_text(cfg.out_dir / "summary.txt", text.str());
  out << text.str();
  return summaries;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HyP-ABC hyper-parameter optimizer"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string methods = "hypabc";
  std::string nps = "50";
  std::optional<std::size_t> trial_limit;
  std::optional<double> target;
  std::string out_dir = cfg.out_dir.string();
  auto* run = app.add_subcommand("run", "Run HyP-ABC and/or baselines");
  run->add_option("--method", methods, "hypabc, random, grid (comma-separated list allowed)");
  run->add_option("--space", cfg.space_path, "Search-space JSON file")->required();
  run->add_option("--objective", cfg.objective, "mixed_sphere, knn_cv or external");
  run->add_option("--budget", cfg.budget, "Maximum fresh objective evaluations");
  run->add_option("--np", nps, "Population size (comma-separated list runs a sweep)");
  run->add_option("--trial-limit", trial_limit, "Abandonment limit (default NP*D)");
  run->add_option("--target", target, "Stop once best objective <= target");
  run->add_option("--seed", cfg.seed, "Base seed; repeat r uses seed+r");
  run->add_option("--repeats", cfg.repeats, "Number of seeds per method/NP");
  run->add_option("--parallel", cfg.parallel, "Concurrent objective evaluations");
  run->add_option("--out-dir", out_dir, "Output directory");
  run->add_option("--grid-steps", cfg.grid_steps, "Grid steps: '5' or 'name=5,other=0.1'");
  run->add_option("--grid-cap", cfg.grid_cap, "Refuse grids larger than this");
  run->add_option("--external-cmd", cfg.external_cmd, "Command for objective 'external'");
  run->add_option("--timeout-s", cfg.timeout_s, "Timeout per external evaluation");
  run->add_option("--max-idle-cycles", cfg.max_idle_cycles,
                  "Stop after this many cycles without a fresh evaluation");
  run->add_flag("--log-timing", cfg.log_timing, "Write measured elapsed_ms into logs");

  std::vector<std::string> inputs;
  std::string group_by = "method,objective,np";
  std::string summary_out;
  auto* sum = app.add_subcommand("summarize", "Summarize *.result.json files");
  sum->add_option("inputs", inputs, "Result files or directories")->required();
  sum->add_option("--group-by", group_by, "Comma-separated subset of method,objective,np ('' for one row)");
  sum->add_option("--out", summary_out, "Also write the summary CSV here");

  std::string oracle_space;
  std::string oracle_objective = "mixed_sphere";
  std::vector<std::string> discretize;
  std::string fixture_out;
  std::uint64_t fixture_seed = KnnSurrogateOptions{}.data_seed;
  auto* orc = app.add_subcommand("oracle", "Exhaustive minimum over an enumerable space");
  orc->add_option("--space", oracle_space, "Search-space JSON file")->required();
  orc->add_option("--objective", oracle_objective, "mixed_sphere or knn_cv");
  orc->add_option("--discretize", discretize, "name=v1:v2:... for continuous dimensions");
  orc->add_option("--out", fixture_out, "Write a fixture document here");
  orc->add_option("--seed", fixture_seed, "Seed recorded in the fixture");

  std::vector<std::string> storage{"hypabc"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (run->parsed()) {
      cfg.methods = split(methods, ',');
      cfg.populations.clear();
      for (const auto& s : split(nps, ',')) cfg.populations.push_back(std::stoul(s));
      cfg.trial_limit = trial_limit;
      cfg.target = target;
      cfg.out_dir = out_dir;
      execute_runs(cfg, out);
    } else if (sum->parsed()) {
      std::vector<RunSummary> runs;
      for (const auto& in : inputs) {
        std::vector<std::filesystem::path> files;
        if (std::filesystem::is_directory(in)) {
          for (const auto& e : std::filesystem::directory_iterator(in)) {
            const auto name = e.path().filename().string();
            if (name.size() > 12 && name.ends_with(".result.json")) files.push_back(e.path());
          }
          std::sort(files.begin(), files.end());
        } else {
          files.emplace_back(in);
        }
        for (const auto& f : files) runs.push_back(run_summary_from_json(read_json(f)));
      }
      if (runs.empty()) throw std::runtime_error("no run results found");
      const auto rows = summarize(runs, split(group_by, ','));
      write_summary_text(out, rows);
      out << np_trend_report(rows);
      if (!summary_out.empty()) {
        std::ostringstream csv;
        write_summary_csv(csv, rows);
        write_text(summary_out, csv.str());
      }
    } else if (orc->parsed()) {
      const auto path = resolve_space_path(oracle_space);
      const auto raw = read_json(path);
      const auto space = validate_space(raw);
      RunConfig ocfg;
      ocfg.objective = oracle_objective;
      if (oracle_objective == "external") throw std::invalid_argument("oracle supports built-in objectives only");
      if (!contains(kObjectives, oracle_objective)) {
        throw std::invalid_argument("unknown objective '" + oracle_objective + "'");
      }
      Discretization disc;
      for (const auto& d : discretize) {
        const auto eq = d.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad --discretize '" + d + "'");
        auto& values = disc[d.substr(0, eq)];
        for (const auto& v : split(d.substr(eq + 1), ':')) values.push_back(std::stod(v));
      }
      const auto result = exhaustive_min(space, make_objective(ocfg, space, raw), disc);
      const auto best = decode(space, result.best).to_json();
      out << "points: " << result.points << "\nbest value: " << format_real(result.value)
          << "\nbest config: " << best.dump() << '\n';
      if (!fixture_out.empty()) {
        write_fixture(fixture_out, {space_hash(space), fixture_seed, best, result.value});
      }
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace hypabc
