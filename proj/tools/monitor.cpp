// Command-line front end: run a monitor over a decision stream, generate
// synthetic streams, and benchmark backends.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "iormon/errors.hpp"
#include "iormon/factory.hpp"
#include "iormon/generators.hpp"
#include "iormon/run.hpp"
#include "iormon/stream_io.hpp"

namespace {

using namespace iormon;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

// Writes to `path`, or standard output when it is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  fn(out);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
}

struct RunOptions {
  std::string backend = "bruteforce";
  std::string norm = "l2";
  double epsilon = 0.1;
  double delta = 0.5;
  std::string tau = std::to_string(kDefaultTau);
  std::string blocks;
  std::string schema;
  std::string input;
  std::string format = "csv";
  std::string out;
  std::string stats;
  bool clamp = false;
  bool full_witnesses = false;
  bool summary = false;
  std::uint64_t seed = 0;
  std::size_t window = 1000;
};

MonitorConfig monitor_config(const std::string& backend, const std::string& norm, double epsilon,
                             double delta) {
  MonitorConfig cfg;
  cfg.backend = parse_backend(backend);
  cfg.metric = MetricSpec{.norm = parse_norm(norm), .epsilon_x = epsilon, .delta_z = delta};
  return cfg;
}

int do_run(const RunOptions& o) {
  RunConfig cfg;
  cfg.monitor = monitor_config(o.backend, o.norm, o.epsilon, o.delta);
  cfg.monitor.clamp = o.clamp;
  if (o.tau == "auto") {
    cfg.tau_auto = true;
  } else {
    cfg.monitor.tau = std::stoull(o.tau);
  }
  if (o.blocks == "auto") {
    cfg.blocks_auto = true;
  } else if (!o.blocks.empty()) {
    cfg.monitor.blocks = std::stoull(o.blocks);
  }
  cfg.schema_path = o.schema;
  cfg.input_path = o.input;
  cfg.output_path = o.out == "-" ? std::string() : o.out;
  cfg.format = parse_format(o.format);
  cfg.full_witnesses = o.full_witnesses;
  cfg.seed = o.seed;
  cfg.window = o.window;

  const RunStats stats = run(cfg, std::cout);
  std::cout.flush();
  if (o.stats.empty()) {
    std::cerr << stats.summary_json() << '\n';
  } else {
    write_text(o.stats, stats.summary_json() + "\n");
  }
  if (o.summary) {
    std::cerr << stats.backend << ": " << stats.steps << " decisions, " << stats.violations
              << " with witnesses, " << stats.witness_pairs << " violating pairs\n";
  }
  return 0;
}

struct GenOptions {
  std::size_t n = 1000;
  std::size_t d = 2;
  std::size_t labels = 2;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::string out;
  std::string schema_out;
  // plant
  std::size_t count = 0;
  double epsilon = 0.1;
  std::string norm = "l2";
  std::string input;
  std::string schema;
  std::string truth;
};

int do_gen_uniform(const GenOptions& o) {
  const Schema schema = Schema::all_numeric(o.d);
  const auto points = gen_uniform(o.n, o.d, o.labels, o.seed);
  with_output(o.out, [&](std::ostream& out) { write_points(out, parse_format(o.format), schema, points); });
  if (!o.schema_out.empty()) write_text(o.schema_out, schema_to_json(schema));
  return 0;
}

int do_gen_plant(const GenOptions& o) {
  Schema schema = Schema::all_numeric(o.d);
  std::vector<DecisionPoint> base;
  if (!o.input.empty()) {
    if (o.schema.empty()) throw ConfigError("--input needs --schema");
    schema = load_schema(o.schema);
    base = ingest_file(o.input, parse_format(o.format), schema);
  } else {
    base = gen_uniform(o.n, o.d, o.labels, o.seed);
  }
  const PlantedStream planted =
      plant_violations(std::move(base), schema, parse_norm(o.norm), o.count, o.epsilon, o.seed + 1);
  with_output(o.out, [&](std::ostream& out) {
    write_points(out, parse_format(o.format), schema, planted.points);
  });
  if (!o.schema_out.empty()) write_text(o.schema_out, schema_to_json(schema));
  if (!o.truth.empty()) {
    nlohmann::ordered_json truth = nlohmann::ordered_json::array();
    for (const PlantedPair& p : planted.truth) truth.push_back({p.original, p.copy});
    write_text(o.truth, truth.dump() + "\n");
  }
  return 0;
}

struct BenchOptions {
  std::string sweep = "bruteforce:l2,kdtree:l2,snn:l2,bdd:linf";
  std::size_t n = 20000;
  std::size_t d = 12;
  std::size_t labels = 2;
  double epsilon = 0.05;
  std::uint64_t seed = 0;
  std::size_t tau = kDefaultTau;
  std::size_t warmup = 0;
  std::size_t window = 1000;
  std::size_t every = 1;
  std::string out;
};

// "backend[:norm][:kK]", e.g. "kdtree:linf:k4".
MonitorConfig parse_sweep_entry(const std::string& entry, const BenchOptions& o) {
  std::vector<std::string> parts;
  std::stringstream ss(entry);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty()) throw ConfigError("empty sweep entry");
  std::string norm = parts[0] == "bdd" ? "linf" : "l2";
  std::optional<std::size_t> blocks;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (!parts[i].empty() && parts[i][0] == 'k') {
      blocks = std::stoull(parts[i].substr(1));
    } else {
      norm = parts[i];
    }
  }
  MonitorConfig cfg = monitor_config(parts[0], norm, o.epsilon, 0.5);
  cfg.tau = o.tau;
  cfg.blocks = blocks;
  return cfg;
}

int do_bench(const BenchOptions& o) {
  const Schema schema = Schema::all_numeric(o.d);
  std::vector<std::pair<std::string, MonitorConfig>> configs;
  std::stringstream ss(o.sweep);
  for (std::string entry; std::getline(ss, entry, ',');) {
    MonitorConfig cfg = parse_sweep_entry(entry, o);
    validate(cfg, schema);
    configs.emplace_back(entry, cfg);
  }
  const auto stream = gen_uniform(o.warmup + o.n, o.d, o.labels, o.seed);
  const std::span<const DecisionPoint> history(stream.data(), o.warmup);
  const std::span<const DecisionPoint> measured(stream.data() + o.warmup, o.n);
  const std::size_t every = std::max<std::size_t>(o.every, 1);

  with_output(o.out, [&](std::ostream& out) {
    out << "config,step,latency_ns,rolling_ns,comparisons\n";
    for (const auto& [label, cfg] : configs) {
      auto monitor = make_monitor(cfg, schema);
      monitor->absorb(history);
      std::ostringstream sink;
      std::uint64_t before = monitor->counters().comparisons;
      std::vector<double> latency;
      double rolling = 0.0;
      for (std::size_t i = 0; i < measured.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        (void)monitor->observe(measured[i]);
        const double ns = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - start).count();
        latency.push_back(ns);
        rolling += ns;
        if (latency.size() > o.window) rolling -= latency[latency.size() - 1 - o.window];
        const std::uint64_t after = monitor->counters().comparisons;
        if (i % every == 0) {
          out << label << ',' << o.warmup + i << ',' << format_double(ns) << ','
              << format_double(rolling / static_cast<double>(std::min(latency.size(), o.window)))
              << ',' << after - before << '\n';
        }
        before = after;
      }
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime input-output robustness monitor"};
  app.require_subcommand(1);

  RunOptions run_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Monitor a decision stream and report witnesses");
  run_cmd->add_option("--backend", run_opts.backend, "bruteforce, kdtree, snn or bdd")->capture_default_str();
  run_cmd->add_option("--norm", run_opts.norm, "l2 or linf")->capture_default_str();
  run_cmd->add_option("--epsilon", run_opts.epsilon, "Input closeness radius")->capture_default_str();
  run_cmd->add_option("--delta", run_opts.delta, "Output distance threshold")->capture_default_str();
  run_cmd->add_option("--tau", run_opts.tau, "Rebuild period, or 'auto'")->capture_default_str();
  run_cmd->add_option("--blocks", run_opts.blocks, "Block-parallel monitoring with K blocks, or 'auto'");
  run_cmd->add_option("--schema", run_opts.schema, "Schema JSON file")->required();
  run_cmd->add_option("--input", run_opts.input, "Decision stream")->required();
  run_cmd->add_option("--format", run_opts.format, "csv or jsonl")->capture_default_str();
  run_cmd->add_option("--out", run_opts.out, "Report file (default: standard output)");
  run_cmd->add_option("--stats", run_opts.stats, "Stats JSON file (default: standard error)");
  run_cmd->add_option("--seed", run_opts.seed, "Seed recorded in the stats")->capture_default_str();
  run_cmd->add_option("--window", run_opts.window, "Rolling-average window")->capture_default_str();
  run_cmd->add_flag("--clamp", run_opts.clamp, "Clamp out-of-range values to the grid (bdd)");
  run_cmd->add_flag("--full-witnesses", run_opts.full_witnesses, "Echo witness decisions");
  run_cmd->add_flag("--summary", run_opts.summary, "Human-readable summary on standard error");

  GenOptions gen_opts;
  CLI::App* gen_cmd = app.add_subcommand("gen", "Generate synthetic decision streams");
  gen_cmd->require_subcommand(1);
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--n", gen_opts.n, "Decisions")->capture_default_str();
    cmd->add_option("--d", gen_opts.d, "Dimension")->capture_default_str();
    cmd->add_option("--labels", gen_opts.labels, "Label count")->capture_default_str();
    cmd->add_option("--seed", gen_opts.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--format", gen_opts.format, "csv or jsonl")->capture_default_str();
    cmd->add_option("--out", gen_opts.out, "Output file (default: standard output)");
    cmd->add_option("--schema-out", gen_opts.schema_out, "Write the schema JSON here");
  };
  CLI::App* uniform_cmd = gen_cmd->add_subcommand("uniform", "Uniform features in [0,1)^d");
  add_common(uniform_cmd);
  CLI::App* plant_cmd = gen_cmd->add_subcommand("plant", "Violation-free stream plus planted pairs");
  add_common(plant_cmd);
  plant_cmd->add_option("--count", gen_opts.count, "Planted pairs")->capture_default_str();
  plant_cmd->add_option("--epsilon", gen_opts.epsilon, "Radius")->capture_default_str();
  plant_cmd->add_option("--norm", gen_opts.norm, "l2 or linf")->capture_default_str();
  plant_cmd->add_option("--input", gen_opts.input, "Plant into this stream instead of a uniform one");
  plant_cmd->add_option("--schema", gen_opts.schema, "Schema of --input");
  plant_cmd->add_option("--truth", gen_opts.truth, "Write planted [original, copy] pairs here");

  BenchOptions bench_opts;
  CLI::App* bench_cmd = app.add_subcommand("bench", "Per-step latency CSV for a sweep of backends");
  bench_cmd->add_option("--sweep", bench_opts.sweep, "Comma list of backend[:norm][:kK]")->capture_default_str();
  bench_cmd->add_option("--n", bench_opts.n, "Measured decisions")->capture_default_str();
  bench_cmd->add_option("--d", bench_opts.d, "Dimension")->capture_default_str();
  bench_cmd->add_option("--labels", bench_opts.labels, "Label count")->capture_default_str();
  bench_cmd->add_option("--epsilon", bench_opts.epsilon, "Radius")->capture_default_str();
  bench_cmd->add_option("--seed", bench_opts.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--tau", bench_opts.tau, "Rebuild period")->capture_default_str();
  bench_cmd->add_option("--warmup", bench_opts.warmup, "Decisions stored before measuring")->capture_default_str();
  bench_cmd->add_option("--window", bench_opts.window, "Rolling-average window")->capture_default_str();
  bench_cmd->add_option("--every", bench_opts.every, "Emit every k-th step")->capture_default_str();
  bench_cmd->add_option("--out", bench_opts.out, "CSV file (default: standard output)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return do_run(run_opts);
    if (uniform_cmd->parsed()) return do_gen_uniform(gen_opts);
    if (plant_cmd->parsed()) return do_gen_plant(gen_opts);
    if (bench_cmd->parsed()) return do_bench(bench_opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return kExitData;
  } catch (const IngestError& e) {
    std::cerr << "ingest error: " << e.what() << '\n';
    return kExitData;
  } catch (const MonitorError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
