#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "psim/adversary/trace_io.hpp"
#include "psim/engine/summary.hpp"
#include "psim/report/compare.hpp"
#include "psim/report/csv.hpp"
#include "psim/report/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kIoError = 1;
constexpr int kValidationError = 2;

bool write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out.flush());
}

bool ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  return fs::is_directory(dir, ec);
}

int io_fail(const std::string& what) {
  std::cerr << "psim: " << what << "\n";
  return kIoError;
}

int load_fail(const psim::engine::LoadError& err) {
  std::cerr << "psim: " << err.describe() << "\n";
  return err.kind == psim::engine::LoadError::Kind::kIo ? kIoError : kValidationError;
}

struct RunArgs {
  std::string config;
  std::string out = "out";
  bool trace = false;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

int cmd_run(const RunArgs& a) {
  auto cfg = psim::engine::load_scenario_file(a.config);
  if (!cfg) return load_fail(cfg.error());
  if (a.seed) cfg.value().seed = *a.seed;
  fs::path out(a.out);
  if (!ensure_dir(out)) return io_fail("cannot create output directory " + a.out);
  auto art = psim::engine::run_scenario(cfg.value(), a.trace);
  bool ok = write_file(out / "summary.json", psim::engine::pretty(art.summary)) &&
            write_file(out / "ground_truth.json", psim::engine::pretty(art.ground_truth)) &&
            write_file(out / "linkage.json", psim::engine::pretty(art.linkage)) &&
            write_file(out / "metrics.csv", psim::report::run_csv(art.summary));
  if (ok && a.trace) {
    std::string body;
    for (const auto& line : art.trace_lines) body += line + "\n";
    ok = write_file(out / "trace.jsonl", body);
  }
  if (!ok) return io_fail("cannot write outputs under " + a.out);
  if (a.strict && art.invariants.total() > 0) {
    std::cerr << "psim: " << art.invariants.total() << " invariant violations\n";
    return kValidationError;
  }
  return kOk;
}

struct SweepArgs {
  std::string config;
  std::string out = "out";
  std::size_t parallel = 1;
  std::optional<std::uint64_t> seed;
  bool strict = false;
};

int cmd_sweep(const SweepArgs& a) {
  if (!fs::exists(a.config)) return io_fail("cannot read " + a.config);
  auto spec = psim::report::load_sweep_file(a.config);
  if (!spec) {
    std::cerr << "psim: invalid sweep";
    for (const auto& v : spec.error()) std::cerr << "\n  " << v.field << ": " << v.constraint;
    std::cerr << "\n";
    return kValidationError;
  }
  if (a.seed) spec.value().base["seed"] = *a.seed;
  fs::path out(a.out);
  if (!ensure_dir(out) || !ensure_dir(out / "runs")) {
    return io_fail("cannot create output directory " + a.out);
  }
  auto result = psim::report::run_sweep(spec.value(), a.parallel);
  if (!write_file(out / "sweep.csv", psim::report::sweep_csv(result))) {
    return io_fail("cannot write sweep.csv");
  }
  bool violations = false;
  for (const auto& r : result.runs) {
    if (!r.summary) continue;
    if (r.summary->at("invariants").at("total").get<std::uint64_t>() > 0) violations = true;
    std::ostringstream name;
    name << "run_" << std::setw(4) << std::setfill('0') << r.index << ".json";
    if (!write_file(out / "runs" / name.str(), psim::engine::pretty(*r.summary))) {
      return io_fail("cannot write run summaries");
    }
  }
  if (!result.all_ok()) {
    for (const auto& r : result.runs) {
      if (r.status != "ok") std::cerr << "psim: run " << r.index << ": " << r.status << "\n";
    }
    return kValidationError;
  }
  if (a.strict && violations) {
    std::cerr << "psim: invariant violations in sweep runs\n";
    return kValidationError;
  }
  return kOk;
}

struct CompareArgs {
  std::vector<std::string> configs;
  std::string out = "out";
  std::size_t replications = 1;
  std::size_t parallel = 1;
  std::optional<std::uint64_t> seed;
};

int cmd_compare(const CompareArgs& a) {
  std::vector<psim::report::ComparisonInput> inputs;
  for (const auto& path : a.configs) {
    auto cfg = psim::engine::load_scenario_file(path);
    if (!cfg) return load_fail(cfg.error());
    if (a.seed) cfg.value().seed = *a.seed;
    std::string label = cfg.value().name.empty() ? fs::path(path).stem().string() : cfg.value().name;
    inputs.push_back({label, cfg.value()});
  }
  auto report = psim::report::compare(inputs, a.replications, a.parallel);
  if (!report) {
    std::cerr << "psim: " << report.error() << "\n";
    return kValidationError;
  }
  fs::path out(a.out);
  if (!ensure_dir(out)) return io_fail("cannot create output directory " + a.out);
  if (!write_file(out / "comparison.json", psim::engine::pretty(report.value().to_json())) ||
      !write_file(out / "comparison.csv", report.value().to_csv())) {
    return io_fail("cannot write comparison outputs");
  }
  return kOk;
}

struct LinkArgs {
  std::string input;
  std::string out = "out";
  double sigma0 = 1.0;
  double beta = 2.0;
  double no_match = 50.0;
  double max_gap = 30.0;
  bool no_semantic = false;
};

int cmd_link(const LinkArgs& a) {
  std::ifstream in(a.input);
  if (!in) return io_fail("cannot read " + a.input);
  auto store = psim::adversary::load_trace(in);
  if (!store) {
    std::cerr << "psim: " << a.input << ":" << store.error().line << ": "
              << store.error().message << "\n";
    return kValidationError;
  }
  psim::adversary::LinkerOptions opts;
  opts.motion = {a.sigma0, a.beta, a.no_match, a.max_gap};
  opts.semantic = !a.no_semantic;
  auto linkage = psim::adversary::link(store.value(), opts);
  fs::path out(a.out);
  if (!ensure_dir(out)) return io_fail("cannot create output directory " + a.out);
  if (!write_file(out / "linkage.json", psim::engine::pretty(linkage.to_json()))) {
    return io_fail("cannot write linkage.json");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudonym change simulator for 5G vehicular networks"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run one scenario");
  run->add_option("--config", run_args.config, "Scenario JSON")->required();
  run->add_option("--out", run_args.out, "Output directory");
  run->add_flag("--trace", run_args.trace, "Write trace.jsonl");
  run->add_option("--seed-override", run_args.seed, "Replace the scenario seed");
  run->add_flag("--strict", run_args.strict, "Exit 2 on runtime invariant violations");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("--config", sweep_args.config, "Sweep JSON")->required();
  sweep->add_option("--out", sweep_args.out, "Output directory");
  sweep->add_option("--parallel", sweep_args.parallel, "Concurrent runs")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--seed-override", sweep_args.seed, "Replace the base seed");
  sweep->add_flag("--strict", sweep_args.strict, "Exit 2 on runtime invariant violations");

  CompareArgs compare_args;
  auto* cmp = app.add_subcommand("compare", "Compare policies on aligned scenarios");
  cmp->add_option("--config", compare_args.configs, "Scenario JSON (repeat)")->required();
  cmp->add_option("--out", compare_args.out, "Output directory");
  cmp->add_option("--replications", compare_args.replications, "Seeds per config")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--parallel", compare_args.parallel, "Concurrent runs")
      ->check(CLI::PositiveNumber);
  cmp->add_option("--seed-override", compare_args.seed, "Replace every config's seed");

  LinkArgs link_args;
  auto* lnk = app.add_subcommand("link", "Run the linking attack on a trace file");
  lnk->add_option("--input", link_args.input, "trace.jsonl")->required();
  lnk->add_option("--out", link_args.out, "Output directory");
  lnk->add_option("--sigma0", link_args.sigma0, "Base position uncertainty (m)");
  lnk->add_option("--beta", link_args.beta, "Uncertainty growth (m/s)");
  lnk->add_option("--no-match-cost", link_args.no_match, "Cost of leaving a tracklet unlinked");
  lnk->add_option("--max-gap", link_args.max_gap, "Longest gap considered (s)");
  lnk->add_flag("--no-semantic", link_args.no_semantic, "Skip quasi-identifier matching");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kValidationError;
  }
  if (*run) return cmd_run(run_args);
  if (*sweep) return cmd_sweep(sweep_args);
  if (*cmp) return cmd_compare(compare_args);
  return cmd_link(link_args);
}
