#include <CLI11.hpp>

#include <iostream>

#include "fireret/experiment.hpp"

namespace {

using namespace fireret;

struct CommonOptions {
  std::string config;
  std::string out;
  bool seedless = false;
  std::string snapshot_turns;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "experiment config (key=value lines)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory (default: config key 'out', else ./out)");
  cmd->add_flag("--seedless", o.seedless, "run twice and fail unless both bundles are identical");
  cmd->add_option("--snapshot-turns", o.snapshot_turns, "comma-separated turns to render");
}

std::map<std::string, std::string> overrides_of(const CommonOptions& o) {
  std::map<std::string, std::string> ov;
  if (!o.snapshot_turns.empty()) ov["snapshot_turns"] = o.snapshot_turns;
  return ov;
}

std::filesystem::path out_dir(const CommonOptions& o, const ExperimentConfig& cfg) {
  if (!o.out.empty()) return o.out;
  if (!cfg.out.empty()) return cfg.out;
  return "out";
}

int run_single(const CommonOptions& o, RunMode mode) {
  const auto cfg = load_config(o.config, overrides_of(o));
  auto bundle = run_experiment(cfg, mode);
  if (o.seedless && run_experiment(cfg, mode).files != bundle.files)
    throw Error("--seedless: two runs of the same config produced different output");
  const auto dir = out_dir(o, cfg);
  write_bundle(bundle, dir);
  std::cout << dir.string() << ": " << bundle.summary << '\n';
  return bundle.exit_code;
}

int run_sweep_command(const CommonOptions& o, const std::vector<std::string>& sets, const std::string& mode_name) {
  std::ifstream in(o.config);
  std::stringstream text;
  text << in.rdbuf();
  std::map<std::string, std::string> axes = overrides_of(o);
  for (auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw Error("--set expects key=v1|v2|..., got '" + s + "'");
    axes[s.substr(0, eq)] = s.substr(eq + 1);
  }
  const RunMode mode = mode_name == "simulate" ? RunMode::simulate
                       : mode_name == "transport" ? RunMode::transport
                                                  : RunMode::analyze;
  const std::filesystem::path dir = o.out.empty() ? "sweep" : o.out;
  auto runs = run_sweep(text.str(), axes, dir, mode);
  int worst = 0;
  for (auto& r : runs) {
    std::cout << r.id << ": " << (r.error.empty() ? r.summary : "error: " + r.error) << '\n';
    worst = std::max(worst, r.exit_code);
  }
  std::cout << (dir / "sweep.csv").string() << '\n';
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Firefighter games on truncated Cayley graphs"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::vector<std::string> sets;
  std::string sweep_mode = "analyze";
  struct Sub {
    const char* name;
    const char* help;
    RunMode mode;
  };
  const Sub subs[] = {
      {"generate", "build the truncated graph and write its adjacency list", RunMode::generate},
      {"simulate", "play the configured game and report containment", RunMode::simulate},
      {"analyze", "play the game and run the configured analyses", RunMode::analyze},
      {"transport", "play a transported strategy and certify it", RunMode::transport},
  };
  std::map<CLI::App*, RunMode> modes;
  for (auto& s : subs) {
    auto* cmd = app.add_subcommand(s.name, s.help);
    add_common(cmd, opts);
    modes[cmd] = s.mode;
  }
  auto* sweep = app.add_subcommand("sweep", "run a grid of configs concurrently, one directory per run");
  add_common(sweep, opts);
  sweep->add_option("--set", sets, "axis key=v1|v2|...");
  sweep->add_option("--mode", sweep_mode, "per-run mode")->check(CLI::IsMember({"simulate", "analyze", "transport"}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (sweep->parsed()) return run_sweep_command(opts, sets, sweep_mode);
    for (auto& [cmd, mode] : modes)
      if (cmd->parsed()) return run_single(opts, mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
