#include <iostream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "prefvec/errors.hpp"

extern char** environ;

namespace {

using namespace prefvec;

// Defaults, then the config file, then PREFVEC_* variables, then flags.
RunConfig load_config(const std::string& path, const KeyValues& flags) {
  RunConfig cfg;
  if (!path.empty()) apply_config(cfg, read_config_file(path));
  apply_config(cfg, env_overrides(environ));
  apply_config(cfg, flags);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference memory with online user vectors: simulation, verification and sensitivity tools"};
  app.require_subcommand(1);

  std::string config_path;
  std::string mode, personas, out_dir, seed, sessions;
  bool force = false, shared = false;
  auto* sim = app.add_subcommand("sim", "Run simulated multi-session episodes and write logs and metrics");
  sim->add_option("--config", config_path, "key = value config file");
  sim->add_option("--mode", mode, "vanilla, static_mem, online_user, a comma list, or all");
  sim->add_option("--personas", personas, "comma-separated persona keys (A-F)");
  sim->add_option("--sessions", sessions, "sessions per persona");
  sim->add_option("--seed", seed, "run seed");
  sim->add_option("--out", out_dir, "output directory");
  sim->add_flag("--force", force, "overwrite a non-empty output directory");
  sim->add_flag("--shared-store", shared, "one memory store per mode shared by all personas");

  int seeds = 1000;
  std::string verify_report;
  std::string verify_config;
  std::string verify_seed;
  auto* verify = app.add_subcommand("verify", "Check the update rule against its analytic properties");
  verify->add_option("--config", verify_config, "key = value config file");
  verify->add_option("--seeds", seeds, "number of random gradient instances");
  verify->add_option("--seed", verify_seed, "base seed");
  verify->add_option("--out", verify_report, "write a JSON report here");

  std::string log_path, sens_config, sens_out;
  bool closed_loop = false;
  std::vector<std::string> perturbations{"all"};
  auto* sens = app.add_subcommand("sensitivity", "Replay a logged run under perturbed reward and gate settings");
  auto* log_opt = sens->add_option("--log", log_path, "episode log (JSONL) written by sim");
  sens->add_flag("--closed-loop", closed_loop,
                 "re-run the online episodes of the configured personas instead of replaying a log")
      ->excludes(log_opt);
  sens->add_option("--perturbation", perturbations, "perturbation names (repeatable, comma list) or all")
      ->delimiter(',');
  sens->add_option("--config", sens_config, "config used for the logged run");
  sens->add_option("--out", sens_out, "write the CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  if (*sens && log_path.empty() && !closed_loop) {
    std::cerr << "sensitivity: --log or --closed-loop is required\n";
    return 1;
  }

  try {
    if (*sim) {
      KeyValues flags;
      if (!mode.empty()) flags["run.modes"] = mode;
      if (!personas.empty()) flags["run.personas"] = personas;
      if (!sessions.empty()) flags["run.sessions"] = sessions;
      if (!seed.empty()) flags["run.seed"] = seed;
      if (!out_dir.empty()) flags["run.out"] = out_dir;
      if (shared) flags["run.shared_store"] = "true";
      return cli::cmd_sim({load_config(config_path, flags), force}, std::cout, std::cerr);
    }
    if (*verify) {
      KeyValues flags;
      if (!verify_seed.empty()) flags["run.seed"] = verify_seed;
      const RunConfig cfg = load_config(verify_config, flags);
      cli::VerifyOptions opts;
      opts.seeds = seeds;
      opts.seed = cfg.seed;
      opts.learning = cfg.pipeline.learning;
      opts.fingerprint = fingerprint(cfg);
      if (!verify_report.empty()) opts.report = verify_report;
      return cli::cmd_verify(opts, std::cout, std::cerr);
    }
    if (*sens) {
      cli::SensitivityOptions opts;
      opts.log = log_path;
      opts.perturbations = perturbations;
      opts.closed_loop = closed_loop;
      if (sens_config.empty() && !closed_loop) {
        // A sim output directory keeps its resolved config next to logs/.
        const auto resolved = std::filesystem::path(log_path).parent_path().parent_path() / "config.resolved";
        if (std::filesystem::exists(resolved)) sens_config = resolved.string();
      }
      opts.config = load_config(sens_config, {});
      if (!sens_out.empty()) opts.csv = sens_out;
      return cli::cmd_sensitivity(opts, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
