#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "prefvec/config.hpp"

namespace prefvec::cli {

struct SimOptions {
  RunConfig config;
  bool force = false;
};

/// Runs every (mode, persona) episode and writes logs, metrics, states,
/// cards, the resolved config and a manifest under config.out_dir.
/// Returns 0 on success, 2 when the output directory would be clobbered.
int cmd_sim(const SimOptions& opts, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  int seeds = 1000;
  std::uint64_t seed = 7;
  LearningConfig learning;
  double eta_fault = 1.0;  // != 1 injects a deliberate learning-rate mismatch
  std::string fingerprint;  // of the config the learning rates came from
  std::optional<std::filesystem::path> report;
};

/// Returns 0 iff every check passes.
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

struct SensitivityOptions {
  std::filesystem::path log;
  std::vector<std::string> perturbations{"all"};
  RunConfig config;
  std::optional<std::filesystem::path> csv;
  // Ignore the log and re-run the online episodes of config.personas instead.
  bool closed_loop = false;
};

/// Replays the log (or re-runs the episodes with closed_loop) under each
/// perturbation and prints a CSV. Returns 2 and
/// lists the known names for an unknown perturbation.
int cmd_sensitivity(const SensitivityOptions& opts, std::ostream& out, std::ostream& err);

/// File layout of a sim run.
std::string episode_stem(SystemMode mode, std::string_view persona_key);

}  // namespace prefvec::cli
