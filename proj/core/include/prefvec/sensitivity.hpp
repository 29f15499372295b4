#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/episode.hpp"

namespace prefvec {

/// A named change to the reward and gate configuration.
struct Perturbation {
  std::string name;
  RewardConfig reward;
  GateConfig gate;
};

/// "identity" followed by the reward and gate variants.
std::vector<std::string> perturbation_names();

/// Throws ContractViolation for an unknown name.
Perturbation make_perturbation(std::string_view name, const RewardConfig& reward, const GateConfig& gate);

struct ReplayedUser {
  std::string user_id;
  Vector z_long;
  int gate_changes = 0;  // turns whose gate differs from the logged one
};

/// Re-runs the user-vector updates along a logged trajectory: the logged
/// candidate sets, base scores, item vectors and selections are kept, while
/// the reward, gate, advantage, baseline and policy probabilities are
/// recomputed under `reward` / `gate`. Throws ReplayImpossible when a record
/// lacks the trace needed for this.
std::vector<ReplayedUser> replay_updates(std::span<const TurnRecord> log, const PipelineConfig& cfg,
                                         const RewardConfig& reward, const GateConfig& gate,
                                         const Embedder& embedder);

struct SensitivityUser {
  std::string user_id;
  double base_norm = 0.0;
  double norm = 0.0;
  double cosine = 0.0;
  int gate_changes = 0;
};

struct SensitivityResult {
  std::string perturbation;
  double base_mean_norm = 0.0;
  double mean_norm = 0.0;
  double delta_pct = 0.0;
  double mean_cosine = 0.0;
  int gate_changes = 0;
  std::vector<SensitivityUser> users;
};

SensitivityResult sensitivity_harness(std::span<const TurnRecord> log, const PipelineConfig& cfg,
                                      const Perturbation& perturbation, const Embedder& embedder);

/// The same comparison from fresh closed-loop runs: every persona runs an
/// online episode under the reference and the perturbed configuration, so
/// retrieval and the simulated user react to the perturbed updates.
SensitivityResult closed_loop_sensitivity(std::span<const Persona> personas, int n_sessions, std::uint64_t seed,
                                          const PipelineConfig& cfg, const Perturbation& perturbation,
                                          bool shared_store);

void write_sensitivity_csv(std::ostream& os, std::span<const SensitivityResult> results, std::uint64_t seed,
                           std::string_view fingerprint);

}  // namespace prefvec
