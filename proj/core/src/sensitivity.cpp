#include "prefvec/sensitivity.hpp"

#include <algorithm>
#include <map>

#include "prefvec/errors.hpp"
#include "prefvec/metrics.hpp"

namespace prefvec {

std::vector<std::string> perturbation_names() {
  return {"identity",   "half_neg_keywords", "noisy_neg_keywords", "clip_half",      "dampen_0.1",
          "dampen_0.3", "fixed_g_0.5",       "fixed_g_1.0",        "thresh_0.1_0.4", "thresh_0.3_0.6"};
}

Perturbation make_perturbation(std::string_view name, const RewardConfig& reward, const GateConfig& gate) {
  Perturbation p{std::string(name), reward, gate};
  if (name == "identity") {
  } else if (name == "half_neg_keywords") {
    p.reward.negative_keywords.resize((reward.negative_keywords.size() + 1) / 2);
  } else if (name == "noisy_neg_keywords") {
    // Spurious negatives that also fire on polite or neutral follow-ups.
    for (const char* kw : {"please", "again", "but", "instead"}) p.reward.negative_keywords.emplace_back(kw);
  } else if (name == "clip_half") {
    p.reward.clip_low = -0.5;
    p.reward.clip_high = 0.5;
  } else if (name == "dampen_0.1") {
    p.reward.dampen_factor = 0.1;
  } else if (name == "dampen_0.3") {
    p.reward.dampen_factor = 0.3;
  } else if (name == "fixed_g_0.5") {
    p.gate.fixed = 0.5;
  } else if (name == "fixed_g_1.0") {
    p.gate.fixed = 1.0;
  } else if (name == "thresh_0.1_0.4") {
    p.gate.low_sim = 0.1;
    p.gate.high_sim_neg = 0.4;
  } else if (name == "thresh_0.3_0.6") {
    p.gate.low_sim = 0.3;
    p.gate.high_sim_neg = 0.6;
  } else {
    std::string msg = "unknown perturbation '" + std::string(name) + "'; available:";
    for (const auto& n : perturbation_names()) msg += " " + n;
    throw ContractViolation(msg);
  }
  p.reward.validate();
  p.gate.validate();
  return p;
}

namespace {

void check_trace(const TurnRecord& r) {
  const auto where = [&] {
    return r.user_id + " session " + std::to_string(r.session_index) + " turn " + std::to_string(r.turn_index);
  };
  if (r.reward && r.followup.empty()) throw ReplayImpossible("reward without follow-up text at " + where());
  if (r.retrieval.item_vecs.size() != r.retrieval.candidates.size())
    throw ReplayImpossible("item vectors missing from trace at " + where());
  for (const auto& id : r.retrieval.selected) {
    const bool known = std::any_of(r.retrieval.candidates.begin(), r.retrieval.candidates.end(),
                                   [&](const ScoredCandidate& c) { return c.card_id == id; });
    if (!known) throw ReplayImpossible("selected card not among candidates at " + where());
  }
  if (!r.retrieval.candidates.empty() && r.retrieval.query_sims.size() != r.retrieval.candidates.size())
    throw ReplayImpossible("query similarities missing from trace at " + where());
}

std::size_t item_space_width(const PipelineConfig& cfg) {
  return std::min({cfg.memory.item_dim, cfg.embedder.dim, cfg.memory.warmup_threshold - 1});
}

}  // namespace

std::vector<ReplayedUser> replay_updates(std::span<const TurnRecord> log, const PipelineConfig& cfg,
                                         const RewardConfig& reward, const GateConfig& gate,
                                         const Embedder& embedder) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const TurnRecord*>> by_user;
  for (const auto& r : log) {
    check_trace(r);
    if (!by_user.count(r.user_id)) order.push_back(r.user_id);
    by_user[r.user_id].push_back(&r);
  }

  std::vector<ReplayedUser> out;
  for (const auto& uid : order) {
    UserState st = UserState::fresh(uid, item_space_width(cfg));
    ReplayedUser ru{uid, {}, 0};
    int session = -1;
    for (const auto* r : by_user[uid]) {
      if (session >= 0 && r->session_index != session) session_reset(st);
      session = r->session_index;
      if (!r->reward) continue;
      const double rh = estimate_reward(r->query, r->followup, embedder, reward);
      const double g = compute_gate(rh, r->retrieval.sq_max, gate);
      if (r->gate && *r->gate != g) ++ru.gate_changes;
      const double a = advantage(rh, g, st.baseline);
      if (!r->retrieval.selected.empty()) {
        std::vector<std::string> ids;
        Vector base;
        for (const auto& c : r->retrieval.candidates) {
          ids.push_back(c.card_id);
          base.push_back(c.base_score);
        }
        const Vector z_eff = effective_vector(st, cfg.learning);
        const auto scored = score_from_base(ids, base, r->retrieval.item_vecs, z_eff, cfg.learning.temperature);
        Vector probs;
        for (const auto& c : scored) probs.push_back(c.policy_prob);
        reinforce_update(st, cfg.learning, ids, r->retrieval.item_vecs, probs, r->retrieval.selected, a);
      }
      update_baseline(st, cfg.learning, rh);
    }
    ru.z_long = st.z_long;
    out.push_back(std::move(ru));
  }
  return out;
}

namespace {

SensitivityResult compare_users(std::string name, const std::vector<ReplayedUser>& base,
                                const std::vector<ReplayedUser>& pert) {
  SensitivityResult res;
  res.perturbation = std::move(name);
  for (std::size_t i = 0; i < base.size(); ++i) {
    SensitivityUser u;
    u.user_id = base[i].user_id;
    u.base_norm = norm2(base[i].z_long);
    u.norm = norm2(pert[i].z_long);
    // Two zero vectors point "the same way" for this purpose.
    u.cosine = (u.base_norm == 0.0 && u.norm == 0.0) ? 1.0 : cosine(base[i].z_long, pert[i].z_long);
    u.gate_changes = pert[i].gate_changes - base[i].gate_changes;
    res.base_mean_norm += u.base_norm;
    res.mean_norm += u.norm;
    res.mean_cosine += u.cosine;
    res.gate_changes += u.gate_changes;
    res.users.push_back(std::move(u));
  }
  if (!res.users.empty()) {
    const auto n = static_cast<double>(res.users.size());
    res.base_mean_norm /= n;
    res.mean_norm /= n;
    res.mean_cosine /= n;
  }
  res.delta_pct = res.base_mean_norm > 0.0 ? 100.0 * (res.mean_norm - res.base_mean_norm) / res.base_mean_norm : 0.0;
  return res;
}

std::vector<UserRun> run_users(std::span<const Persona> personas, int n_sessions, std::uint64_t seed,
                               const PipelineConfig& cfg, bool shared_store) {
  std::vector<UserRun> users;
  if (shared_store) {
    auto run = run_population(SystemMode::OnlineUser, personas, n_sessions, seed, cfg);
    return std::move(run.users);
  }
  for (const auto& p : personas) {
    const Persona one[] = {p};
    auto run = run_population(SystemMode::OnlineUser, one, n_sessions, seed, cfg);
    users.push_back(std::move(run.users.front()));
  }
  return users;
}

}  // namespace

SensitivityResult sensitivity_harness(std::span<const TurnRecord> log, const PipelineConfig& cfg,
                                      const Perturbation& perturbation, const Embedder& embedder) {
  const auto base = replay_updates(log, cfg, cfg.reward, cfg.gate, embedder);
  const auto pert = replay_updates(log, cfg, perturbation.reward, perturbation.gate, embedder);
  return compare_users(perturbation.name, base, pert);
}

SensitivityResult closed_loop_sensitivity(std::span<const Persona> personas, int n_sessions, std::uint64_t seed,
                                          const PipelineConfig& cfg, const Perturbation& perturbation,
                                          bool shared_store) {
  PipelineConfig alt = cfg;
  alt.reward = perturbation.reward;
  alt.gate = perturbation.gate;
  const auto base_runs = run_users(personas, n_sessions, seed, cfg, shared_store);
  const auto alt_runs = run_users(personas, n_sessions, seed, alt, shared_store);
  std::vector<ReplayedUser> base, pert;
  for (std::size_t i = 0; i < base_runs.size(); ++i) {
    const auto& b = base_runs[i];
    const auto& a = alt_runs[i];
    ReplayedUser pu{a.state.user_id, a.state.z_long, 0};
    // Trajectories may diverge, so turns are compared by position.
    const std::size_t n = std::min(b.records.size(), a.records.size());
    for (std::size_t t = 0; t < n; ++t)
      if (b.records[t].gate != a.records[t].gate) ++pu.gate_changes;
    base.push_back({b.state.user_id, b.state.z_long, 0});
    pert.push_back(std::move(pu));
  }
  return compare_users(perturbation.name, base, pert);
}

void write_sensitivity_csv(std::ostream& os, std::span<const SensitivityResult> results, std::uint64_t seed,
                           std::string_view fingerprint) {
  os << "config,mean_norm_z_long,delta_pct,cosine_to_base,gate_changes,seed,config_fingerprint\n";
  for (const auto& r : results) {
    os << r.perturbation << ',' << format_number(r.mean_norm) << ',' << format_number(r.delta_pct) << ','
       << format_number(r.mean_cosine) << ',' << r.gate_changes << ',' << seed << ',' << fingerprint << '\n';
  }
}

}  // namespace prefvec
