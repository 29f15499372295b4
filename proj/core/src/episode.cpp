#include "prefvec/episode.hpp"

#include "prefvec/errors.hpp"

namespace prefvec {

std::string_view to_string(SystemMode mode) {
  switch (mode) {
    case SystemMode::Vanilla: return "vanilla";
    case SystemMode::StaticMem: return "static_mem";
    case SystemMode::OnlineUser: return "online_user";
  }
  return "?";
}

SystemMode mode_from_string(std::string_view s) {
  if (s == "vanilla" || s == "VANILLA") return SystemMode::Vanilla;
  if (s == "static_mem" || s == "STATIC_MEM" || s == "STATIC-MEM") return SystemMode::StaticMem;
  if (s == "online_user" || s == "ONLINE_USER" || s == "ONLINE-USER") return SystemMode::OnlineUser;
  throw ParseError("unknown system mode: " + std::string(s));
}

void PipelineConfig::validate() const {
  if (embedder.dim == 0) throw ContractViolation("embedder.dim must be positive");
  retrieval.validate();
  learning.validate();
  reward.validate();
  gate.validate();
  script.validate();
  if (retrieval.temperature != learning.temperature)
    throw ContractViolation("retrieval and learning must share one temperature");
  if (!(reranker_kappa > 0.0)) throw ContractViolation("reranker.kappa must be > 0");
}

namespace {

class Loop {
 public:
  Loop(SystemMode mode, const PipelineConfig& cfg, std::uint64_t seed, PopulationRun& run)
      : mode_(mode), cfg_(cfg), seed_(seed), run_(run), reranker_(*run.embedder, cfg.reranker_kappa) {}

  void run_session(UserRun& user, int session_index, int total_sessions) {
    const SessionScript script =
        generate_session_script(user.persona, session_index, std::max(total_sessions, 3), seed_, cfg_.script);
    for (std::size_t t = 0; t < script.turns.size(); ++t) {
      user.records.push_back(run_turn(user, script, session_index, t));
    }
    user.z_short_last = user.state.z_short;
    session_reset(user.state);
  }

 private:
  bool uses_memory() const { return mode_ != SystemMode::Vanilla; }

  std::vector<std::string> ingest(const UserRun& user, const std::string& utterance, int session_index,
                                  int turn_index) {
    std::vector<std::string> ids;
    if (!uses_memory()) return ids;
    const DialogueTurn window[] = {{"user", utterance}};
    for (auto& pref : extractor_.extract(window)) {
      CardFields f;
      f.user_id = user.persona.id;
      f.session_id = user.persona.id + "/s" + std::to_string(session_index);
      f.source_turn_ids = {turn_index};
      f.source_query = utterance;
      f.preference = std::move(pref);
      ids.push_back(run_.store->add_card(std::move(f)).id);
    }
    return ids;
  }

  TurnRecord run_turn(UserRun& user, const SessionScript& script, int session_index, std::size_t t) {
    const ScriptTurn& turn = script.turns[t];
    TurnRecord rec;
    rec.user_id = user.persona.id;
    rec.mode = std::string(to_string(mode_));
    rec.session_index = session_index;
    rec.turn_index = static_cast<int>(t);
    rec.phase = script.phase;
    rec.query = turn.text;
    rec.task_tag = turn.task_tag;
    rec.states_preference = turn.states_preference;

    rec.new_card_ids = ingest(user, turn.text, session_index, rec.turn_index);

    if (uses_memory()) {
      const Vector z_eff = mode_ == SystemMode::OnlineUser
                               ? effective_vector(user.state, cfg_.learning)
                               : Vector(run_.store->item_dim(), 0.0);
      for (const auto* c : run_.store->global_cards(user.persona.id)) {
        rec.global_ids.push_back(c->id);
        rec.injected_ids.push_back(c->id);
        rec.injected_notes.push_back(c->note);
      }
      rec.retrieval = retrieve(*run_.store, user.persona.id, turn.text, z_eff, reranker_, cfg_.retrieval);
      for (const auto& id : rec.retrieval.selected) {
        rec.injected_ids.push_back(id);
        rec.injected_notes.push_back(run_.store->find(id)->note);
      }
    } else {
      rec.retrieval.query = turn.text;
      rec.retrieval.transformed_query = transform_query(turn.text);
    }

    rec.response = agent_respond(turn.text, rec.injected_notes, Lang::En);
    const Judgement judgement = judge_turn(rec.response, user.persona.prefs);
    rec.satisfaction = judgement.satisfaction;
    rec.violations = judgement.violations;

    const FollowUp fu = user_followup(script, t, judgement, user.persona, session_index, seed_, cfg_.script);
    rec.followup = fu.text;
    rec.followup_generated = fu.generated;
    rec.complaint = fu.complaint;
    rec.baseline_before = user.state.baseline;

    if (!fu.text.empty()) {
      const double r = estimate_reward(turn.text, fu.text, *run_.embedder, cfg_.reward);
      const double g = compute_gate(r, rec.retrieval.sq_max, cfg_.gate);
      const double a = advantage(r, g, user.state.baseline);
      rec.reward = r;
      rec.gate = g;
      rec.advantage = a;
      if (mode_ == SystemMode::OnlineUser) {
        if (!rec.retrieval.selected.empty()) {
          std::vector<std::string> ids;
          Vector probs;
          for (const auto& c : rec.retrieval.candidates) {
            ids.push_back(c.card_id);
            probs.push_back(c.policy_prob);
          }
          rec.update_applied = reinforce_update(user.state, cfg_.learning, ids, rec.retrieval.item_vecs, probs,
                                                rec.retrieval.selected, a)
                                   .applied;
        }
        update_baseline(user.state, cfg_.learning, r);
      }
      if (fu.generated) rec.followup_card_ids = ingest(user, fu.text, session_index, rec.turn_index);
    }
    rec.z_long_norm = norm2(user.state.z_long);
    return rec;
  }

  SystemMode mode_;
  const PipelineConfig& cfg_;
  std::uint64_t seed_;
  PopulationRun& run_;
  CosineReranker reranker_;
  RuleExtractor extractor_;
};

}  // namespace

PopulationRun run_population(SystemMode mode, std::span<const Persona> personas, int n_sessions,
                             std::uint64_t seed, const PipelineConfig& cfg) {
  cfg.validate();
  if (n_sessions < 2) throw ContractViolation("run_population: need at least 2 sessions");
  if (personas.empty()) throw ContractViolation("run_population: no personas");

  PopulationRun run;
  run.mode = mode;
  run.seed = seed;
  run.sessions = n_sessions;
  run.embedder = std::make_unique<HashingEmbedder>(cfg.embedder);
  MemoryStoreConfig mem = cfg.memory;
  mem.id_seed = seed;
  run.store = std::make_unique<MemoryStore>(*run.embedder, mem);
  for (const auto& p : personas) {
    run.users.push_back({p, UserState::fresh(p.id, run.store->item_dim()), {}, {}});
  }

  Loop loop(mode, cfg, seed, run);
  for (int s = 1; s <= n_sessions; ++s) {
    for (auto& user : run.users) loop.run_session(user, s, n_sessions);
  }
  return run;
}

std::vector<TurnRecord> run_episode(SystemMode mode, const Persona& persona, int n_sessions, std::uint64_t seed,
                                    const PipelineConfig& cfg) {
  const Persona one[] = {persona};
  PopulationRun run = run_population(mode, one, n_sessions, seed, cfg);
  return std::move(run.users.front().records);
}

std::map<std::string, std::vector<PrefKind>> card_kind_map(const MemoryStore& store) {
  std::map<std::string, std::vector<PrefKind>> out;
  for (const auto& c : store.cards()) out[c.id] = encoded_kinds(c.preference.action);
  return out;
}

}  // namespace prefvec
