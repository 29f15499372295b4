#include "prefvec/persistence.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "prefvec/errors.hpp"

namespace prefvec {

using nlohmann::json;

namespace {

Phase phase_from_string(std::string_view s) {
  if (s == "reveal") return Phase::Reveal;
  if (s == "retention") return Phase::Retention;
  if (s == "mixed") return Phase::Mixed;
  throw ParseError("unknown phase: " + std::string(s));
}

json parse(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

// Wraps nlohmann type/field errors into ParseError.
template <class F>
auto decode(std::string_view what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

void stamp_into(json& j, const FileStamp& stamp) {
  j["config_fingerprint"] = stamp.fingerprint;
  j["seed"] = stamp.seed;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string state_to_json(const UserState& state, const FileStamp& stamp) {
  json j;
  j["user_id"] = state.user_id;
  j["z_long"] = state.z_long;
  j["z_short"] = state.z_short;
  j["b"] = state.baseline;
  j["sessions_completed"] = state.sessions_completed;
  json hist = json::array();
  for (const auto& s : state.norm_history) hist.push_back({{"session", s.session}, {"norm", s.norm}});
  j["norm_history"] = hist;
  stamp_into(j, stamp);
  return j.dump(2) + "\n";
}

LoadedState state_from_json(std::string_view text, std::string_view expected_fingerprint) {
  const json j = parse(text, "user state");
  LoadedState out = decode("user state", [&] {
    LoadedState ls;
    ls.state.user_id = j.at("user_id").get<std::string>();
    ls.state.z_long = j.at("z_long").get<Vector>();
    ls.state.z_short = j.at("z_short").get<Vector>();
    ls.state.baseline = j.at("b").get<double>();
    ls.state.sessions_completed = j.at("sessions_completed").get<int>();
    for (const auto& s : j.at("norm_history"))
      ls.state.norm_history.push_back({s.at("session").get<int>(), s.at("norm").get<double>()});
    ls.stamp.fingerprint = j.at("config_fingerprint").get<std::string>();
    ls.stamp.seed = j.at("seed").get<std::uint64_t>();
    return ls;
  });
  const auto& st = out.state;
  if (st.z_long.size() != st.z_short.size()) throw ContractViolation("user state: z_long and z_short differ in size");
  if (!all_finite(st.z_long) || !all_finite(st.z_short)) throw ContractViolation("user state: non-finite vector");
  if (st.baseline < -1.0 || st.baseline > 1.0) throw ContractViolation("user state: baseline outside [-1, 1]");
  out.fingerprint_mismatch = !expected_fingerprint.empty() && expected_fingerprint != out.stamp.fingerprint;
  return out;
}

void save_state(const std::filesystem::path& path, const UserState& state, const FileStamp& stamp) {
  write_file_atomic(path, state_to_json(state, stamp));
}

LoadedState load_state(const std::filesystem::path& path, std::string_view expected_fingerprint) {
  return state_from_json(read_file(path), expected_fingerprint);
}

std::string card_to_json(const MemoryCard& c, const FileStamp& stamp) {
  json j;
  j["id"] = c.id;
  j["note"] = c.note;
  j["condition"] = c.preference.condition;
  j["action"] = c.preference.action;
  j["is_global"] = c.is_global;
  j["embedding"] = c.embedding;
  j["item_vec"] = c.item_vec;
  j["user_id"] = c.user_id;
  j["session_id"] = c.session_id;
  j["source_turn_ids"] = c.source_turn_ids;
  j["source_query"] = c.source_query;
  stamp_into(j, stamp);
  return j.dump();
}

MemoryCard card_from_json(std::string_view line) {
  const json j = parse(line, "memory card");
  return decode("memory card", [&] {
    MemoryCard c;
    c.id = j.at("id").get<std::string>();
    c.note = j.at("note").get<std::string>();
    c.preference.condition = j.at("condition").get<std::string>();
    c.preference.action = j.at("action").get<std::string>();
    c.is_global = j.at("is_global").get<bool>();
    c.embedding = j.at("embedding").get<Vector>();
    c.item_vec = j.at("item_vec").get<Vector>();
    c.user_id = j.at("user_id").get<std::string>();
    c.session_id = j.at("session_id").get<std::string>();
    c.source_turn_ids = j.at("source_turn_ids").get<std::vector<int>>();
    c.source_query = j.at("source_query").get<std::string>();
    return c;
  });
}

std::string pca_to_json(const std::optional<PcaModel>& pca, const FileStamp& stamp) {
  json j;
  j["fitted"] = pca.has_value();
  if (pca) {
    j["input_dim"] = pca->input_dim();
    j["output_dim"] = pca->output_dim();
    j["mean"] = pca->mean;
    j["components"] = pca->components;
  }
  stamp_into(j, stamp);
  return j.dump() + "\n";
}

std::optional<PcaModel> pca_from_json(std::string_view text) {
  const json j = parse(text, "pca model");
  return decode("pca model", [&]() -> std::optional<PcaModel> {
    if (!j.at("fitted").get<bool>()) return std::nullopt;
    PcaModel m;
    m.mean = j.at("mean").get<Vector>();
    m.components = j.at("components").get<std::vector<Vector>>();
    if (m.input_dim() != j.at("input_dim").get<std::size_t>() ||
        m.output_dim() != j.at("output_dim").get<std::size_t>())
      throw ParseError("pca model: stated dimensions do not match the data");
    for (const auto& row : m.components) {
      if (row.size() != m.input_dim()) throw ParseError("pca model: ragged components");
    }
    return m;
  });
}

std::string turn_record_to_json(const TurnRecord& r, const FileStamp& stamp) {
  json j;
  j["user_id"] = r.user_id;
  j["mode"] = r.mode;
  j["session_index"] = r.session_index;
  j["turn_index"] = r.turn_index;
  j["phase"] = std::string(to_string(r.phase));
  j["query"] = r.query;
  j["task_tag"] = r.task_tag;
  j["states_preference"] = r.states_preference;
  j["new_card_ids"] = r.new_card_ids;
  j["global_note_ids"] = r.global_ids;
  j["injected_note_ids"] = r.injected_ids;
  j["injected_notes"] = r.injected_notes;

  json tr;
  tr["query"] = r.retrieval.query;
  tr["transformed_query"] = r.retrieval.transformed_query ? json(*r.retrieval.transformed_query) : json(nullptr);
  json cands = json::array();
  for (std::size_t i = 0; i < r.retrieval.candidates.size(); ++i) {
    const auto& c = r.retrieval.candidates[i];
    cands.push_back({{"id", c.card_id},
                     {"s0", c.base_score},
                     {"bonus", c.user_bonus},
                     {"s", c.total_score},
                     {"prob", c.policy_prob},
                     {"query_sim", r.retrieval.query_sims.at(i)},
                     {"item_vec", r.retrieval.item_vecs.at(i)}});
  }
  tr["candidates"] = cands;
  tr["selected"] = r.retrieval.selected;
  tr["sq_max"] = r.retrieval.sq_max;
  j["retrieval"] = tr;

  j["response"] = r.response;
  j["satisfaction"] = r.satisfaction;
  json viol = json::array();
  for (auto v : r.violations) viol.push_back(std::string(to_string(v)));
  j["violations"] = viol;
  j["followup"] = r.followup;
  j["followup_generated"] = r.followup_generated;
  j["complaint"] = r.complaint;
  j["followup_card_ids"] = r.followup_card_ids;
  j["reward"] = opt(r.reward);
  j["gate"] = opt(r.gate);
  j["advantage"] = opt(r.advantage);
  j["baseline_before"] = r.baseline_before;
  j["update_applied"] = r.update_applied;
  j["z_long_norm"] = r.z_long_norm;
  stamp_into(j, stamp);
  return j.dump();
}

TurnRecord turn_record_from_json(std::string_view line) {
  const json j = parse(line, "turn record");
  return decode("turn record", [&] {
    TurnRecord r;
    r.user_id = j.at("user_id").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.session_index = j.at("session_index").get<int>();
    r.turn_index = j.at("turn_index").get<int>();
    r.phase = phase_from_string(j.at("phase").get<std::string>());
    r.query = j.at("query").get<std::string>();
    r.task_tag = j.at("task_tag").get<std::string>();
    r.states_preference = j.at("states_preference").get<bool>();
    r.new_card_ids = j.at("new_card_ids").get<std::vector<std::string>>();
    r.global_ids = j.at("global_note_ids").get<std::vector<std::string>>();
    r.injected_ids = j.at("injected_note_ids").get<std::vector<std::string>>();
    r.injected_notes = j.at("injected_notes").get<std::vector<std::string>>();

    const json& tr = j.at("retrieval");
    r.retrieval.query = tr.at("query").get<std::string>();
    if (!tr.at("transformed_query").is_null()) r.retrieval.transformed_query = tr.at("transformed_query").get<std::string>();
    for (const auto& c : tr.at("candidates")) {
      r.retrieval.candidates.push_back({c.at("id").get<std::string>(), c.at("s0").get<double>(),
                                        c.at("bonus").get<double>(), c.at("s").get<double>(),
                                        c.at("prob").get<double>()});
      r.retrieval.query_sims.push_back(c.at("query_sim").get<double>());
      r.retrieval.item_vecs.push_back(c.at("item_vec").get<Vector>());
    }
    r.retrieval.selected = tr.at("selected").get<std::vector<std::string>>();
    r.retrieval.sq_max = tr.at("sq_max").get<double>();

    r.response = j.at("response").get<std::string>();
    r.satisfaction = j.at("satisfaction").get<double>();
    for (const auto& v : j.at("violations")) r.violations.push_back(violation_from_string(v.get<std::string>()));
    r.followup = j.at("followup").get<std::string>();
    r.followup_generated = j.at("followup_generated").get<bool>();
    r.complaint = j.at("complaint").get<bool>();
    r.followup_card_ids = j.at("followup_card_ids").get<std::vector<std::string>>();
    r.reward = opt_from(j.at("reward"));
    r.gate = opt_from(j.at("gate"));
    r.advantage = opt_from(j.at("advantage"));
    r.baseline_before = j.at("baseline_before").get<double>();
    r.update_applied = j.at("update_applied").get<bool>();
    r.z_long_norm = j.at("z_long_norm").get<double>();
    return r;
  });
}

std::string cards_jsonl(const MemoryStore& store, const FileStamp& stamp) {
  std::string out;
  for (const auto& c : store.cards()) out += card_to_json(c, stamp) + "\n";
  return out;
}

std::string log_jsonl(std::span<const TurnRecord> log, const FileStamp& stamp) {
  std::string out;
  for (const auto& r : log) out += turn_record_to_json(r, stamp) + "\n";
  return out;
}

std::vector<MemoryCard> read_cards_jsonl(const std::filesystem::path& path) {
  std::vector<MemoryCard> out;
  for (const auto& line : split_lines(read_file(path))) out.push_back(card_from_json(line));
  return out;
}

std::vector<TurnRecord> read_log_jsonl(const std::filesystem::path& path) {
  std::vector<TurnRecord> out;
  for (const auto& line : split_lines(read_file(path))) out.push_back(turn_record_from_json(line));
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace prefvec
