#include "cli.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <sstream>

#include <json.hpp>

#include "prefvec/errors.hpp"
#include "prefvec/hashing.hpp"
#include "prefvec/metrics.hpp"
#include "prefvec/persistence.hpp"
#include "prefvec/sensitivity.hpp"
#include "prefvec/verification.hpp"

namespace prefvec::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string episode_stem(SystemMode mode, std::string_view persona_key) {
  return std::string(to_string(mode)) + "_" + persona_by_key(persona_key).id;
}

namespace {

// Output files collected in memory so the manifest can hash exactly what was
// written.
class OutputSet {
 public:
  explicit OutputSet(fs::path root) : root_(std::move(root)) {}

  void add(const std::string& rel, std::string content) { files_[rel] = std::move(content); }

  void flush() const {
    for (const auto& [rel, content] : files_) write_file_atomic(root_ / rel, content);
  }

  json hashes() const {
    json j = json::object();
    for (const auto& [rel, content] : files_) j[rel] = git_blob_hash(content);
    return j;
  }

  std::string content_hash() const {
    std::string listing;
    for (const auto& [rel, content] : files_) listing += git_blob_hash(content) + " " + rel + "\n";
    return git_blob_hash(listing);
  }

 private:
  fs::path root_;
  std::map<std::string, std::string> files_;
};

PrefsByUser prefs_of(const std::vector<std::string>& keys) {
  PrefsByUser prefs;
  for (const auto& k : keys) {
    const Persona& p = persona_by_key(k);
    prefs.emplace(p.id, p.prefs);
  }
  return prefs;
}

void emit_run(const PopulationRun& run, const std::string& stem, const FileStamp& stamp, OutputSet& files) {
  std::vector<TurnRecord> all;
  for (const auto& u : run.users) all.insert(all.end(), u.records.begin(), u.records.end());
  files.add("logs/" + stem + ".jsonl", log_jsonl(all, stamp));
  files.add("cards/" + stem + ".jsonl", cards_jsonl(*run.store, stamp));
  files.add("cards/" + stem + ".pca.json", pca_to_json(run.store->pca(), stamp));
  for (const auto& u : run.users) {
    const std::string name = run.users.size() == 1 ? stem : stem + "_" + u.persona.id;
    files.add("states/" + name + ".json", state_to_json(u.state, stamp));
  }
}

void add_metrics(const PopulationRun& run, SystemMode mode, const PrefsByUser& prefs,
                 std::vector<MetricRow>& rows) {
  const CardKindMap kinds = card_kind_map(*run.store);
  for (const auto& u : run.users) {
    const auto m = compute_episode_metrics(u.records, kinds, prefs);
    const auto r = metric_rows(to_string(mode), u.persona.id, m);
    rows.insert(rows.end(), r.begin(), r.end());
  }
}

}  // namespace

int cmd_sim(const SimOptions& opts, std::ostream& out, std::ostream& err) {
  const RunConfig& cfg = opts.config;
  try {
    cfg.pipeline.validate();
    for (const auto& p : cfg.personas) persona_by_key(p);
  } catch (const std::exception& e) {
    err << "invalid config: " << e.what() << "\n";
    return 1;
  }
  if (fs::exists(cfg.out_dir) && !fs::is_empty(cfg.out_dir) && !opts.force) {
    err << "output directory " << cfg.out_dir << " exists and is not empty; pass --force to overwrite\n";
    return 2;
  }

  const std::string fp = fingerprint(cfg);
  const FileStamp stamp{fp, cfg.seed};
  const PrefsByUser prefs = prefs_of(cfg.personas);
  std::vector<Persona> personas;
  for (const auto& k : cfg.personas) personas.push_back(persona_by_key(k));

  OutputSet files(cfg.out_dir);
  std::vector<MetricRow> rows;

  for (SystemMode mode : cfg.modes) {
    if (cfg.shared_store) {
      const PopulationRun run = run_population(mode, personas, cfg.sessions, cfg.seed, cfg.pipeline);
      const std::string stem = std::string(to_string(mode)) + "_population";
      emit_run(run, stem, stamp, files);
      add_metrics(run, mode, prefs, rows);
      if (run.users.size() >= 4) {
        std::vector<AlignmentUser> users;
        for (const auto& u : run.users) {
          const auto ids = u.persona.preference_ids();
          users.push_back({u.persona.id, {ids.begin(), ids.end()}, u.state.z_long, u.z_short_last,
                           u.state.norm_history});
        }
        const auto analysis =
            vector_alignment(users, cfg.pipeline.learning.beta_long, cfg.pipeline.learning.beta_short);
        std::ostringstream csv;
        write_pairwise_csv(csv, analysis.pairwise, cfg.seed, fp);
        files.add("pairwise_" + std::string(to_string(mode)) + ".csv", csv.str());
        std::vector<std::vector<NormSnapshot>> curves = analysis.norm_curves;
        const auto norms = norm_monotonicity(curves);
        out << to_string(mode) << ": spearman(jaccard, cos z_long) = " << format_number(analysis.long_term.spearman.rho)
            << (analysis.long_term.spearman.degenerate ? " (degenerate)" : "")
            << ", top/bottom quartile cos = " << format_number(analysis.long_term.top_quartile_mean) << " / "
            << format_number(analysis.long_term.bottom_quartile_mean)
            << ", mean norm curve monotone = " << (norms.monotone ? "yes" : "no") << "\n";
      }
    } else {
      // Independent episodes, each with its own store, run concurrently.
      std::vector<std::future<PopulationRun>> jobs;
      for (const auto& p : personas) {
        jobs.push_back(std::async(std::launch::async, [&, p] {
          const Persona one[] = {p};
          return run_population(mode, one, cfg.sessions, cfg.seed, cfg.pipeline);
        }));
      }
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        const PopulationRun run = jobs[i].get();
        emit_run(run, episode_stem(mode, cfg.personas[i]), stamp, files);
        add_metrics(run, mode, prefs, rows);
      }
    }
    out << to_string(mode) << ": " << personas.size() << " persona(s), " << cfg.sessions << " sessions\n";
  }

  std::ostringstream metrics;
  write_metrics_csv(metrics, rows, cfg.seed, fp);
  files.add("metrics.csv", metrics.str());
  files.add("config.resolved", "# config_fingerprint " + fp + "\n" + canonical_text(cfg));

  json manifest;
  std::vector<std::string> modes;
  for (auto m : cfg.modes) modes.emplace_back(to_string(m));
  manifest["modes"] = modes;
  manifest["personas"] = cfg.personas;
  manifest["sessions"] = cfg.sessions;
  manifest["seed"] = cfg.seed;
  manifest["config_fingerprint"] = fp;
  manifest["recall_k"] = cfg.pipeline.retrieval.rerank_topj;
  manifest["shared_store"] = cfg.shared_store;
  manifest["files"] = files.hashes();
  manifest["content_hash"] = files.content_hash();

  files.flush();
  write_file_atomic(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << cfg.out_dir.string() << " (content hash " << files.content_hash() << ")\n";
  return 0;
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.seeds < 1) {
    err << "--seeds must be positive\n";
    return 1;
  }
  const auto p1 = run_gradient_identity_suite(opts.seeds, opts.seed, opts.learning, opts.eta_fault);
  const auto p2 = run_unroll_suite(std::max(1, opts.seeds / 10), 200, opts.seed + 1, opts.learning.decay);
  const int horizons[] = {0, 5, 10, 20};
  const auto tail = run_tail_suite(horizons, 200, opts.seed + 2, opts.learning.decay, 1.0);

  const bool ok1 = p1.failures == 0, ok2 = p2.failures == 0, ok3 = tail.failures == 0;
  out.precision(3);
  out << (ok1 ? "PASS" : "FAIL") << "  gradient identity: " << p1.instances - p1.failures << "/" << p1.instances
      << " instances, worst relative gradient error " << std::scientific << p1.worst_grad_rel_error
      << ", worst update error " << p1.worst_delta_error << "\n";
  if (!ok1) out << "      first failure: " << p1.first_failure << "\n";
  out << (ok2 ? "PASS" : "FAIL") << "  closed-form unroll: " << p2.streams - p2.failures << "/" << p2.streams
      << " streams of 200 turns, worst error " << p2.worst_error << "\n";
  out << (ok3 ? "PASS" : "FAIL") << "  short-term tail bound: " << tail.cases - tail.failures << "/" << tail.cases
      << " streams, tightest observed/bound " << std::fixed << tail.tightest_ratio << "\n";
  out << std::defaultfloat;

  if (opts.report) {
    json j;
    j["gradient_identity"] = {{"passed", ok1},
                              {"instances", p1.instances},
                              {"failures", p1.failures},
                              {"worst_grad_rel_error", p1.worst_grad_rel_error},
                              {"worst_delta_error", p1.worst_delta_error},
                              {"first_failure", p1.first_failure}};
    j["closed_form_unroll"] = {
        {"passed", ok2}, {"streams", p2.streams}, {"failures", p2.failures}, {"worst_error", p2.worst_error}};
    j["tail_bound"] = {
        {"passed", ok3}, {"cases", tail.cases}, {"failures", tail.failures}, {"tightest_ratio", tail.tightest_ratio}};
    j["seed"] = opts.seed;
    j["config_fingerprint"] = opts.fingerprint;
    write_file_atomic(*opts.report, j.dump(2) + "\n");
  }
  return ok1 && ok2 && ok3 ? 0 : 1;
}

int cmd_sensitivity(const SensitivityOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<std::string> names;
  const auto known = perturbation_names();
  for (const auto& n : opts.perturbations) {
    if (n == "all") {
      names = known;
      break;
    }
    if (std::find(known.begin(), known.end(), n) == known.end()) {
      err << "unknown perturbation '" << n << "'; available:";
      for (const auto& k : known) err << " " << k;
      err << "\n";
      return 2;
    }
    names.push_back(n);
  }

  const PipelineConfig& pc = opts.config.pipeline;
  std::vector<SensitivityResult> results;
  if (opts.closed_loop) {
    std::vector<Persona> personas;
    for (const auto& k : opts.config.personas) personas.push_back(persona_by_key(k));
    for (const auto& n : names)
      results.push_back(closed_loop_sensitivity(personas, opts.config.sessions, opts.config.seed, pc,
                                                make_perturbation(n, pc.reward, pc.gate), opts.config.shared_store));
  } else {
    std::vector<TurnRecord> log;
    try {
      log = read_log_jsonl(opts.log);
    } catch (const std::exception& e) {
      err << "cannot read log: " << e.what() << "\n";
      return 1;
    }
    const HashingEmbedder embedder(pc.embedder);
    try {
      for (const auto& n : names)
        results.push_back(sensitivity_harness(log, pc, make_perturbation(n, pc.reward, pc.gate), embedder));
    } catch (const ReplayImpossible& e) {
      err << "replay impossible: " << e.what() << "\n";
      return 1;
    }
  }

  std::ostringstream csv;
  write_sensitivity_csv(csv, results, opts.config.seed, fingerprint(opts.config));
  if (opts.csv) {
    write_file_atomic(*opts.csv, csv.str());
  } else {
    out << csv.str();
  }
  return 0;
}

}  // namespace prefvec::cli
