#include "prefvec/retrieval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "prefvec/errors.hpp"

namespace prefvec {

namespace {

struct TaskClass {
  std::string_view name;
  std::vector<std::string_view> keywords;
};

const std::array<TaskClass, 4>& task_classes() {
  static const std::array<TaskClass, 4> classes = {{
      {"math", {"solve", "equation", "integral", "derivative", "proof"}},
      {"coding", {"code", "function", "bug", "python", "sql"}},
      {"writing", {"write", "draft", "summarize"}},
      {"explanation", {"explain", "why", "what is"}},
  }};
  return classes;
}

bool has_phrase(const std::vector<std::string>& tokens, std::string_view phrase) {
  const auto words = tokenize(phrase);
  if (words.empty() || words.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
    if (std::equal(words.begin(), words.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i)))
      return true;
  }
  return false;
}

double log_sigmoid(double x) {
  // log(1 / (1 + e^-x)), stable for both signs
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace

void RetrievalConfig::validate() const {
  if (rerank_topj < 1) throw ContractViolation("RetrievalConfig: rerank_topj must be >= 1");
  if (dense_topk < rerank_topj) throw ContractViolation("RetrievalConfig: dense_topk must be >= rerank_topj");
  if (!(temperature > 0.0)) throw ContractViolation("RetrievalConfig: temperature must be > 0");
}

double CosineReranker::score(std::string_view query, std::string_view note) const {
  return log_sigmoid(kappa_ * cosine(embedder_->embed(query), embedder_->embed(note)));
}

std::optional<std::string> transform_query(std::string_view query) {
  const auto tokens = tokenize(query);
  for (const auto& cls : task_classes()) {
    for (auto kw : cls.keywords) {
      if (has_phrase(tokens, kw)) {
        return "user preferences for " + std::string(cls.name) + ": " + std::string(query);
      }
    }
  }
  return std::nullopt;
}

std::vector<DenseHit> dense_retrieve(const MemoryStore& store, std::string_view user_id,
                                     std::string_view query, std::size_t k) {
  const auto cards = store.conditional_cards(user_id);
  if (cards.empty() || k == 0) return {};

  const Embedder& emb = store.embedder();
  const Vector eq = emb.embed(query);
  const auto transformed = transform_query(query);
  const std::optional<Vector> et =
      transformed ? std::optional<Vector>(emb.embed(*transformed)) : std::nullopt;

  std::vector<DenseHit> hits;
  hits.reserve(cards.size());
  for (const auto* c : cards) {
    double sim = cosine(c->embedding, eq);
    if (et) sim = std::max(sim, cosine(c->embedding, *et));
    hits.push_back({c, sim});
  }
  std::sort(hits.begin(), hits.end(), [](const DenseHit& a, const DenseHit& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.card->id < b.card->id;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

double base_score(const Reranker& reranker, std::string_view query, std::string_view note) {
  return reranker.score(query, note);
}

std::vector<ScoredCandidate> score_from_base(std::span<const std::string> ids,
                                             std::span<const double> base_scores,
                                             std::span<const Vector> item_vecs,
                                             std::span<const double> z_eff, double temperature) {
  if (ids.size() != base_scores.size() || ids.size() != item_vecs.size())
    throw ContractViolation("score_from_base: candidate arrays differ in length");
  if (ids.empty()) return {};

  std::vector<ScoredCandidate> out(ids.size());
  Vector totals(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (item_vecs[i].size() != z_eff.size())
      throw ContractViolation("score_candidates: item vector and user vector differ in dimension");
    out[i].card_id = ids[i];
    out[i].base_score = base_scores[i];
    out[i].user_bonus = dot(z_eff, item_vecs[i]);
    out[i].total_score = out[i].base_score + out[i].user_bonus;
    totals[i] = out[i].total_score;
  }
  const Vector probs = softmax(totals, temperature);
  for (std::size_t i = 0; i < out.size(); ++i) out[i].policy_prob = probs[i];
  return out;
}

std::vector<ScoredCandidate> score_candidates(std::span<const MemoryCard* const> cards,
                                              std::string_view query,
                                              std::span<const double> z_eff,
                                              const Reranker& reranker, double temperature) {
  std::vector<std::string> ids;
  Vector base;
  std::vector<Vector> vecs;
  for (const auto* c : cards) {
    ids.push_back(c->id);
    base.push_back(base_score(reranker, query, c->note));
    vecs.push_back(c->item_vec);
  }
  return score_from_base(ids, base, vecs, z_eff, temperature);
}

std::vector<std::string> select_top_j(std::span<const ScoredCandidate> scored, std::size_t j) {
  if (j < 1) throw ContractViolation("select_top_j: J must be >= 1");
  std::vector<const ScoredCandidate*> order;
  for (const auto& s : scored) order.push_back(&s);
  std::sort(order.begin(), order.end(), [](const ScoredCandidate* a, const ScoredCandidate* b) {
    if (a->total_score != b->total_score) return a->total_score > b->total_score;
    return a->card_id < b->card_id;
  });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < order.size() && i < j; ++i) out.push_back(order[i]->card_id);
  return out;
}

RetrievalTrace retrieve(const MemoryStore& store, std::string_view user_id, std::string_view query,
                        std::span<const double> z_eff, const Reranker& reranker,
                        const RetrievalConfig& cfg) {
  cfg.validate();
  RetrievalTrace trace;
  trace.query = std::string(query);
  trace.transformed_query = transform_query(query);

  const auto hits = dense_retrieve(store, user_id, query, cfg.dense_topk);
  if (hits.empty()) return trace;

  const Vector eq = store.embedder().embed(query);
  std::vector<const MemoryCard*> cards;
  for (const auto& h : hits) {
    cards.push_back(h.card);
    trace.item_vecs.push_back(h.card->item_vec);
    trace.query_sims.push_back(cosine(h.card->embedding, eq));
  }
  trace.sq_max = *std::max_element(trace.query_sims.begin(), trace.query_sims.end());
  trace.candidates = score_candidates(cards, query, z_eff, reranker, cfg.temperature);
  trace.selected = select_top_j(trace.candidates, cfg.rerank_topj);
  return trace;
}

}  // namespace prefvec
