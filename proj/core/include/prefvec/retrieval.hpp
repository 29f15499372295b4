#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/core_math.hpp"
#include "prefvec/embedding.hpp"
#include "prefvec/memory.hpp"

namespace prefvec {

struct RetrievalConfig {
  std::size_t dense_topk = 64;
  std::size_t rerank_topj = 3;
  double temperature = 1.0;

  /// Throws ContractViolation unless K >= J >= 1 and temperature > 0.
  void validate() const;
};

/// Query/note relevance that never sees user state. Scores are
/// log-probabilities, i.e. strictly negative.
class Reranker {
 public:
  virtual ~Reranker() = default;
  virtual double score(std::string_view query, std::string_view note) const = 0;
};

/// log(sigmoid(kappa * cosine(embed(query), embed(note))))
class CosineReranker final : public Reranker {
 public:
  explicit CosineReranker(const Embedder& embedder, double kappa = 4.0)
      : embedder_(&embedder), kappa_(kappa) {}
  double score(std::string_view query, std::string_view note) const override;

 private:
  const Embedder* embedder_;
  double kappa_;
};

/// "user preferences for <task>: <query>" when a task keyword is present.
/// Classes are tried in the order math, coding, writing, explanation.
std::optional<std::string> transform_query(std::string_view query);

struct DenseHit {
  const MemoryCard* card;
  double similarity;
};

/// Top-K conditional cards of the user by max cosine over the original and
/// transformed query embeddings; ties by card id.
std::vector<DenseHit> dense_retrieve(const MemoryStore& store, std::string_view user_id,
                                     std::string_view query, std::size_t k);

double base_score(const Reranker& reranker, std::string_view query, std::string_view note);

struct ScoredCandidate {
  std::string card_id;
  double base_score = 0.0;
  double user_bonus = 0.0;
  double total_score = 0.0;
  double policy_prob = 0.0;

  bool operator==(const ScoredCandidate&) const = default;
};

/// s = s0 + <z_eff, v>, probabilities = softmax(s / tau). All item vectors
/// must have the dimension of z_eff.
std::vector<ScoredCandidate> score_from_base(std::span<const std::string> ids,
                                             std::span<const double> base_scores,
                                             std::span<const Vector> item_vecs,
                                             std::span<const double> z_eff, double temperature);

std::vector<ScoredCandidate> score_candidates(std::span<const MemoryCard* const> cards,
                                              std::string_view query,
                                              std::span<const double> z_eff,
                                              const Reranker& reranker, double temperature);

/// Top-J card ids by total score, ties broken by ascending id.
std::vector<std::string> select_top_j(std::span<const ScoredCandidate> scored, std::size_t j);

/// Everything observed during one retrieval, kept for logging and replay.
struct RetrievalTrace {
  std::string query;
  std::optional<std::string> transformed_query;
  std::vector<ScoredCandidate> candidates;
  std::vector<Vector> item_vecs;      // parallel to candidates
  std::vector<double> query_sims;     // cos(e_m, e_query), parallel to candidates
  std::vector<std::string> selected;  // A_t
  double sq_max = 0.0;                // max of query_sims, 0 when empty
};

RetrievalTrace retrieve(const MemoryStore& store, std::string_view user_id, std::string_view query,
                        std::span<const double> z_eff, const Reranker& reranker,
                        const RetrievalConfig& cfg);

}  // namespace prefvec
