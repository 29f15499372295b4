#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prefvec/core_math.hpp"
#include "prefvec/embedding.hpp"

namespace prefvec {

struct PreferenceTuple {
  std::string condition;
  std::string action;

  /// Both fields nonempty after trimming.
  bool valid() const;
  bool operator==(const PreferenceTuple&) const = default;
};

struct MemoryCard {
  std::string id;
  std::string user_id;
  std::string session_id;
  std::vector<int> source_turn_ids;
  std::string source_query;
  PreferenceTuple preference;
  std::string note;
  bool is_global = false;
  Vector embedding;
  Vector item_vec;

  bool operator==(const MemoryCard&) const = default;
};

/// Universal condition ("general", "always", ...) or a short condition with
/// no domain term.
bool classify_global(const PreferenceTuple& p);

/// "When <condition>, <action>."
std::string synthesize_note(const PreferenceTuple& p);

struct MemoryStoreConfig {
  std::size_t item_dim = 256;
  std::size_t warmup_threshold = 32;
  std::size_t global_cap = 10;
  std::uint64_t id_seed = 0;
};

/// Fields supplied by the caller when inserting a card. The store derives the
/// note, the global flag, the embedding and the item vector.
struct CardFields {
  std::string user_id;
  std::string session_id;
  std::vector<int> source_turn_ids;
  std::string source_query;
  PreferenceTuple preference;
  std::optional<std::string> id;
};

/// Per-run preference memory with one global PCA item space.
///
/// The item space has a fixed width min(item_dim, embedding dim,
/// warmup_threshold - 1). Until `warmup_threshold` cards exist, item vectors
/// are the leading coordinates of the embedding minus the running mean. When
/// the threshold is reached a single PCA fit runs over every stored
/// embedding, all item vectors are recomputed, and the model is frozen.
///
/// Reads may run concurrently; writes require a single writer.
class MemoryStore {
 public:
  MemoryStore(const Embedder& embedder, MemoryStoreConfig cfg = {});

  /// Throws DuplicateId when `fields.id` is already present and
  /// ContractViolation for an empty query or invalid preference.
  const MemoryCard& add_card(CardFields fields);

  /// Global cards of a user, most recent first, at most `global_cap`.
  std::vector<const MemoryCard*> global_cards(std::string_view user_id) const;
  std::vector<std::string> global_preferences(std::string_view user_id) const;

  /// Every non-global card of the user, in insertion order.
  std::vector<const MemoryCard*> conditional_cards(std::string_view user_id) const;

  const MemoryCard* find(std::string_view id) const;
  std::size_t size() const { return cards_.size(); }
  const std::deque<MemoryCard>& cards() const { return cards_; }
  const std::optional<PcaModel>& pca() const { return pca_; }
  std::size_t item_dim() const { return item_dim_; }
  const MemoryStoreConfig& config() const { return cfg_; }
  const Embedder& embedder() const { return *embedder_; }

  /// Replaces the contents with previously persisted cards and model.
  void restore(std::vector<MemoryCard> cards, std::optional<PcaModel> pca);

 private:
  std::string next_id();
  Vector fallback_projection(std::span<const double> e) const;
  void try_fit();

  const Embedder* embedder_;
  MemoryStoreConfig cfg_;
  std::size_t item_dim_;
  std::deque<MemoryCard> cards_;
  std::unordered_map<std::string, std::size_t> index_;
  std::optional<PcaModel> pca_;
  Vector embedding_sum_;
  std::mt19937_64 rng_;
};

struct DialogueTurn {
  std::string speaker;  // "user" or "assistant"
  std::string text;
};

/// Converts a window of recent turns into preference tuples. Returning no
/// tuples is a valid outcome.
class Extractor {
 public:
  virtual ~Extractor() = default;
  virtual std::size_t window_size() const = 0;
  virtual std::vector<PreferenceTuple> extract(std::span<const DialogueTurn> window) const = 0;
};

/// Pattern rules over the simulator's style vocabulary: response length,
/// bullet formatting and response language. Each sentence of a user turn is
/// scanned independently; a leading "When <condition>," clause becomes the
/// condition, otherwise "always" or "general".
class RuleExtractor final : public Extractor {
 public:
  std::size_t window_size() const override { return 1; }
  std::vector<PreferenceTuple> extract(std::span<const DialogueTurn> window) const override;
};

}  // namespace prefvec
