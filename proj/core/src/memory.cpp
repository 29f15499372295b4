#include "prefvec/memory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "prefvec/errors.hpp"

namespace prefvec {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

constexpr std::array<std::string_view, 5> kUniversalIndicators = {
    "general", "always", "any task", "all tasks", "every"};

constexpr std::array<std::string_view, 13> kDomainTerms = {
    "coding", "code",     "python", "sql",   "javascript",    "math",      "algebra",
    "calculus", "proof", "debug",  "api",   "documentation", "statistics"};

// Phrase match on token boundaries of the space-joined token stream.
bool contains_phrase(const std::vector<std::string>& tokens, std::string_view phrase) {
  const auto words = tokenize(phrase);
  if (words.empty() || words.size() > tokens.size()) return false;
  for (std::size_t i = 0; i + words.size() <= tokens.size(); ++i) {
    if (std::equal(words.begin(), words.end(), tokens.begin() + static_cast<std::ptrdiff_t>(i)))
      return true;
  }
  return false;
}

std::size_t whitespace_words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::size_t n = 0;
  for (std::string w; in >> w;) ++n;
  return n;
}

}  // namespace

bool PreferenceTuple::valid() const { return !trim(condition).empty() && !trim(action).empty(); }

bool classify_global(const PreferenceTuple& p) {
  const auto tokens = tokenize(p.condition);
  for (auto ind : kUniversalIndicators) {
    if (contains_phrase(tokens, ind)) return true;
  }
  if (whitespace_words(p.condition) >= 3) return false;
  for (auto term : kDomainTerms) {
    if (contains_phrase(tokens, term)) return false;
  }
  return true;
}

std::string synthesize_note(const PreferenceTuple& p) {
  return "When " + trim(p.condition) + ", " + trim(p.action) + ".";
}

MemoryStore::MemoryStore(const Embedder& embedder, MemoryStoreConfig cfg)
    : embedder_(&embedder), cfg_(cfg), rng_(cfg.id_seed) {
  if (cfg_.warmup_threshold < 2) throw ContractViolation("MemoryStore: warmup_threshold must be >= 2");
  if (cfg_.item_dim == 0) throw ContractViolation("MemoryStore: item_dim must be positive");
  item_dim_ = std::min({cfg_.item_dim, embedder.dim(), cfg_.warmup_threshold - 1});
  embedding_sum_.assign(embedder.dim(), 0.0);
}

std::string MemoryStore::next_id() {
  const std::uint64_t hi = rng_();
  const std::uint64_t lo = rng_();
  // RFC 4122 version-4 layout.
  const std::uint64_t a = (hi & 0xffffffffffff0fffULL) | 0x0000000000004000ULL;
  const std::uint64_t b = (lo & 0x3fffffffffffffffULL) | 0x8000000000000000ULL;
  char buf[37];
  std::snprintf(buf, sizeof buf, "%08x-%04x-%04x-%04x-%012llx", static_cast<unsigned>(a >> 32),
                static_cast<unsigned>((a >> 16) & 0xffff), static_cast<unsigned>(a & 0xffff),
                static_cast<unsigned>(b >> 48),
                static_cast<unsigned long long>(b & 0xffffffffffffULL));
  return buf;
}

Vector MemoryStore::fallback_projection(std::span<const double> e) const {
  const double n = static_cast<double>(cards_.size());
  Vector out(item_dim_);
  for (std::size_t i = 0; i < item_dim_; ++i) out[i] = e[i] - embedding_sum_[i] / n;
  return out;
}

void MemoryStore::try_fit() {
  if (pca_ || cards_.size() < cfg_.warmup_threshold) return;
  std::vector<Vector> samples;
  samples.reserve(cards_.size());
  for (const auto& c : cards_) samples.push_back(c.embedding);
  try {
    PcaModel model = pca_fit(samples, item_dim_);
    if (model.output_dim() != item_dim_) return;
    pca_ = std::move(model);
  } catch (const FitUnavailable&) {
    return;  // retried on the next insertion
  }
  for (auto& c : cards_) c.item_vec = pca_project(*pca_, c.embedding);
}

const MemoryCard& MemoryStore::add_card(CardFields fields) {
  if (trim(fields.source_query).empty()) throw ContractViolation("add_card: empty source query");
  if (!fields.preference.valid()) throw ContractViolation("add_card: invalid preference tuple");

  std::string id = fields.id ? *fields.id : next_id();
  if (index_.contains(id)) throw DuplicateId("add_card: duplicate card id " + id);

  MemoryCard card;
  card.id = std::move(id);
  card.user_id = std::move(fields.user_id);
  card.session_id = std::move(fields.session_id);
  card.source_turn_ids = std::move(fields.source_turn_ids);
  card.source_query = std::move(fields.source_query);
  card.preference = std::move(fields.preference);
  card.note = synthesize_note(card.preference);
  card.is_global = classify_global(card.preference);
  card.embedding = embedder_->embed(card.source_query);

  axpy(1.0, card.embedding, embedding_sum_);
  index_.emplace(card.id, cards_.size());
  cards_.push_back(std::move(card));

  MemoryCard& stored = cards_.back();
  if (pca_) {
    stored.item_vec = pca_project(*pca_, stored.embedding);
  } else {
    stored.item_vec = fallback_projection(stored.embedding);
    try_fit();
  }
  return stored;
}

std::vector<const MemoryCard*> MemoryStore::global_cards(std::string_view user_id) const {
  std::vector<const MemoryCard*> out;
  for (auto it = cards_.rbegin(); it != cards_.rend() && out.size() < cfg_.global_cap; ++it) {
    if (it->is_global && it->user_id == user_id) out.push_back(&*it);
  }
  return out;
}

std::vector<std::string> MemoryStore::global_preferences(std::string_view user_id) const {
  std::vector<std::string> notes;
  for (const auto* c : global_cards(user_id)) notes.push_back(c->note);
  return notes;
}

std::vector<const MemoryCard*> MemoryStore::conditional_cards(std::string_view user_id) const {
  std::vector<const MemoryCard*> out;
  for (const auto& c : cards_) {
    if (!c.is_global && c.user_id == user_id) out.push_back(&c);
  }
  return out;
}

const MemoryCard* MemoryStore::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &cards_[it->second];
}

void MemoryStore::restore(std::vector<MemoryCard> cards, std::optional<PcaModel> pca) {
  cards_.clear();
  index_.clear();
  embedding_sum_.assign(embedder_->dim(), 0.0);
  for (auto& c : cards) {
    if (c.embedding.size() != embedder_->dim())
      throw ContractViolation("restore: card embedding dimension mismatch");
    if (index_.contains(c.id)) throw DuplicateId("restore: duplicate card id " + c.id);
    axpy(1.0, c.embedding, embedding_sum_);
    index_.emplace(c.id, cards_.size());
    cards_.push_back(std::move(c));
  }
  pca_ = std::move(pca);
}

}  // namespace prefvec
