#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/core_math.hpp"

namespace prefvec {

/// Text encoder interface. Implementations must be deterministic and return
/// either a unit-norm vector of size dim() or the zero vector.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual std::size_t dim() const = 0;
  virtual Vector embed(std::string_view text) const = 0;
};

struct EmbedderConfig {
  std::size_t dim = 256;
  std::uint64_t hash_seed = 0x5eed0f5eedULL;
};

/// Lowercased ASCII alphanumeric runs; every non-ASCII code point is its own
/// token so unsegmented CJK text still produces a bag of characters.
std::vector<std::string> tokenize(std::string_view text);

/// Feature-hashing bag of tokens, L2-normalised.
class HashingEmbedder final : public Embedder {
 public:
  explicit HashingEmbedder(EmbedderConfig cfg = {});

  std::size_t dim() const override { return cfg_.dim; }
  Vector embed(std::string_view text) const override;

  std::size_t bucket(std::string_view token) const;

 private:
  EmbedderConfig cfg_;
};

}  // namespace prefvec
