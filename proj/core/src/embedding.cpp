#include "prefvec/embedding.hpp"

#include <algorithm>
#include <cmath>

#include "prefvec/errors.hpp"

namespace prefvec {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::size_t utf8_length(unsigned char lead) {
  if (lead >= 0xF0) return 4;
  if (lead >= 0xE0) return 3;
  if (lead >= 0xC0) return 2;
  return 1;
}

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size();) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      if (is_ascii_alnum(c)) {
        current.push_back(static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c));
      } else {
        flush();
      }
      ++i;
    } else {
      flush();
      const std::size_t len = std::min(utf8_length(c), text.size() - i);
      tokens.emplace_back(text.substr(i, len));
      i += len;
    }
  }
  flush();
  return tokens;
}

HashingEmbedder::HashingEmbedder(EmbedderConfig cfg) : cfg_(cfg) {
  if (cfg_.dim == 0) throw ContractViolation("HashingEmbedder: dim must be positive");
}

std::size_t HashingEmbedder::bucket(std::string_view token) const {
  // FNV-1a with a seed-derived offset basis.
  std::uint64_t h = 0xcbf29ce484222325ULL ^ splitmix64(cfg_.hash_seed);
  for (char ch : token) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return static_cast<std::size_t>(splitmix64(h) % cfg_.dim);
}

Vector HashingEmbedder::embed(std::string_view text) const {
  Vector v(cfg_.dim, 0.0);
  const auto tokens = tokenize(text);
  if (tokens.empty()) return v;
  for (const auto& t : tokens) v[bucket(t)] += 1.0;
  const double n = norm2(v);
  for (double& x : v) x /= n;
  return v;
}

}  // namespace prefvec
