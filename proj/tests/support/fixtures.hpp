#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <string_view>

#include "prefvec/embedding.hpp"

namespace fixture {

/// Embedder with hand-picked vectors; unknown text maps to the zero vector.
class TableEmbedder final : public prefvec::Embedder {
 public:
  explicit TableEmbedder(std::size_t dim) : dim_(dim) {}
  void set(std::string text, prefvec::Vector v) { table_[std::move(text)] = std::move(v); }
  std::size_t dim() const override { return dim_; }
  prefvec::Vector embed(std::string_view text) const override {
    const auto it = table_.find(std::string(text));
    return it == table_.end() ? prefvec::Vector(dim_, 0.0) : it->second;
  }

 private:
  std::size_t dim_;
  std::map<std::string, prefvec::Vector> table_;
};

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("prefvec-" + tag + "-" + std::to_string(rd()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace fixture
