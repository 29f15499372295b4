#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/episode.hpp"

namespace prefvec {

/// A complete run description. Every hyperparameter lives in `pipeline`.
struct RunConfig {
  PipelineConfig pipeline;
  std::uint64_t seed = 7;
  std::vector<SystemMode> modes{SystemMode::OnlineUser};
  std::vector<std::string> personas{"A", "B", "C", "D", "E", "F"};
  int sessions = 10;
  bool shared_store = false;  // one store for all personas of a mode
  std::filesystem::path out_dir = "prefvec-out";
};

using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Parses "section.key = value" lines. Blank lines and lines starting with
/// '#' are ignored. Throws ParseError with the line number on bad syntax or
/// a repeated key.
KeyValues parse_config_text(std::string_view text);
KeyValues read_config_file(const std::filesystem::path& path);

/// Applies overrides. Throws ParseError for unknown keys or malformed values
/// and ContractViolation if the result fails validation.
void apply_config(RunConfig& cfg, const KeyValues& kv);

/// Environment overrides: PREFVEC_<SECTION>__<KEY>=value maps to
/// section.key (lowercased). `envp` is a null-terminated array.
KeyValues env_overrides(const char* const* envp);

/// Every key with its current value (run.out excluded), sorted by key.
KeyValues to_key_values(const RunConfig& cfg);

/// "key = value" lines in key order.
std::string canonical_text(const RunConfig& cfg);

/// SHA-1 of the canonical text, first 16 hex digits.
std::string fingerprint(const RunConfig& cfg);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace prefvec
