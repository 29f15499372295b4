#pragma once

// File formats: user states and PCA models as JSON, cards and turn logs as
// JSON lines. Every file records the config fingerprint and the run seed.
// Doubles are written in shortest round-trip form, so reading a file back
// reproduces every value bit for bit.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefvec/episode.hpp"
#include "prefvec/memory.hpp"
#include "prefvec/user_state.hpp"

namespace prefvec {

struct FileStamp {
  std::string fingerprint;
  std::uint64_t seed = 0;
};

std::string state_to_json(const UserState& state, const FileStamp& stamp);

struct LoadedState {
  UserState state;
  FileStamp stamp;
  bool fingerprint_mismatch = false;
};

/// Throws ParseError on malformed or truncated input and ContractViolation if
/// the decoded state breaks its invariants. A different fingerprint is only
/// flagged.
LoadedState state_from_json(std::string_view text, std::string_view expected_fingerprint = {});

void save_state(const std::filesystem::path& path, const UserState& state, const FileStamp& stamp);
LoadedState load_state(const std::filesystem::path& path, std::string_view expected_fingerprint = {});

std::string card_to_json(const MemoryCard& card, const FileStamp& stamp);
MemoryCard card_from_json(std::string_view line);

std::string pca_to_json(const std::optional<PcaModel>& pca, const FileStamp& stamp);
std::optional<PcaModel> pca_from_json(std::string_view text);

std::string turn_record_to_json(const TurnRecord& rec, const FileStamp& stamp);
TurnRecord turn_record_from_json(std::string_view line);

/// One JSON document per line, each terminated by '\n'.
std::string cards_jsonl(const MemoryStore& store, const FileStamp& stamp);
std::string log_jsonl(std::span<const TurnRecord> log, const FileStamp& stamp);

std::vector<MemoryCard> read_cards_jsonl(const std::filesystem::path& path);
std::vector<TurnRecord> read_log_jsonl(const std::filesystem::path& path);

/// Writes `content` to `path` via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

}  // namespace prefvec
