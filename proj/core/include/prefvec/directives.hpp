#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prefvec {

enum class Lang { En, Zh };

std::string_view to_string(Lang lang);
Lang lang_from_string(std::string_view s);

/// Style preference kinds tracked by the recall metric.
enum class PrefKind { Short, Bullets, Lang };

std::string_view to_string(PrefKind kind);
PrefKind pref_kind_from_string(std::string_view s);

/// Style directives found in preference notes. Shared by the agent stub
/// (what to render) and the metrics (which preference a card encodes).
struct Directives {
  bool short_requested = false;
  std::optional<std::size_t> max_chars;
  bool long_requested = false;
  std::optional<bool> bullets;  // true: use bullets, false: avoid them
  std::optional<Lang> lang;
};

Directives parse_directives(std::string_view note);

/// Merges several notes. Shorter length limits win; for bullets and
/// language the first note that mentions them wins.
Directives parse_directives(std::span<const std::string> notes);

/// Kinds a note encodes: Short for a length limit, Bullets for a positive
/// bullet directive, Lang for any language directive.
std::vector<PrefKind> encoded_kinds(std::string_view note);

}  // namespace prefvec
