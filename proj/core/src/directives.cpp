#include "prefvec/directives.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "prefvec/errors.hpp"

namespace prefvec {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Lang lang) { return lang == Lang::Zh ? "zh" : "en"; }

Lang lang_from_string(std::string_view s) {
  if (s == "en") return Lang::En;
  if (s == "zh") return Lang::Zh;
  throw ParseError("unknown language: " + std::string(s));
}

std::string_view to_string(PrefKind kind) {
  switch (kind) {
    case PrefKind::Short: return "SHORT";
    case PrefKind::Bullets: return "BULLETS";
    case PrefKind::Lang: return "LANG";
  }
  return "?";
}

PrefKind pref_kind_from_string(std::string_view s) {
  if (s == "SHORT") return PrefKind::Short;
  if (s == "BULLETS") return PrefKind::Bullets;
  if (s == "LANG") return PrefKind::Lang;
  throw ParseError("unknown preference kind: " + std::string(s));
}

Directives parse_directives(std::string_view note) {
  static const std::regex max_chars{R"(\b(?:max|maximum|under|within|at most)\s+(\d+)\s+(?:characters|chars)\b)"};
  static const std::regex short_word{R"(\b(?:short|brief|concise)\b)"};
  static const std::regex long_word{R"(\b(?:long|detailed|thorough)\b)"};
  static const std::regex no_bullets{
      R"(\b(?:avoid|without|no|don't use|do not use|never use)\s+(?:any\s+)?bullet)"};
  static const std::regex bullets{R"(\bbullet)"};
  static const std::regex language{R"(\b(?:in|use)\s+(english|chinese)\b)"};

  const std::string text = lower(note);
  Directives d;
  std::smatch m;
  if (std::regex_search(text, m, max_chars)) {
    d.short_requested = true;
    d.max_chars = static_cast<std::size_t>(std::stoul(m[1].str()));
  } else if (std::regex_search(text, short_word)) {
    d.short_requested = true;
  } else if (std::regex_search(text, long_word)) {
    d.long_requested = true;
  }
  if (std::regex_search(text, no_bullets)) {
    d.bullets = false;
  } else if (std::regex_search(text, bullets)) {
    d.bullets = true;
  }
  if (std::regex_search(text, m, language)) d.lang = m[1].str() == "chinese" ? Lang::Zh : Lang::En;
  return d;
}

Directives parse_directives(std::span<const std::string> notes) {
  Directives merged;
  for (const auto& n : notes) {
    const Directives d = parse_directives(n);
    if (d.short_requested) {
      merged.short_requested = true;
      if (d.max_chars && (!merged.max_chars || *d.max_chars < *merged.max_chars)) merged.max_chars = d.max_chars;
    }
    merged.long_requested = merged.long_requested || d.long_requested;
    if (!merged.bullets && d.bullets) merged.bullets = d.bullets;
    if (!merged.lang && d.lang) merged.lang = d.lang;
  }
  return merged;
}

std::vector<PrefKind> encoded_kinds(std::string_view note) {
  const Directives d = parse_directives(note);
  std::vector<PrefKind> kinds;
  if (d.short_requested) kinds.push_back(PrefKind::Short);
  if (d.bullets.value_or(false)) kinds.push_back(PrefKind::Bullets);
  if (d.lang) kinds.push_back(PrefKind::Lang);
  return kinds;
}

}  // namespace prefvec
