#include <algorithm>
#include <cctype>
#include <regex>

#include "prefvec/memory.hpp"

namespace prefvec {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string strip(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> sentences(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '.' || c == '!' || c == '?' || c == ';' || c == '\n') {
      if (auto s = strip(cur); !s.empty()) out.push_back(std::move(s));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (auto s = strip(cur); !s.empty()) out.push_back(std::move(s));
  return out;
}

struct Rules {
  std::regex when_clause{R"(^when\s+([^,]+),\s*(.*)$)"};
  std::regex always{R"(\balways\b)"};
  std::regex short_word{R"(\b(short|brief|concise)\b)"};
  std::regex char_limit{
      R"(\b(?:under|within|at most|max|maximum|no more than)\s+(\d+)\s+(?:characters|chars)\b)"};
  std::regex long_word{R"(\b(long|detailed|thorough)\b)"};
  std::regex no_bullets{
      R"(\b(?:avoid|without|no|don't use|do not use|never use)\s+(?:any\s+)?bullet)"};
  std::regex bullets{R"(\bbullet)"};
  std::regex language{R"(\b(?:in|use)\s+(english|chinese)\b)"};
};

const Rules& rules() {
  static const Rules r;
  return r;
}

void extract_sentence(const std::string& sentence, std::vector<PreferenceTuple>& out) {
  const Rules& r = rules();
  std::string body = sentence;
  std::string condition = "general";
  std::smatch m;
  if (std::regex_match(sentence, m, r.when_clause)) {
    condition = strip(m[1].str());
    body = m[2].str();
  } else if (std::regex_search(sentence, r.always)) {
    condition = "always";
  }

  auto emit = [&](std::string action) { out.push_back({condition, std::move(action)}); };

  if (std::regex_search(body, r.short_word)) {
    if (std::regex_search(body, m, r.char_limit)) {
      emit("keep responses short, max " + m[1].str() + " characters");
    } else {
      emit("keep responses short");
    }
  } else if (std::regex_search(body, r.long_word)) {
    emit("give long, detailed responses");
  }

  if (std::regex_search(body, r.no_bullets)) {
    emit("avoid bullet points, write in paragraphs");
  } else if (std::regex_search(body, r.bullets)) {
    emit("use bullet points");
  }

  if (std::regex_search(body, m, r.language)) {
    emit(m[1].str() == "chinese" ? "respond in Chinese" : "respond in English");
  }
}

}  // namespace

std::vector<PreferenceTuple> RuleExtractor::extract(std::span<const DialogueTurn> window) const {
  std::vector<PreferenceTuple> out;
  for (const auto& turn : window) {
    if (turn.speaker != "user") continue;
    for (const auto& s : sentences(lower(turn.text))) extract_sentence(s, out);
  }
  return out;
}

}  // namespace prefvec
