#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "prefvec/directives.hpp"

namespace prefvec::detail {

struct LocalizedTask {
  std::string_view prompt;
  std::string_view intro;
  std::array<std::string_view, 3> items;
  std::array<std::string_view, 3> details;
  std::string_view closing;
};

struct TaskTemplate {
  std::string_view tag;
  LocalizedTask en;
  LocalizedTask zh;

  const LocalizedTask& in(Lang lang) const { return lang == Lang::Zh ? zh : en; }
};

const std::vector<TaskTemplate>& task_pool();

/// Task whose prompt (either language) occurs in the text, or nullptr.
const TaskTemplate* find_task(std::string_view text);
const TaskTemplate* task_by_tag(std::string_view tag);

}  // namespace prefvec::detail
