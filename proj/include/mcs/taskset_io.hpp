#pragma once

#include <filesystem>
#include <iosfwd>

#include "mcs/taskmodel.hpp"

namespace mcs {

// Line-oriented task-set format:
//
//   taskset v1
//   # comment
//   <id> <T> <C> <LC|HC> [alpha|-] [C^L]
//
// Numbers are integers, decimals or p/q rationals. A '-' in the alpha column
// leaves alpha unset, which lets HC tasks carry a C^L without a dummy alpha.

TaskSet parse_taskset(std::istream& in);
TaskSet read_taskset_file(const std::filesystem::path& path);

void write_taskset(std::ostream& out, const TaskSet& ts);
void write_taskset_file(const std::filesystem::path& path, const TaskSet& ts);

}  // namespace mcs
