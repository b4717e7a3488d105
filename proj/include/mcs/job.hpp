#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mcs/taskmodel.hpp"

namespace mcs {

struct Job {
  TaskId task = 0;
  Rational release;
  Rational demand;   // actual execution requirement, 0 < demand <= C_i
  std::uint32_t seq = 0;
};

using JobSequence = std::vector<Job>;

/// Sorts by (release, task, seq) and renumbers seq per task in release order.
void normalize(JobSequence& jobs);

/// Throws InvalidJobSequence on unknown tasks, non-positive or over-WCET
/// demand, negative release times, or releases closer than one period.
void validate_jobs(const TaskSet& ts, const JobSequence& jobs);

// CSV with header "task,release,demand"; values are integers, decimals or p/q.
JobSequence parse_jobs_csv(std::istream& in);
JobSequence read_jobs_csv(const std::filesystem::path& path);
void write_jobs_csv(std::ostream& out, const JobSequence& jobs);

}  // namespace mcs
