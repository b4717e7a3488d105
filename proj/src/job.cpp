#include "mcs/job.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "mcs/csv.hpp"
#include "mcs/errors.hpp"

namespace mcs {

void normalize(JobSequence& jobs) {
  std::stable_sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
    if (a.release != b.release) return a.release < b.release;
    return a.task < b.task;
  });
  std::map<TaskId, std::uint32_t> next;
  for (auto& j : jobs) j.seq = next[j.task]++;
}

void validate_jobs(const TaskSet& ts, const JobSequence& jobs) {
  std::map<TaskId, const Job*> last;
  for (const auto& j : jobs) {
    std::size_t idx = 0;
    try {
      idx = ts.index_of(j.task);
    } catch (const std::out_of_range&) {
      throw InvalidJobSequence("job of unknown task " + std::to_string(j.task));
    }
    const auto& t = ts[idx];
    const std::string who = "job " + std::to_string(j.seq) + " of task " + std::to_string(j.task);
    if (j.release < 0) throw InvalidJobSequence(who + " has a negative release time");
    if (j.demand <= 0) throw InvalidJobSequence(who + " has non-positive demand");
    if (j.demand > t.wcet) throw InvalidJobSequence(who + " demands more than C_i");
    if (auto it = last.find(j.task); it != last.end()) {
      if (j.release < it->second->release + t.period)
        throw InvalidJobSequence(who + " is released less than one period after its predecessor");
    }
    last[j.task] = &j;
  }
}

JobSequence parse_jobs_csv(std::istream& in) {
  JobSequence jobs;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (!header) {
      if (cells.size() != 3 || cells[0] != "task" || cells[1] != "release" || cells[2] != "demand")
        throw ParseError(line_no, "expected header 'task,release,demand'");
      header = true;
      continue;
    }
    if (cells.size() != 3) throw ParseError(line_no, "expected 3 columns");
    Job j;
    try {
      j.task = std::stoi(cells[0]);
      j.release = parse_rational(cells[1]);
      j.demand = parse_rational(cells[2]);
    } catch (const std::exception& e) {
      throw ParseError(line_no, std::string("bad job row: ") + e.what());
    }
    jobs.push_back(std::move(j));
  }
  if (!header) throw ParseError(line_no, "missing 'task,release,demand' header");
  normalize(jobs);
  return jobs;
}

JobSequence read_jobs_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open job file " + path.string());
  return parse_jobs_csv(in);
}

void write_jobs_csv(std::ostream& out, const JobSequence& jobs) {
  out << "task,release,demand\n";
  for (const auto& j : jobs) out << j.task << ',' << to_string(j.release) << ',' << to_string(j.demand) << '\n';
}

}  // namespace mcs
