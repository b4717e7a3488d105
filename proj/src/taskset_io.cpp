#include "mcs/taskset_io.hpp"

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcs/errors.hpp"

namespace mcs {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string tok; ss >> tok;) out.push_back(tok);
  return out;
}

std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

Rational field(const std::string& tok, std::size_t line, const char* name) {
  try {
    return parse_rational(tok);
  } catch (const ParseError&) {
    throw ParseError(line, std::string("bad ") + name + " '" + tok + "'");
  }
}

}  // namespace

TaskSet parse_taskset(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool header = false;
  std::vector<McTask> tasks;

  while (std::getline(in, raw)) {
    ++line_no;
    auto toks = split_ws(strip_comment(raw));
    if (toks.empty()) continue;
    if (!header) {
      if (toks.size() != 2 || toks[0] != "taskset" || toks[1] != "v1")
        throw ParseError(line_no, "expected header 'taskset v1'");
      header = true;
      continue;
    }
    if (toks.size() < 4 || toks.size() > 6)
      throw ParseError(line_no, "expected 'id T C crit [alpha] [CL]', got " +
                                    std::to_string(toks.size()) + " fields");
    McTask t;
    try {
      std::size_t used = 0;
      t.id = std::stoi(toks[0], &used);
      if (used != toks[0].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(line_no, "bad task id '" + toks[0] + "'");
    }
    t.period = field(toks[1], line_no, "period");
    t.wcet = field(toks[2], line_no, "wcet");
    if (toks[3] == "LC")
      t.crit = Criticality::LC;
    else if (toks[3] == "HC")
      t.crit = Criticality::HC;
    else
      throw ParseError(line_no, "criticality must be LC or HC, got '" + toks[3] + "'");
    if (toks.size() >= 5 && toks[4] != "-") t.alpha = field(toks[4], line_no, "alpha");
    if (toks.size() == 6) t.lc_estimate = field(toks[5], line_no, "C^L");
    try {
      t.validate();
    } catch (const InvalidTask& e) {
      throw ParseError(line_no, e.what());
    }
    tasks.push_back(std::move(t));
  }
  if (!header) throw ParseError(line_no, "missing 'taskset v1' header");
  try {
    return TaskSet(std::move(tasks));
  } catch (const InvalidTask& e) {
    throw ParseError(0, e.what());
  }
}

TaskSet read_taskset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open task-set file " + path.string());
  return parse_taskset(in);
}

void write_taskset(std::ostream& out, const TaskSet& ts) {
  out << "taskset v1\n";
  for (const auto& t : ts.tasks()) {
    out << t.id << ' ' << to_string(t.period) << ' ' << to_string(t.wcet) << ' ' << to_string(t.crit);
    if (t.is_lc() || t.lc_estimate) out << ' ' << (t.is_lc() ? to_string(t.alpha) : std::string("-"));
    if (t.lc_estimate) out << ' ' << to_string(*t.lc_estimate);
    out << '\n';
  }
}

void write_taskset_file(const std::filesystem::path& path, const TaskSet& ts) {
  std::ofstream out(path);
  if (!out) throw ParseError(0, "cannot write task-set file " + path.string());
  write_taskset(out, ts);
}

}  // namespace mcs
