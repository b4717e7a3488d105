#include "mcs/csv.hpp"

#include <cstdio>
#include <ostream>

namespace mcs {

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

void write_csv_preamble(std::ostream& out, std::string_view experiment, unsigned long long seed,
                        std::string_view params) {
  out << "# mcsched " << kVersion << " experiment=" << experiment << " seed=" << seed;
  if (!params.empty()) out << ' ' << params;
  out << '\n';
}

std::string fmt_double(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

}  // namespace mcs
