#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mcs {

inline constexpr const char* kVersion = "0.1.0";

std::vector<std::string> split_csv_line(std::string_view line);

/// Writes the provenance comment that heads every experiment CSV:
/// "# mcsched <version> experiment=<name> seed=<seed> <params>".
void write_csv_preamble(std::ostream& out, std::string_view experiment, unsigned long long seed,
                        std::string_view params);

/// Fixed-precision formatting so repeated runs produce identical bytes.
std::string fmt_double(double v, int precision = 6);

}  // namespace mcs
