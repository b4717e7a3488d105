#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MCS_DEFINE_ERROR(Name)          \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

MCS_DEFINE_ERROR(InvalidTask);
MCS_DEFINE_ERROR(InvalidFraction);
MCS_DEFINE_ERROR(NoLcTasks);
MCS_DEFINE_ERROR(Infeasible);
MCS_DEFINE_ERROR(BudgetExceedsWcet);
MCS_DEFINE_ERROR(WrongMode);
MCS_DEFINE_ERROR(BudgetOverrun);
MCS_DEFINE_ERROR(InvalidJobSequence);
MCS_DEFINE_ERROR(BudgetSumViolation);
MCS_DEFINE_ERROR(GenerationTimeout);
MCS_DEFINE_ERROR(GridOverflow);

#undef MCS_DEFINE_ERROR

// Line-numbered parse failure for the text formats (task sets, job CSVs,
// distribution files). line == 0 means "not tied to a line".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace mcs
