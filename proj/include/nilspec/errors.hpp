#pragma once

#include <stdexcept>

namespace nilspec {

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct rank_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// thrown by operations that require structure matrix rank == m
struct normalization_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct verification_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct invalid_parameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace nilspec
