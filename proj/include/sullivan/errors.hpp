#pragma once

#include <stdexcept>

namespace sullivan {

// An exact answer would need degrees above the algebra's bound.
struct bound_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed workspace input.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sullivan
