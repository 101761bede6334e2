#pragma once

#include <stdexcept>
#include <string>

namespace fdens {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed data, mismatched grids, out-of-range arguments.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The data are valid but the computation is degenerate (e.g. zero variance).
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace fdens
