#pragma once

#include <stdexcept>

namespace miriad {

// Bad arguments or malformed requests. The CLI maps this to exit code 2.
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input data that violates a store or record contract. Exit code 1.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files. Exit code 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace miriad
