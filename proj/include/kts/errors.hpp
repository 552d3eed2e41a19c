#pragma once

#include <stdexcept>
#include <string>

namespace kts {

// Caller violated an operation's precondition (bad congruence, wrong shape...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Embedded or imported data failed its integrity check.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input text (JSON, encodings, descriptors) could not be parsed.
class MalformedInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The order is admissible but no implemented route covers it.
class NotCovered : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Lookup of an identifier that does not exist.
class UnknownId : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A construction produced an output that contradicts its own invariants.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kts
