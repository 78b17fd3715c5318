#pragma once

#include <stdexcept>
#include <string>

namespace aptmine {

/// Ground atom built with the wrong number of arguments for its predicate.
class ArityError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Time index outside 1..t_max.
class TimeRangeError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Moving statistics requested without a full window of history.
class InsufficientHistory : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Candidate generation requested for a consequence that never occurs.
class EmptyConsequence : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Brute-force enumeration larger than the configured guard.
class GuardExceeded : public std::length_error {
public:
  using std::length_error::length_error;
};

/// Malformed input file (header, version line, record syntax).
class FormatError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace aptmine
