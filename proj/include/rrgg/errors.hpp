#pragma once

#include <stdexcept>
#include <string>

namespace rrgg {

// Invalid parameters detected before any sampling happens.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Caller passed arguments that violate an operation's contract.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Mathematical domain violation (e.g. log log n undefined).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Exact oracles refuse instances beyond their size caps.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Cell classification found nothing to build on.
class ClassificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dump files.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rrgg
