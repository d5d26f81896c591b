#pragma once

#include <stdexcept>
#include <string>

namespace nkls {

/// A parameter lies outside its documented domain (e.g. k not in [0, n-1]).
class ParameterDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A configuration and a landscape disagree on the number of nodes.
class DimensionMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A walk was requested with a zero (or otherwise unusable) evaluation budget.
class ZeroBudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Generating the requested landscape would exceed the table entry cap.
class MemoryGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive enumeration was requested above the configured node-count cap.
class EnumerationCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem failure; message carries the offending path.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invariant-violating document (JSON/CSV import, spec files).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nkls
