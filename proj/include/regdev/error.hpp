#pragma once

#include <stdexcept>
#include <string>

namespace regdev {

/// Malformed or inconsistent input data (CSV content, panels, schemas).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numeric formula was evaluated outside its domain (e.g. a zero denominator).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace regdev
