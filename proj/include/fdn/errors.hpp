#pragma once

#include <stdexcept>
#include <string>

namespace fdn {

/// Malformed or semantically invalid input document (catalog, scenario, plan).
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request could not be placed on any platform.
class SchedulingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A simulation invariant (memory, conservation, legal replica transitions) was broken.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Knowledge store misuse, such as writing to a closed run.
class KnowledgeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fdn
