#ifndef MATCHFORGE_ERRORS_HPP
#define MATCHFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace matchforge {

// Base for everything this library throws deliberately.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent instance data (bad JSON, duplicate ids,
// non-total priority, negative reserves, ...). Exit code 2 at the CLI.
struct InstanceError : Error {
  using Error::Error;
};

// A query stepped outside its ground set (X not a subset of the ground,
// unknown contract in a priority order, ...). Exit code 1 at the CLI.
struct DomainError : Error {
  using Error::Error;
};

// An enumeration guard would be exceeded. Guards fail loudly, they never
// truncate. Exit code 3 at the CLI.
struct GuardError : Error {
  using Error::Error;
};

// A component broke its contract at runtime, e.g. a choice rule returned
// a set that is not a subset of its argument. Exit code 1 at the CLI.
struct ContractViolation : Error {
  using Error::Error;
};

}  // namespace matchforge

#endif
