#ifndef QWALK_ERROR_HPP
#define QWALK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qwalk {

// Argument outside the documented numeric range of a function.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Malformed input: bad configuration, non-Hermitian matrix, mismatched supports.
struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// The time integrator lost unitarity beyond tolerance.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Should not happen inside the documented range.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace qwalk

#endif  // QWALK_ERROR_HPP
