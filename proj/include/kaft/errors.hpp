#pragma once

#include <stdexcept>
#include <string>

namespace kaft {

// Invalid input: violated precondition, pole parameter, boundary point.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure did not reach its tolerance. Carries whatever
// partial value was available at the point of failure.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double partial = 0.0, double est_error = 0.0)
      : std::runtime_error(what), partial_(partial), est_error_(est_error) {}
  double partial_value() const { return partial_; }
  double est_error() const { return est_error_; }

 private:
  double partial_;
  double est_error_;
};

}  // namespace kaft
