#pragma once

#include <stdexcept>
#include <string>

namespace cvxtomo {

// A documented precondition of an operation does not hold for the given input.
class PreconditionError : public std::invalid_argument {
public:
  explicit PreconditionError(const std::string& what, double measured = 0.0)
      : std::invalid_argument(what), measured_(measured) {}

  // The quantity that violated the precondition (a defect, an eigenvalue, ...).
  double measured() const noexcept { return measured_; }

private:
  double measured_;
};

// The computation reached a state that a proven statement rules out.
class InconsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace cvxtomo
