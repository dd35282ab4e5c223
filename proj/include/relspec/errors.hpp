#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace relspec {

// Error taxonomy. The CLI maps these onto process exit codes:
// validation_error -> 1, numerical_error -> 2, io_error -> 3.

// Bad construction input, bad parameter, or a value outside an operation's domain.
class validation_error : public std::invalid_argument {
public:
  explicit validation_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Operation is well posed but not supported for this operand (size, missing structure).
class capability_error : public std::runtime_error {
public:
  explicit capability_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical contract broken at run time: unconverged tail, degenerate spectrum, ...
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation requested closer than 1e-10 to a pole of the continued zeta function.
class pole_error : public numerical_error {
public:
  pole_error(const std::string& msg, double location, double residue)
      : numerical_error(msg), location_(location), residue_(residue) {}
  double location() const { return location_; }
  double residue() const { return residue_; }

private:
  double location_;
  double residue_;
};

class io_error : public std::runtime_error {
public:
  explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace relspec
