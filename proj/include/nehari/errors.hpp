#ifndef NEHARI_ERRORS_HPP_
#define NEHARI_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nehari {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: parameters, grids, specs, config entries.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public InputError {
 public:
  using InputError::InputError;
};

class ConstructionError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateInput : public InputError {
 public:
  using InputError::InputError;
};

// Numerical failures: the input was fine, the computation was not.
class NumericError : public Error {
 public:
  using Error::Error;
};

class NoRoots : public NumericError {
 public:
  NoRoots(const std::string& what, double gap) : NumericError(what), gap_(gap) {}
  double gap() const { return gap_; }

 private:
  double gap_;
};

class NotMinusCone : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegenerateDenominator : public NumericError {
 public:
  using NumericError::NumericError;
};

class CollapseError : public NumericError {
 public:
  CollapseError(const std::string& what, std::string part)
      : NumericError(what), part_(std::move(part)) {}
  const std::string& part() const { return part_; }

 private:
  std::string part_;
};

struct CrossingProbe {
  double r;
  double s_plus;
  double s_minus;
};

class NoCrossing : public NumericError {
 public:
  NoCrossing(const std::string& what, std::vector<CrossingProbe> trace)
      : NumericError(what), trace_(std::move(trace)) {}
  const std::vector<CrossingProbe>& trace() const { return trace_; }

 private:
  std::vector<CrossingProbe> trace_;
};

}  // namespace nehari

#endif  // NEHARI_ERRORS_HPP_
