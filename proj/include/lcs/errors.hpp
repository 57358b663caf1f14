#ifndef LCS_ERRORS_HPP
#define LCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lcs {

/// Rejected input: malformed data, violated preconditions, unsupported requests.
class ValidationError : public std::invalid_argument {
public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A computation that started from valid input but could not be certified numerically.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A group element left the domain of the active chart or logarithm.
class ChartError : public NumericalError {
public:
  explicit ChartError(const std::string& what) : NumericalError(what) {}
};

} // namespace lcs

#endif
