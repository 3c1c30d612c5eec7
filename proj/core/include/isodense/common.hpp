#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace isodense {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One-sided evaluation selector for functions with kinks (e.g. |x| at 0).
/// Auto behaves like Right, matching the right-derivative convention.
enum class Side { Left, Right, Auto };

/// Raised when an expression is evaluated outside its domain
/// (log of a non-positive number, sqrt of a negative, 0^negative, ...).
class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when an iterative routine fails to reach its tolerance.
/// Carries the error bound that was actually achieved.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& msg, double achieved)
      : std::runtime_error(msg + " (achieved error bound " +
                           std::to_string(achieved) + ")"),
        achieved_(achieved) {}
  double achieved() const { return achieved_; }

 private:
  double achieved_;
};

}  // namespace isodense
