#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isodense/common.hpp"

namespace isodense::expr {

enum class UnaryOp { Neg, Exp, Log, Sqrt, Abs, Sin, Cos, Sign };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

/// Immutable expression tree node.  Sign is not part of the surface
/// grammar's documented function set; it appears in derivatives of Abs
/// (with sign(0) resolved by the Side convention) and parses back so
/// that rendered derivatives stay round-trippable.
struct Node {
  enum class Kind { Constant, Variable, Parameter, Unary, Binary };
  Kind kind;
  double value = 0.0;   // Constant
  std::string name;     // Variable ("x" or "r") or Parameter
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  NodePtr a, b;  // Unary uses a only
};

struct Ast {
  NodePtr root;
  std::string variable;                  // "x", "r", or "" if absent
  std::vector<std::string> parameters;   // sorted, unique
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

using Bindings = std::map<std::string, double>;

/// Parses the density expression language: +, -, *, /, ^ (right
/// associative, binds tighter than unary minus), parentheses, decimal
/// literals, the variable x or r, free identifiers as late-bound
/// parameters, and exp/log/sqrt/abs/sin/cos/sign applications.
Ast parse(const std::string& text);

/// As parse, but identifiers outside {variable} + allowed are rejected.
Ast parse(const std::string& text,
          const std::vector<std::string>& allowed_parameters);

/// IEEE-double evaluation at the given point.  All parameters must be
/// bound.  Side picks the branch of sign(0).  With allow_nonfinite the
/// result may be +-inf (overflow in tails); NaN always reports an error.
double evaluate(const Ast& ast, const Bindings& bindings, double point,
                Side side = Side::Auto, bool allow_nonfinite = false);

/// Symbolic derivative with respect to var.  abs differentiates to
/// sign, so the result evaluates one-sidedly at kinks.
Ast differentiate(const Ast& ast, const std::string& var);

/// Precedence-aware printer; parse(render(a)) evaluates identically.
std::string render(const Ast& ast);

/// Zeros of abs/sign arguments inside [lo, hi], located by a sign-change
/// scan plus bisection.  These are the points where quadrature intervals
/// must not straddle.
std::vector<double> kink_points(const Ast& ast, const Bindings& bindings,
                                double lo, double hi, int scan_samples = 4096);

// Node constructors with light constant folding (used by differentiate;
// exposed for tests building ASTs directly).
NodePtr make_const(double v);
NodePtr make_var(const std::string& name);
NodePtr make_param(const std::string& name);
NodePtr make_unary(UnaryOp op, NodePtr a);
NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b);

}  // namespace isodense::expr
