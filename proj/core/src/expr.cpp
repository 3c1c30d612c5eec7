#include "isodense/expr.hpp"

#include "isodense/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <set>

namespace isodense::expr {

namespace {

bool is_const(const NodePtr& n, double v) {
  return n->kind == Node::Kind::Constant && n->value == v;
}

const std::map<std::string, UnaryOp> kFunctions = {
    {"exp", UnaryOp::Exp}, {"log", UnaryOp::Log},   {"sqrt", UnaryOp::Sqrt},
    {"abs", UnaryOp::Abs}, {"sin", UnaryOp::Sin},   {"cos", UnaryOp::Cos},
    {"sign", UnaryOp::Sign}};

}  // namespace

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Constant;
  n->value = v;
  return n;
}

NodePtr make_var(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Variable;
  n->name = name;
  return n;
}

NodePtr make_param(const std::string& name) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Parameter;
  n->name = name;
  return n;
}

NodePtr make_unary(UnaryOp op, NodePtr a) {
  if (op == UnaryOp::Neg) {
    if (a->kind == Node::Kind::Constant) return make_const(-a->value);
    if (a->kind == Node::Kind::Unary && a->uop == UnaryOp::Neg) return a->a;
  }
  // log(exp(u)) = u identically and exp(log(u)) = u wherever log(u)
  // evaluates; collapsing keeps log-densities given as exp(...) exact
  // far beyond the overflow range of exp.
  if (op == UnaryOp::Log && a->kind == Node::Kind::Unary &&
      a->uop == UnaryOp::Exp)
    return a->a;
  if (op == UnaryOp::Exp && a->kind == Node::Kind::Unary &&
      a->uop == UnaryOp::Log)
    return a->a;
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Unary;
  n->uop = op;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  switch (op) {
    case BinaryOp::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case BinaryOp::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return make_unary(UnaryOp::Neg, b);
      break;
    case BinaryOp::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case BinaryOp::Div:
      if (is_const(a, 0.0)) return make_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case BinaryOp::Pow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return make_const(1.0);
      break;
  }
  if (a->kind == Node::Kind::Constant && b->kind == Node::Kind::Constant) {
    switch (op) {
      case BinaryOp::Add: return make_const(a->value + b->value);
      case BinaryOp::Sub: return make_const(a->value - b->value);
      case BinaryOp::Mul: return make_const(a->value * b->value);
      case BinaryOp::Div:
        if (b->value != 0.0) return make_const(a->value / b->value);
        break;
      case BinaryOp::Pow: {
        const double p = std::pow(a->value, b->value);
        if (std::isfinite(p)) return make_const(p);
        break;
      }
    }
  }
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Binary;
  n->bop = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over a token stream.

namespace {

struct Token {
  enum class Type { Number, Identifier, Op, LParen, RParen, End };
  Type type;
  double number = 0.0;
  std::string text;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
      ++i_;
    tok_.pos = i_;
    if (i_ >= s_.size()) {
      tok_.type = Token::Type::End;
      return;
    }
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      tok_.number = std::strtod(s_.c_str() + i_, &end);
      if (end == s_.c_str() + i_)
        throw ParseError("malformed number", i_);
      tok_.type = Token::Type::Number;
      i_ = static_cast<std::size_t>(end - s_.c_str());
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) ||
                               s_[j] == '_'))
        ++j;
      tok_.type = Token::Type::Identifier;
      tok_.text = s_.substr(i_, j - i_);
      i_ = j;
      return;
    }
    if (c == '(') {
      tok_.type = Token::Type::LParen;
      ++i_;
      return;
    }
    if (c == ')') {
      tok_.type = Token::Type::RParen;
      ++i_;
      return;
    }
    if (std::strchr("+-*/^", c)) {
      tok_.type = Token::Type::Op;
      tok_.text = std::string(1, c);
      ++i_;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i_);
  }

  const std::string& s_;
  std::size_t i_ = 0;
  Token tok_;
};

class Parser {
 public:
  Parser(const std::string& text,
         const std::vector<std::string>* allowed_params)
      : lex_(text), allowed_(allowed_params) {}

  Ast run() {
    NodePtr root = expression();
    if (lex_.peek().type != Token::Type::End)
      throw ParseError("trailing input", lex_.peek().pos);
    Ast ast;
    ast.root = std::move(root);
    ast.variable = variable_;
    ast.parameters.assign(params_.begin(), params_.end());
    return ast;
  }

 private:
  NodePtr expression() {
    NodePtr lhs = term();
    while (lex_.peek().type == Token::Type::Op &&
           (lex_.peek().text == "+" || lex_.peek().text == "-")) {
      const bool add = lex_.take().text == "+";
      lhs = make_binary(add ? BinaryOp::Add : BinaryOp::Sub, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (lex_.peek().type == Token::Type::Op &&
           (lex_.peek().text == "*" || lex_.peek().text == "/")) {
      const bool mul = lex_.take().text == "*";
      lhs = make_binary(mul ? BinaryOp::Mul : BinaryOp::Div, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    if (lex_.peek().type == Token::Type::Op && lex_.peek().text == "-") {
      lex_.take();
      return make_unary(UnaryOp::Neg, factor());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (lex_.peek().type == Token::Type::Op && lex_.peek().text == "^") {
      lex_.take();
      return make_binary(BinaryOp::Pow, base, factor());
    }
    return base;
  }

  NodePtr atom() {
    const Token t = lex_.take();
    switch (t.type) {
      case Token::Type::Number:
        return make_const(t.number);
      case Token::Type::LParen: {
        NodePtr inner = expression();
        expect_rparen(t.pos);
        return inner;
      }
      case Token::Type::Identifier: {
        if (lex_.peek().type == Token::Type::LParen) {
          auto fn = kFunctions.find(t.text);
          if (fn == kFunctions.end())
            throw ParseError("unknown function '" + t.text + "'", t.pos);
          const std::size_t open = lex_.take().pos;
          NodePtr arg = expression();
          expect_rparen(open);
          return make_unary(fn->second, arg);
        }
        if (t.text == "x" || t.text == "r") {
          if (!variable_.empty() && variable_ != t.text)
            throw ParseError("expression mixes variables x and r", t.pos);
          variable_ = t.text;
          return make_var(t.text);
        }
        if (allowed_ && std::find(allowed_->begin(), allowed_->end(),
                                  t.text) == allowed_->end())
          throw ParseError("unknown identifier '" + t.text + "'", t.pos);
        params_.insert(t.text);
        return make_param(t.text);
      }
      case Token::Type::End:
        throw ParseError("unexpected end of input", t.pos);
      default:
        throw ParseError("unexpected token", t.pos);
    }
  }

  void expect_rparen(std::size_t open_pos) {
    if (lex_.peek().type != Token::Type::RParen) {
      if (lex_.peek().type == Token::Type::End)
        throw ParseError("unbalanced parenthesis", lex_.peek().pos);
      (void)open_pos;
      throw ParseError("expected ')'", lex_.peek().pos);
    }
    lex_.take();
  }

  Lexer lex_;
  const std::vector<std::string>* allowed_;
  std::string variable_;
  std::set<std::string> params_;
};

}  // namespace

Ast parse(const std::string& text) { return Parser(text, nullptr).run(); }

Ast parse(const std::string& text,
          const std::vector<std::string>& allowed_parameters) {
  return Parser(text, &allowed_parameters).run();
}

// ---------------------------------------------------------------------------
// Evaluation.

namespace {

double eval_node(const Node& n, const Bindings& b, double point, Side side) {
  switch (n.kind) {
    case Node::Kind::Constant:
      return n.value;
    case Node::Kind::Variable:
      return point;
    case Node::Kind::Parameter: {
      auto it = b.find(n.name);
      if (it == b.end())
        throw EvalError("unbound parameter '" + n.name + "'");
      return it->second;
    }
    case Node::Kind::Unary: {
      const double v = eval_node(*n.a, b, point, side);
      switch (n.uop) {
        case UnaryOp::Neg: return -v;
        case UnaryOp::Exp: return std::exp(v);
        case UnaryOp::Log:
          if (v <= 0.0) throw EvalError("log of non-positive value");
          return std::log(v);
        case UnaryOp::Sqrt:
          if (v < 0.0) throw EvalError("sqrt of negative value");
          return std::sqrt(v);
        case UnaryOp::Abs: return std::abs(v);
        case UnaryOp::Sin: return std::sin(v);
        case UnaryOp::Cos: return std::cos(v);
        case UnaryOp::Sign:
          if (v > 0.0) return 1.0;
          if (v < 0.0) return -1.0;
          return side == Side::Left ? -1.0 : 1.0;
      }
      break;
    }
    case Node::Kind::Binary: {
      const double u = eval_node(*n.a, b, point, side);
      const double v = eval_node(*n.b, b, point, side);
      switch (n.bop) {
        case BinaryOp::Add: return u + v;
        case BinaryOp::Sub: return u - v;
        case BinaryOp::Mul: return u * v;
        case BinaryOp::Div:
          if (v == 0.0) throw EvalError("division by zero");
          return u / v;
        case BinaryOp::Pow:
          if (u == 0.0 && v < 0.0) throw EvalError("0 raised to negative power");
          if (u < 0.0 && v != std::floor(v))
            throw EvalError("negative base with non-integer exponent");
          return std::pow(u, v);
      }
      break;
    }
  }
  throw EvalError("malformed expression node");
}

}  // namespace

double evaluate(const Ast& ast, const Bindings& bindings, double point,
                Side side, bool allow_nonfinite) {
  const double v = eval_node(*ast.root, bindings, point, side);
  if (std::isnan(v)) throw EvalError("evaluation is NaN");
  if (!allow_nonfinite && !std::isfinite(v))
    throw EvalError("evaluation is not finite");
  return v;
}

// ---------------------------------------------------------------------------
// Differentiation.

namespace {

NodePtr diff(const NodePtr& n, const std::string& var) {
  switch (n->kind) {
    case Node::Kind::Constant:
    case Node::Kind::Parameter:
      return make_const(0.0);
    case Node::Kind::Variable:
      return make_const(n->name == var ? 1.0 : 0.0);
    case Node::Kind::Unary: {
      const NodePtr du = diff(n->a, var);
      switch (n->uop) {
        case UnaryOp::Neg:
          return make_unary(UnaryOp::Neg, du);
        case UnaryOp::Exp:
          return make_binary(BinaryOp::Mul,
                             make_unary(UnaryOp::Exp, n->a), du);
        case UnaryOp::Log:
          return make_binary(BinaryOp::Div, du, n->a);
        case UnaryOp::Sqrt:
          return make_binary(
              BinaryOp::Div, du,
              make_binary(BinaryOp::Mul, make_const(2.0),
                          make_unary(UnaryOp::Sqrt, n->a)));
        case UnaryOp::Abs:
          return make_binary(BinaryOp::Mul, make_unary(UnaryOp::Sign, n->a),
                             du);
        case UnaryOp::Sin:
          return make_binary(BinaryOp::Mul, make_unary(UnaryOp::Cos, n->a),
                             du);
        case UnaryOp::Cos:
          return make_unary(
              UnaryOp::Neg,
              make_binary(BinaryOp::Mul, make_unary(UnaryOp::Sin, n->a), du));
        case UnaryOp::Sign:
          return make_const(0.0);  // a.e.; kinks handled by Side queries
      }
      break;
    }
    case Node::Kind::Binary: {
      const NodePtr du = diff(n->a, var);
      const NodePtr dv = diff(n->b, var);
      switch (n->bop) {
        case BinaryOp::Add:
          return make_binary(BinaryOp::Add, du, dv);
        case BinaryOp::Sub:
          return make_binary(BinaryOp::Sub, du, dv);
        case BinaryOp::Mul:
          return make_binary(BinaryOp::Add,
                             make_binary(BinaryOp::Mul, du, n->b),
                             make_binary(BinaryOp::Mul, n->a, dv));
        case BinaryOp::Div:
          return make_binary(
              BinaryOp::Div,
              make_binary(BinaryOp::Sub, make_binary(BinaryOp::Mul, du, n->b),
                          make_binary(BinaryOp::Mul, n->a, dv)),
              make_binary(BinaryOp::Pow, n->b, make_const(2.0)));
        case BinaryOp::Pow: {
          if (n->b->kind == Node::Kind::Constant) {
            const double c = n->b->value;
            return make_binary(
                BinaryOp::Mul, make_const(c),
                make_binary(BinaryOp::Mul,
                            make_binary(BinaryOp::Pow, n->a,
                                        make_const(c - 1.0)),
                            du));
          }
          if (n->a->kind == Node::Kind::Constant) {
            return make_binary(
                BinaryOp::Mul, n,
                make_binary(BinaryOp::Mul,
                            make_unary(UnaryOp::Log, n->a), dv));
          }
          // u^v * (v' log u + v u'/u)
          return make_binary(
              BinaryOp::Mul, n,
              make_binary(BinaryOp::Add,
                          make_binary(BinaryOp::Mul, dv,
                                      make_unary(UnaryOp::Log, n->a)),
                          make_binary(BinaryOp::Div,
                                      make_binary(BinaryOp::Mul, n->b, du),
                                      n->a)));
        }
      }
      break;
    }
  }
  throw EvalError("malformed expression node");
}

}  // namespace

Ast differentiate(const Ast& ast, const std::string& var) {
  Ast out;
  out.root = diff(ast.root, var);
  out.variable = ast.variable;
  out.parameters = ast.parameters;
  return out;
}

// ---------------------------------------------------------------------------
// Rendering.

namespace {

int precedence(const Node& n) {
  if (n.kind == Node::Kind::Binary) {
    switch (n.bop) {
      case BinaryOp::Add:
      case BinaryOp::Sub: return 1;
      case BinaryOp::Mul:
      case BinaryOp::Div: return 2;
      case BinaryOp::Pow: return 4;
    }
  }
  if (n.kind == Node::Kind::Unary && n.uop == UnaryOp::Neg) return 3;
  return 5;
}

void render_node(const Node& n, std::string& out);

void render_child(const Node& child, int parent_prec, bool tight,
                  std::string& out) {
  const bool parens =
      precedence(child) < parent_prec || (tight && precedence(child) == parent_prec);
  if (parens) out += '(';
  render_node(child, out);
  if (parens) out += ')';
}

void render_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Constant: {
      char buf[40];
      if (n.value < 0.0) {
        std::snprintf(buf, sizeof buf, "(%.17g)", n.value);
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
      }
      out += buf;
      return;
    }
    case Node::Kind::Variable:
    case Node::Kind::Parameter:
      out += n.name;
      return;
    case Node::Kind::Unary: {
      if (n.uop == UnaryOp::Neg) {
        out += '-';
        render_child(*n.a, 3, true, out);
        return;
      }
      switch (n.uop) {
        case UnaryOp::Exp: out += "exp"; break;
        case UnaryOp::Log: out += "log"; break;
        case UnaryOp::Sqrt: out += "sqrt"; break;
        case UnaryOp::Abs: out += "abs"; break;
        case UnaryOp::Sin: out += "sin"; break;
        case UnaryOp::Cos: out += "cos"; break;
        default: break;
      }
      if (n.uop == UnaryOp::Sign) out += "sign";
      out += '(';
      render_node(*n.a, out);
      out += ')';
      return;
    }
    case Node::Kind::Binary: {
      const int prec = precedence(n);
      switch (n.bop) {
        case BinaryOp::Add:
          render_child(*n.a, prec, false, out);
          out += '+';
          render_child(*n.b, prec, true, out);
          return;
        case BinaryOp::Sub:
          render_child(*n.a, prec, false, out);
          out += '-';
          render_child(*n.b, prec, true, out);
          return;
        case BinaryOp::Mul:
          render_child(*n.a, prec, false, out);
          out += '*';
          render_child(*n.b, prec, true, out);
          return;
        case BinaryOp::Div:
          render_child(*n.a, prec, false, out);
          out += '/';
          render_child(*n.b, prec, true, out);
          return;
        case BinaryOp::Pow:
          render_child(*n.a, prec + 1, false, out);
          out += '^';
          render_child(*n.b, prec, false, out);  // right-associative
          return;
      }
    }
  }
}

}  // namespace

std::string render(const Ast& ast) {
  std::string out;
  render_node(*ast.root, out);
  return out;
}

// ---------------------------------------------------------------------------
// Kink detection.

namespace {

void collect_abs_args(const NodePtr& n, std::vector<NodePtr>& args) {
  if (n->kind == Node::Kind::Unary) {
    if (n->uop == UnaryOp::Abs || n->uop == UnaryOp::Sign)
      args.push_back(n->a);
    collect_abs_args(n->a, args);
  } else if (n->kind == Node::Kind::Binary) {
    collect_abs_args(n->a, args);
    collect_abs_args(n->b, args);
  }
}

}  // namespace

std::vector<double> kink_points(const Ast& ast, const Bindings& bindings,
                                double lo, double hi, int scan_samples) {
  std::vector<NodePtr> args;
  collect_abs_args(ast.root, args);
  std::vector<double> kinks;
  for (const NodePtr& arg : args) {
    Ast sub{arg, ast.variable, ast.parameters};
    auto val = [&](double t) { return evaluate(sub, bindings, t); };
    double prev_t = lo;
    double prev_v;
    try {
      prev_v = val(lo);
    } catch (const EvalError&) {
      continue;
    }
    for (int i = 1; i <= scan_samples; ++i) {
      const double t = lo + (hi - lo) * i / scan_samples;
      double v;
      try {
        v = val(t);
      } catch (const EvalError&) {
        prev_t = t;
        continue;
      }
      if (prev_v == 0.0) {
        kinks.push_back(prev_t);
      } else if ((prev_v > 0.0) != (v > 0.0)) {
        kinks.push_back(bisect(
            [&](double s) { return val(s); }, prev_t, t,
            1e-14 * std::max(1.0, std::abs(t))));
      }
      prev_t = t;
      prev_v = v;
    }
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end(),
                          [](double a, double b) {
                            return std::abs(a - b) <=
                                   1e-12 * std::max(1.0, std::abs(a));
                          }),
              kinks.end());
  return kinks;
}

}  // namespace isodense::expr
