#include "isodense/density.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace isodense {

std::string to_string(ShapeClass c) {
  switch (c) {
    case ShapeClass::MonotoneIncreasing: return "monotone-increasing";
    case ShapeClass::MonotoneDecreasing: return "monotone-decreasing";
    case ShapeClass::IncreasingDecreasing: return "increasing-decreasing";
    case ShapeClass::DecreasingIncreasing: return "decreasing-increasing";
    case ShapeClass::Unresolved: return "unresolved";
  }
  return "unresolved";
}

ExprLogDensity::ExprLogDensity(expr::Ast psi, expr::Bindings bindings)
    : psi_(std::move(psi)), bindings_(std::move(bindings)) {
  const std::string var = psi_.variable.empty() ? "x" : psi_.variable;
  dpsi_ = expr::differentiate(psi_, var);
  d2psi_ = expr::differentiate(dpsi_, var);
}

double ExprLogDensity::psi(double t, Side s) const {
  return expr::evaluate(psi_, bindings_, t, s, /*allow_nonfinite=*/true);
}
double ExprLogDensity::dpsi(double t, Side s) const {
  return expr::evaluate(dpsi_, bindings_, t, s, /*allow_nonfinite=*/true);
}
double ExprLogDensity::d2psi(double t, Side s) const {
  return expr::evaluate(d2psi_, bindings_, t, s, /*allow_nonfinite=*/true);
}
std::vector<double> ExprLogDensity::kinks(double lo, double hi) const {
  return expr::kink_points(psi_, bindings_, lo, hi);
}

TabulatedLogDensity::TabulatedLogDensity(std::vector<double> t,
                                         std::vector<double> psi)
    : interp_(std::move(t), std::move(psi)) {}

double TabulatedLogDensity::psi(double t, Side) const {
  return interp_.value(t);
}
double TabulatedLogDensity::dpsi(double t, Side) const {
  return interp_.derivative(t);
}
double TabulatedLogDensity::d2psi(double t, Side) const {
  return interp_.second_derivative(t);
}

CallableLogDensity::CallableLogDensity(Fn psi, Fn dpsi, Fn d2psi,
                                       std::vector<double> kink_points)
    : psi_(std::move(psi)),
      dpsi_(std::move(dpsi)),
      d2psi_(std::move(d2psi)),
      kinks_(std::move(kink_points)) {
  std::sort(kinks_.begin(), kinks_.end());
}

double CallableLogDensity::psi(double t, Side s) const { return psi_(t, s); }
double CallableLogDensity::dpsi(double t, Side s) const { return dpsi_(t, s); }
double CallableLogDensity::d2psi(double t, Side s) const {
  return d2psi_(t, s);
}
std::vector<double> CallableLogDensity::kinks(double lo, double hi) const {
  std::vector<double> out;
  for (double k : kinks_)
    if (k >= lo && k <= hi) out.push_back(k);
  return out;
}

DensityModel::DensityModel(std::shared_ptr<const LogDensity> backend,
                           Domain domain, int dimension)
    : backend_(std::move(backend)), domain_(domain), dimension_(dimension) {
  if (!backend_) throw std::invalid_argument("DensityModel: null backend");
  if (dimension_ < 1)
    throw std::invalid_argument("DensityModel: dimension must be >= 1");
}

DensityModel DensityModel::from_expression(const std::string& psi_text,
                                           Domain domain,
                                           expr::Bindings params) {
  auto ast = expr::parse(psi_text);
  return DensityModel(
      std::make_shared<ExprLogDensity>(std::move(ast), std::move(params)),
      domain);
}

DensityModel DensityModel::from_density_expression(const std::string& f_text,
                                                   Domain domain,
                                                   expr::Bindings params) {
  auto f_ast = expr::parse(f_text);
  expr::Ast psi;
  psi.root = expr::make_unary(expr::UnaryOp::Log, f_ast.root);
  psi.variable = f_ast.variable;
  psi.parameters = f_ast.parameters;
  return DensityModel(
      std::make_shared<ExprLogDensity>(std::move(psi), std::move(params)),
      domain);
}

namespace {

expr::NodePtr substitute_var(const expr::NodePtr& n,
                             const expr::NodePtr& replacement) {
  using expr::Node;
  switch (n->kind) {
    case Node::Kind::Constant:
    case Node::Kind::Parameter:
      return n;
    case Node::Kind::Variable:
      return replacement;
    case Node::Kind::Unary:
      return expr::make_unary(n->uop, substitute_var(n->a, replacement));
    case Node::Kind::Binary:
      return expr::make_binary(n->bop, substitute_var(n->a, replacement),
                               substitute_var(n->b, replacement));
  }
  throw EvalError("malformed expression node");
}

}  // namespace

DensityModel DensityModel::radial_on_line(const std::string& delta_text,
                                          expr::Bindings params) {
  auto delta = expr::parse(delta_text);
  // psi(x) = delta(|x|)
  expr::Ast psi;
  psi.root = substitute_var(delta.root,
                            expr::make_unary(expr::UnaryOp::Abs,
                                             expr::make_var("x")));
  psi.variable = "x";
  psi.parameters = delta.parameters;
  DensityModel model(
      std::make_shared<ExprLogDensity>(std::move(psi), std::move(params)),
      Domain::line());
  model.declared_kinks.push_back(0.0);
  return model;
}

DensityModel DensityModel::from_samples(std::vector<double> t,
                                        std::vector<double> psi) {
  if (t.size() != psi.size() || t.size() < 2)
    throw std::invalid_argument("tabulated density needs matching columns");
  const Domain dom = Domain::compact(t.front(), t.back());
  return DensityModel(
      std::make_shared<TabulatedLogDensity>(std::move(t), std::move(psi)),
      dom);
}

DensityModel DensityModel::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open CSV file: " + path);
  std::vector<double> t, psi;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b)) {
      if (first) {
        first = false;  // header
        continue;
      }
      throw std::invalid_argument("malformed CSV row: " + line);
    }
    first = false;
    if (!t.empty() && a <= t.back())
      throw std::invalid_argument("CSV t column must be strictly increasing");
    t.push_back(a);
    psi.push_back(b);
  }
  return from_samples(std::move(t), std::move(psi));
}

double DensityModel::psi(double t, Side s) const { return backend_->psi(t, s); }
double DensityModel::dpsi(double t, Side s) const {
  return backend_->dpsi(t, s);
}
double DensityModel::d2psi(double t, Side s) const {
  return backend_->d2psi(t, s);
}
double DensityModel::f(double t, Side s) const {
  return std::exp(backend_->psi(t, s));
}

std::vector<double> DensityModel::kinks(double lo, double hi) const {
  std::vector<double> out = backend_->kinks(lo, hi);
  for (double k : declared_kinks)
    if (k >= lo && k <= hi) out.push_back(k);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <=
                                 1e-12 * std::max(1.0, std::abs(a));
                        }),
            out.end());
  return out;
}

ShapeReport classify_shape(const DensityModel& density, double lo, double hi,
                           int samples) {
  if (density.declared_class) {
    ShapeReport r;
    r.shape = *density.declared_class;
    return r;
  }
  const Domain& dom = density.domain();
  lo = std::max(lo, dom.lo);
  hi = std::min(hi, dom.hi);
  if (!(lo < hi)) throw std::invalid_argument("classify_shape: empty window");

  const double span = hi - lo;
  const double tol = 1e-11;

  // Sample psi' one-sidedly; at kinks take both sides.
  struct Sample {
    double t;
    double d;
  };
  std::vector<Sample> samp;
  samp.reserve(2 * samples);
  const auto kinks = density.kinks(lo, hi);
  for (int i = 0; i <= samples; ++i) {
    const double t = lo + span * i / samples;
    bool near_kink = false;
    for (double k : kinks)
      if (std::abs(t - k) <= span / samples) near_kink = true;
    if (near_kink) continue;
    samp.push_back({t, density.dpsi(t, Side::Right)});
  }
  for (double k : kinks) {
    samp.push_back({k, density.dpsi(k, Side::Left)});
    samp.push_back({k, density.dpsi(k, Side::Right)});
  }
  std::sort(samp.begin(), samp.end(),
            [](const Sample& a, const Sample& b) { return a.t < b.t; });

  // Sign pattern of psi' with a dead zone around zero.
  int transitions = 0;
  int first_sign = 0, prev_sign = 0;
  double prev_t = lo;
  double change_lo = lo, change_hi = hi;
  for (const Sample& s : samp) {
    const int sign = s.d > tol ? 1 : (s.d < -tol ? -1 : 0);
    if (sign == 0) continue;
    if (first_sign == 0) first_sign = sign;
    if (prev_sign != 0 && sign != prev_sign) {
      ++transitions;
      change_lo = prev_t;
      change_hi = s.t;
    }
    prev_sign = sign;
    prev_t = s.t;
  }

  ShapeReport r;
  if (transitions == 0) {
    // Monotone (constant densities report as nondecreasing).
    r.shape = first_sign >= 0 ? ShapeClass::MonotoneIncreasing
                              : ShapeClass::MonotoneDecreasing;
    return r;
  }
  if (transitions > 1) {
    r.shape = ShapeClass::Unresolved;
    return r;
  }
  // One sign change; locate it.  A kink inside the bracket is the
  // change point itself, otherwise bisect psi'.
  double x0 = 0.5 * (change_lo + change_hi);
  bool at_kink = false;
  for (double k : kinks) {
    if (k >= change_lo && k <= change_hi) {
      x0 = k;
      at_kink = true;
      break;
    }
  }
  if (!at_kink) {
    x0 = bisect(
        [&](double t) { return density.dpsi(t, Side::Right); }, change_lo,
        change_hi, 1e-12 * std::max(1.0, std::abs(change_hi)));
  }
  r.change_point = x0;
  r.shape = first_sign > 0 ? ShapeClass::IncreasingDecreasing
                           : ShapeClass::DecreasingIncreasing;
  return r;
}

}  // namespace isodense
