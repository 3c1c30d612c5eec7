#include "isodense/builtins.hpp"

#include <cmath>

namespace isodense {

namespace {

DensityModel make_gauss() {
  auto backend = std::make_shared<CallableLogDensity>(
      [](double x, Side) { return -M_PI * x * x; },
      [](double x, Side) { return -2.0 * M_PI * x; },
      [](double, Side) { return -2.0 * M_PI; });
  DensityModel d(backend, Domain::line());
  d.declared_convexity = ConvexityClass::StrictlyLogConcave;
  return d;
}

DensityModel make_exp_square() {
  auto backend = std::make_shared<CallableLogDensity>(
      [](double x, Side) { return x * x; },
      [](double x, Side) { return 2.0 * x; },
      [](double, Side) { return 2.0; });
  DensityModel d(backend, Domain::line());
  d.declared_convexity = ConvexityClass::StrictlyLogConvex;
  return d;
}

double side_sign(double x, Side s) {
  if (x > 0.0) return 1.0;
  if (x < 0.0) return -1.0;
  return s == Side::Left ? -1.0 : 1.0;
}

DensityModel make_laplace() {
  auto backend = std::make_shared<CallableLogDensity>(
      [](double x, Side) { return -std::abs(x); },
      [](double x, Side s) { return -side_sign(x, s); },
      [](double, Side) { return 0.0; }, std::vector<double>{0.0});
  DensityModel d(backend, Domain::line());
  d.declared_convexity = ConvexityClass::LogConcave;
  return d;
}

// exp(-|x|) up to log 6, then the constant 1/6.
DensityModel make_houseroof_flat() {
  const double cut = std::log(6.0);
  auto backend = std::make_shared<CallableLogDensity>(
      [cut](double x, Side) {
        return x <= cut ? -std::abs(x) : -cut;
      },
      [cut](double x, Side s) {
        if (x < cut || (x == cut && s == Side::Left)) return -side_sign(x, s);
        return 0.0;
      },
      [](double, Side) { return 0.0; }, std::vector<double>{0.0, cut});
  return DensityModel(backend, Domain::line());
}

// exp(-|x|) up to log 6, then 1/9 + 1/(x - log 6 + 18); continuous at
// the cut since exp(-log 6) = 1/6 = 1/9 + 1/18.
DensityModel make_houseroof_decay() {
  const double cut = std::log(6.0);
  auto psi = [cut](double x, Side) {
    if (x <= cut) return -std::abs(x);
    const double u = x - cut + 18.0;
    return std::log(1.0 / 9.0 + 1.0 / u);
  };
  auto dpsi = [cut](double x, Side s) {
    if (x < cut || (x == cut && s == Side::Left)) return -side_sign(x, s);
    const double u = x - cut + 18.0;
    return -9.0 / (u * u + 9.0 * u);
  };
  auto d2psi = [cut](double x, Side s) {
    if (x < cut || (x == cut && s == Side::Left)) return 0.0;
    const double u = x - cut + 18.0;
    const double q = u * u + 9.0 * u;
    return 9.0 * (2.0 * u + 9.0) / (q * q);
  };
  auto backend = std::make_shared<CallableLogDensity>(
      psi, dpsi, d2psi, std::vector<double>{0.0, cut});
  return DensityModel(backend, Domain::line());
}

}  // namespace

DensityModel builtin_density(const std::string& name) {
  if (name == "gauss") return make_gauss();
  if (name == "exp-square") return make_exp_square();
  if (name == "laplace") return make_laplace();
  if (name == "houseroof-flat") return make_houseroof_flat();
  if (name == "houseroof-decay") return make_houseroof_decay();
  throw std::invalid_argument("unknown built-in density '" + name + "'");
}

std::vector<std::string> builtin_density_names() {
  return {"gauss", "exp-square", "laplace", "houseroof-flat",
          "houseroof-decay"};
}

}  // namespace isodense
