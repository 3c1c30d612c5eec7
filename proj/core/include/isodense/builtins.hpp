#pragma once

#include <string>
#include <vector>

#include "isodense/density.hpp"

namespace isodense {

/// Built-in named densities on the line: "gauss" (exp(-pi x^2)),
/// "exp-square" (exp(x^2)), "laplace" (exp(-|x|)), and the piecewise
/// fixtures "houseroof-flat" (exp(-|x|) glued to the constant 1/6) and
/// "houseroof-decay" (exp(-|x|) glued to 1/9 + 1/(x - log 6 + 18)).
DensityModel builtin_density(const std::string& name);

std::vector<std::string> builtin_density_names();

}  // namespace isodense
