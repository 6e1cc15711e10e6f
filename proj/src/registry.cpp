#include "lgm/registry.hpp"

#include <cstdlib>

#include "lgm/errors.hpp"
#include "lgm/hr.hpp"

namespace lgm {

std::function<double(double)> univariate_density(const std::string& name) {
  if (name == "pareto_margin") {
    return [](double y) { return 1.0 / (y * y); };
  }
  throw_input("UnknownDensity", "no univariate density named '" + name + "'");
}

std::function<double(double, double)> bivariate_density(const std::string& name) {
  const std::string prefix = "hr:gamma=";
  if (name.rfind(prefix, 0) == 0) {
    char* end = nullptr;
    double gamma = std::strtod(name.c_str() + prefix.size(), &end);
    if (end == nullptr || *end != '\0' || !(gamma > 0.0))
      throw_input("UnknownDensity", "bad gamma in '" + name + "'");
    return [gamma](double a, double b) { return hr_density(gamma, a, b); };
  }
  throw_input("UnknownDensity", "no bivariate density named '" + name + "'");
}

}  // namespace lgm
