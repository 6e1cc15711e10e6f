#ifndef LGM_REGISTRY_HPP_
#define LGM_REGISTRY_HPP_

#include <functional>
#include <string>

namespace lgm {

// Built-in density registry: construction inputs are referenced by name at
// the JSON boundary instead of ingesting code.
//
//   univariate:  "pareto_margin"            y^-2 on (0, inf)
//   bivariate:   "hr:gamma=<G>"             bivariate Husler-Reiss density
//
// Unknown names raise UnknownDensity.
std::function<double(double)> univariate_density(const std::string& name);
std::function<double(double, double)> bivariate_density(const std::string& name);

}  // namespace lgm

#endif  // LGM_REGISTRY_HPP_
