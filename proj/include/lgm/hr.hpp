#ifndef LGM_HR_HPP_
#define LGM_HR_HPP_

#include <vector>

#include "lgm/graph.hpp"
#include "lgm/grid.hpp"

namespace lgm {

// Bivariate Husler-Reiss exponent-measure density on (0, inf)^2:
//   (2 pi G)^(-1/2) y1^-2 y2^-1 exp{-[log(y2/y1) + G/2]^2 / (2G)}.
// It is -3-homogeneous with univariate margins m(y) = y^-2, and symmetric in
// its two arguments.
double hr_density(double gamma, double y1, double y2);

// Bivariate max-stable Husler-Reiss exponent function
//   V(x) = (1/x1) Phi(sqrt(G)/2 + log(x2/x1)/sqrt(G))
//        + (1/x2) Phi(sqrt(G)/2 + log(x1/x2)/sqrt(G)).
double hr_exponent_biv(double gamma, double x1, double x2);

struct HREdge {
  int i = 0, j = 0;
  double gamma = 1.0;  // > 0
  double p = 1.0;      // mixture probability in [0, 1]
};

// Forest of bivariate Husler-Reiss blocks with sub-face mass controlled by
// the per-edge mixture probabilities.
struct HRForestSpec {
  int d = 0;
  std::vector<HREdge> edges;

  UndirectedGraph graph() const;  // validates the forest property
  void validate() const;
};

// Path sums of Gamma within the trees; NaN marks pairs in different
// components, diagonal entries are 0.
std::vector<std::vector<double>> tree_complete_gamma(const HRForestSpec& spec);

// Closed-form extremal correlations
//   chi_ij = {2 - 2 Phi(sqrt(Gamma_ij)/2)} * prod_{(s,t) in path_ij} p_st,
// zero across components, one on the diagonal.
std::vector<std::vector<double>> chi_forest(const HRForestSpec& spec);

// Grid realization of the forest exponent-measure density via the generic
// mixture blocks (kappa = hr_density, m(y) = y^-2).
GridMeasure build_grid(const HRForestSpec& spec, const std::vector<AxisGrid>& grids,
                       double margin_tol = 0.05);

struct ChiQuadratureOptions {
  double log_lo = -12.0;   // integration range for path interiors, log scale
  double log_hi = 12.0;    // upper truncation for all coordinates
  int panels_per_unit = 4; // composite Gauss-Legendre resolution
  long max_nodes = 200000; // budget guard
};

// Numeric extremal correlation: integrates the forest density over
// {y_i > 1, y_j > 1}, marginalizing the path interior coordinates.
double chi_quadrature(const HRForestSpec& spec, int i, int j,
                      const ChiQuadratureOptions& opts = {});

}  // namespace lgm

#endif  // LGM_HR_HPP_
