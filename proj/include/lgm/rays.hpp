#ifndef LGM_RAYS_HPP_
#define LGM_RAYS_HPP_

#include <vector>

#include "lgm/graph.hpp"
#include "lgm/report.hpp"
#include "lgm/vertex_set.hpp"

namespace lgm {

// Homogeneous measure supported on finitely many rays.  Ray j carries a
// non-negative direction w_j != 0 and an alpha-Pareto radial measure with
// tail eta_j((t, inf)) = c_j * t^{-alpha}.
class RayMeasure {
 public:
  struct Ray {
    std::vector<double> dir;
    double c = 1.0;
  };

  RayMeasure(int d, double alpha, std::vector<Ray> rays);

  int dimension() const { return d_; }
  double alpha() const { return alpha_; }
  const std::vector<Ray>& rays() const { return rays_; }

  // Marginal tail of coordinate i at level u > 0: sum_j c_j (w_ij)^alpha u^-alpha.
  double marginal_tail(int i, double u) const;

  // Lambda(E+ \ [0, x]) for x > 0; drives the max-id cdf exp(-mass).
  double mass_outside_box(const std::vector<double>& x) const;

 private:
  int d_;
  double alpha_;
  std::vector<Ray> rays_;
};

// Innovation distributions for structural models.  The exact ray construction
// requires alpha-Frechet innovations; uniform innovations are supported by the
// sampler only.
struct Innovation {
  enum Kind { kFrechet, kUniform };
  Kind kind = kFrechet;
  double scale = 1.0;  // Frechet scale; ignored for uniform
};

// Recursive max-linear model X_i = max_j beta_ij X_j v beta_ii eps_i on a DAG.
// beta[i][j] is the coefficient of arc j -> i; diagonal entries are the
// innovation loadings.
struct MaxLinearSpec {
  Dag dag;
  std::vector<std::vector<double>> beta;
  double alpha = 1.0;
  std::vector<Innovation> innovations;

  explicit MaxLinearSpec(Dag g);
  void set_arc(int parent, int child, double b);
  void set_diag(int v, double b);
  void validate() const;
};

enum class PathMode { kMax, kSum };

// Path-product matrix: gamma[i][j] aggregates (max or sum) the products of
// beta over all paths j -> i, each path starting with the (j -> j) transition;
// zero when no path exists.
std::vector<std::vector<double>> gamma_matrix(const MaxLinearSpec& spec, PathMode mode);

// Exponent measure of the recursive max-linear model: one ray per innovation,
// direction = column of gamma, c = (Frechet scale)^alpha.
RayMeasure from_maxlinear(const MaxLinearSpec& spec, PathMode mode = PathMode::kMax);

// Exact conditional-independence oracle for ray measures with a common-alpha
// Pareto radial part.
CIReport ci_oracle_rays(const RayMeasure& m, VertexSet a, VertexSet b, VertexSet c);

// Sweeps the directed local (per-vertex) or global (all separations) Markov
// property of the max-linear exponent measure over its DAG.
enum class MarkovLevel { kLocal, kGlobal };
MarkovAudit verify_directed_markov(const MaxLinearSpec& spec, MarkovLevel level);

// Rescales coordinates so every marginal satisfies Lambda(y_i > u) = u^-alpha.
RayMeasure standardize_margins(const RayMeasure& m);

// Extremal correlation chi_ij of a standardized ray measure.
double chi_rays(const RayMeasure& m, int i, int j);

}  // namespace lgm

#endif  // LGM_RAYS_HPP_
