#ifndef LGM_GRID_HPP_
#define LGM_GRID_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lgm/graph.hpp"
#include "lgm/report.hpp"
#include "lgm/vertex_set.hpp"

namespace lgm {

// Positive grid nodes with trapezoid quadrature weights; the zero atom of the
// per-axis measure dx + delta_0 always has weight 1.  Together the axes induce
// a finite product measure on the grid, and every density identity from the
// continuum theory is checked exactly with respect to that discrete measure.
struct AxisGrid {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit AxisGrid(std::vector<double> nodes_in);
  static AxisGrid geometric(double lo, double hi, int count);
  int size() const { return static_cast<int>(nodes.size()); }
};

// A grid point: per axis either -1 (the zero atom) or a node index.
using GridPoint = std::vector<int>;

VertexSet point_pattern(const GridPoint& p);

namespace detail {
using FaceMap = std::map<std::uint32_t, std::vector<double>>;
double face_eval(const FaceMap& faces, const std::vector<AxisGrid>& grids, const GridPoint& p,
                 double origin_value);
std::size_t face_index(const std::vector<AxisGrid>& grids, VertexSet face, const GridPoint& p);
}  // namespace detail

// Density with respect to the product grid measure, stored sparsely per face
// pattern (the origin face is excluded).
class GridMeasure {
 public:
  explicit GridMeasure(std::vector<AxisGrid> axes);

  int dimension() const { return static_cast<int>(axes_.size()); }
  const AxisGrid& axis(int v) const { return axes_[static_cast<std::size_t>(v)]; }
  const std::vector<AxisGrid>& axes() const { return axes_; }

  // Values flattened row-major over the face's axes in increasing order.
  void set_face(VertexSet face, std::vector<double> values);
  const detail::FaceMap& faces() const { return faces_; }

  double value_at(const GridPoint& p) const;  // 0 at the origin

 private:
  std::vector<AxisGrid> axes_;
  detail::FaceMap faces_;
};

// Modified density lambda-bar over an index subset: the marginal density on
// non-zero points of the subgrid, grafted with 1/mu_D({0_D}) = 1 at the
// all-zero point.
class ModifiedDensity {
 public:
  ModifiedDensity(std::vector<int> axes, std::vector<AxisGrid> grids);
  static ModifiedDensity scalar_one() { return ModifiedDensity({}, {}); }

  const std::vector<int>& axes() const { return axes_; }  // original axis ids
  const std::vector<AxisGrid>& grids() const { return grids_; }
  void set_face(VertexSet local_face, std::vector<double> values);
  const detail::FaceMap& faces() const { return faces_; }

  double value_at(const GridPoint& local) const;           // 1 at the origin
  double value_at_global(const GridPoint& global) const;   // extracts its axes

 private:
  std::vector<int> axes_;
  std::vector<AxisGrid> grids_;
  detail::FaceMap faces_;
};

// Quadrature marginal over the complement axes (trapezoid on positive nodes,
// unit weight on the zero atoms).
ModifiedDensity marginal_density(const GridMeasure& m, VertexSet dset);

// Factorization test of Proposition-style conditional independence:
//   lambda-bar(y) * lambda-bar_C(y_C) = lambda-bar_{AC}(y_AC) * lambda-bar_{BC}(y_BC)
// at every grid point outside {y_A != 0, y_B != 0, y_C = 0}.  (a, b, c) must
// partition the index set; marginalize first otherwise.
CIReport ci_check(const GridMeasure& m, VertexSet a, VertexSet b, VertexSet c, double tol);

// Hammersley-Clifford check on a decomposable graph: clique/separator
// factorization of lambda-bar outside Z(g), plus zero density on Z(g).
MarkovAudit hc_check(const GridMeasure& m, const UndirectedGraph& g, double tol);

// Bivariate building block on axes {i, j} plus the exact univariate margin
// tables it was built from.
struct EdgeBlock {
  int i = 0, j = 0;
  ModifiedDensity density = ModifiedDensity::scalar_one();
  std::vector<double> margin_i, margin_j;  // on the respective axis nodes
};

// Mixture block: p * kappa on the positive face, (1-p) * m on each axis.
// Margins of kappa are validated against m by quadrature within margin_tol.
EdgeBlock make_edge_block(int i, int j, const AxisGrid& gi, const AxisGrid& gj, double p,
                          const std::function<double(double, double)>& kappa,
                          const std::function<double(double)>& m, double margin_tol);

// Forest synthesis: density = prod_edges lambda-bar_ij / prod_v lambda-bar_v^(deg v - 1)
// on patterns inducing connected subgraphs, zero elsewhere (= zero on Z(g)).
GridMeasure synthesize_forest(const UndirectedGraph& g, const std::vector<EdgeBlock>& blocks);

// The trivariate chain construction, face by face.
GridMeasure generic_trivariate(double p12, double p23,
                               const std::function<double(double, double)>& kappa12,
                               const std::function<double(double, double)>& kappa23,
                               const std::function<double(double)>& m,
                               const std::vector<AxisGrid>& grids, double margin_tol);

// Quadrature of Lambda over the complement of [0, eps]^d.
double total_mass_tail(const GridMeasure& m, double eps);

// Iterates every grid point (including the origin).
void for_each_grid_point(const std::vector<AxisGrid>& grids,
                         const std::function<void(const GridPoint&)>& fn);

}  // namespace lgm

#endif  // LGM_GRID_HPP_
