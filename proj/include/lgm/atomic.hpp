#ifndef LGM_ATOMIC_HPP_
#define LGM_ATOMIC_HPP_

#include <vector>

#include "lgm/graph.hpp"
#include "lgm/report.hpp"
#include "lgm/vertex_set.hpp"

namespace lgm {

// Finitely-atomic measure on R^d minus the origin.  Atoms at the origin are
// rejected, duplicate points are merged by weight addition, weights must be
// positive.
class AtomicMeasure {
 public:
  struct Atom {
    std::vector<double> y;
    double w = 0.0;
  };

  AtomicMeasure(int d, std::vector<Atom> atoms);
  static AtomicMeasure empty(int d) { return AtomicMeasure(d, {}); }

  int dimension() const { return d_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;
  VertexSet support_pattern(const Atom& a) const;  // coordinates where a.y != 0

 private:
  int d_;
  std::vector<Atom> atoms_;
};

// Projection of the atoms to the dset coordinates; projections equal to the
// origin of the subspace are dropped, duplicates merged.  The result lives on
// coordinates 0..|dset|-1 in increasing original order.
AtomicMeasure marginal(const AtomicMeasure& m, VertexSet dset);

// Atoms whose complement coordinates are exactly zero, projected to dset.
AtomicMeasure restrict_zero(const AtomicMeasure& m, VertexSet dset);

// Exact conditional-independence oracle over the class of charged product-form
// test sets avoiding the origin.  See the implementation notes for the
// reduction that makes the test class finite.
CIReport ci_oracle(const AtomicMeasure& m, VertexSet a, VertexSet b, VertexSet c);

// Evaluates every instance of the semi-graphoid axioms L1-L4 over disjoint
// subsets of 1..d via ci_oracle; dimension <= 5.
MarkovAudit semigraphoid_audit(const AtomicMeasure& m);

// Index sets D such that some atom is non-zero exactly on D.
std::vector<VertexSet> charged_faces(const AtomicMeasure& m);

struct FaceBoundReport {
  bool holds = true;
  std::vector<VertexSet> disconnected_faces;
};

// True iff every charged face induces a connected subgraph of g.
FaceBoundReport face_bound_check(const AtomicMeasure& m, const UndirectedGraph& g);

}  // namespace lgm

#endif  // LGM_ATOMIC_HPP_
