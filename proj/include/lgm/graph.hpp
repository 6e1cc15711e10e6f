#ifndef LGM_GRAPH_HPP_
#define LGM_GRAPH_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "lgm/vertex_set.hpp"

namespace lgm {

// Undirected graph on vertices 0..d-1, no self-loops.
class UndirectedGraph {
 public:
  explicit UndirectedGraph(int d);

  int size() const { return d_; }
  void add_edge(int u, int v);
  bool has_edge(int u, int v) const { return adj_[u].contains(v); }
  VertexSet neighbors(int v) const { return adj_[v]; }
  std::vector<std::pair<int, int>> edges() const;
  int edge_count() const;

 private:
  int d_;
  std::vector<VertexSet> adj_;
};

// Directed acyclic graph; acyclicity is verified whenever a topological
// order is requested.
class Dag {
 public:
  explicit Dag(int d);

  int size() const { return d_; }
  void add_arc(int parent, int child);
  bool has_arc(int parent, int child) const { return children_[parent].contains(child); }
  VertexSet parents(int v) const { return parents_[v]; }
  VertexSet children(int v) const { return children_[v]; }
  std::vector<std::pair<int, int>> arcs() const;

  std::vector<int> topological_order() const;  // throws CyclicGraph
  VertexSet ancestral_set(VertexSet w) const;  // w plus all ancestors
  VertexSet descendants(int v) const;          // strict descendants
  UndirectedGraph skeleton() const;

 private:
  int d_;
  std::vector<VertexSet> parents_;
  std::vector<VertexSet> children_;
};

// Clique ordering with the running intersection property.  The separator
// multiset is ordering-independent and may contain the empty set (with
// multiplicity) when the graph is disconnected.
struct CliqueOrdering {
  std::vector<VertexSet> cliques;
  std::vector<VertexSet> separators;  // one per clique after the first
};

// True iff every path from a to b intersects c (c may be empty).
bool separates(const UndirectedGraph& g, VertexSet a, VertexSet b, VertexSet c);

// Maximum-cardinality search with smallest-id tie-breaking; throws
// NotDecomposable if the graph is not chordal.
CliqueOrdering clique_ordering(const UndirectedGraph& g);

// Moral graph of the ancestral set of w: restrict to an(w), marry co-parents,
// drop directions.
UndirectedGraph moral_ancestral(const Dag& d, VertexSet w);

// Directed separation: separation of a from b by s in the moral graph of the
// ancestral set of a|b|s.
bool dg_separated(const Dag& d, VertexSet a, VertexSet b, VertexSet s);

// Number of non-empty vertex subsets inducing a connected subgraph.
// Guarded enumeration (d <= 24).
std::int64_t count_connected_subgraphs(const UndirectedGraph& g);

struct SeparationTriple {
  VertexSet a, b, c;
};

// All partitions (a,b,c) of V with non-empty a,b and c separating a from b,
// listed once per unordered {a,b} pair (min(a) < min(b)).  Guarded (d <= 12).
std::vector<SeparationTriple> separation_triples(const UndirectedGraph& g);

}  // namespace lgm

#endif  // LGM_GRAPH_HPP_
