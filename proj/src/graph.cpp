#include "lgm/graph.hpp"

#include <algorithm>

#include "lgm/errors.hpp"
#include "lgm/parallel.hpp"

namespace lgm {

namespace {

void check_vertex(int v, int d) {
  if (v < 0 || v >= d) {
    throw_input("UnknownVertex", "vertex " + std::to_string(v + 1) + " outside 1.." + std::to_string(d));
  }
}

void check_dimension(int d) {
  if (d < 0 || d > 32) throw_input("TooLarge", "vertex count must be in 0..32");
}

}  // namespace

UndirectedGraph::UndirectedGraph(int d) : d_(d), adj_(static_cast<std::size_t>(d)) { check_dimension(d); }

void UndirectedGraph::add_edge(int u, int v) {
  check_vertex(u, d_);
  check_vertex(v, d_);
  if (u == v) throw_input("SelfLoop", "self-loop at vertex " + std::to_string(u + 1));
  adj_[u].add(v);
  adj_[v].add(u);
}

std::vector<std::pair<int, int>> UndirectedGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < d_; ++u)
    for (int v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  return out;
}

int UndirectedGraph::edge_count() const { return static_cast<int>(edges().size()); }

Dag::Dag(int d) : d_(d), parents_(static_cast<std::size_t>(d)), children_(static_cast<std::size_t>(d)) {
  check_dimension(d);
}

void Dag::add_arc(int parent, int child) {
  check_vertex(parent, d_);
  check_vertex(child, d_);
  if (parent == child) throw_input("SelfLoop", "self-loop at vertex " + std::to_string(parent + 1));
  children_[parent].add(child);
  parents_[child].add(parent);
}

std::vector<std::pair<int, int>> Dag::arcs() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < d_; ++u)
    for (int v : children_[u]) out.emplace_back(u, v);
  return out;
}

std::vector<int> Dag::topological_order() const {
  std::vector<int> indeg(d_);
  for (int v = 0; v < d_; ++v) indeg[v] = parents_[v].count();
  std::vector<int> order;
  VertexSet ready;
  for (int v = 0; v < d_; ++v)
    if (indeg[v] == 0) ready.add(v);
  while (!ready.empty()) {
    int v = ready.min();
    ready.remove(v);
    order.push_back(v);
    for (int c : children_[v])
      if (--indeg[c] == 0) ready.add(c);
  }
  if (static_cast<int>(order.size()) != d_) throw_input("CyclicGraph", "graph has a directed cycle");
  return order;
}

VertexSet Dag::ancestral_set(VertexSet w) const {
  VertexSet an = w;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int v : an) {
      VertexSet next = an | parents_[v];
      if (!(next == an)) {
        an = next;
        grew = true;
      }
    }
  }
  return an;
}

VertexSet Dag::descendants(int v) const {
  VertexSet de;
  VertexSet frontier = children_[v];
  while (!frontier.empty()) {
    int u = frontier.min();
    frontier.remove(u);
    if (de.contains(u)) continue;
    de.add(u);
    frontier = frontier | children_[u];
  }
  return de;
}

UndirectedGraph Dag::skeleton() const {
  UndirectedGraph g(d_);
  for (auto [u, v] : arcs()) g.add_edge(u, v);
  return g;
}

bool separates(const UndirectedGraph& g, VertexSet a, VertexSet b, VertexSet c) {
  VertexSet all = VertexSet::full(g.size());
  if (!(a | b | c).subset_of(all)) throw_input("UnknownVertex", "set references a vertex outside the graph");
  if (!pairwise_disjoint(a, b, c)) throw_input("OverlappingSets", "a, b, c must be pairwise disjoint");
  if (a.empty() || b.empty()) throw_input("OverlappingSets", "a and b must be non-empty");

  // BFS from a over V \ c.
  VertexSet allowed = all.minus(c);
  VertexSet reached = a & allowed;
  VertexSet frontier = reached;
  while (!frontier.empty()) {
    VertexSet next;
    for (int v : frontier) next = next | g.neighbors(v);
    next = (next & allowed).minus(reached);
    reached = reached | next;
    frontier = next;
  }
  return !reached.intersects(b);
}

CliqueOrdering clique_ordering(const UndirectedGraph& g) {
  const int d = g.size();
  CliqueOrdering out;
  if (d == 0) return out;

  // Maximum-cardinality search, ties broken by smallest vertex id.  The MCS
  // order is a reversed perfect elimination ordering iff the graph is chordal:
  // for each vertex the already-numbered neighbors must form a clique.
  std::vector<int> card(d, 0);
  VertexSet numbered;
  std::vector<int> order;
  std::vector<VertexSet> prior(d);  // numbered neighbors at selection time
  for (int step = 0; step < d; ++step) {
    int best = -1;
    for (int v = 0; v < d; ++v) {
      if (numbered.contains(v)) continue;
      if (best < 0 || card[v] > card[best]) best = v;
    }
    prior[best] = g.neighbors(best) & numbered;
    for (int u : prior[best]) {
      for (int w : prior[best]) {
        if (u < w && !g.has_edge(u, w)) {
          throw_input("NotDecomposable", "graph has a chordless cycle");
        }
      }
    }
    numbered.add(best);
    order.push_back(best);
    for (int u : g.neighbors(best))
      if (!numbered.contains(u)) ++card[u];
  }

  // Blair-Peyton clique detection along the MCS order: a new clique starts
  // whenever the numbered neighbors of the current vertex do not include the
  // clique grown so far; the separator is exactly that neighbor set.
  VertexSet current = VertexSet::single(order[0]);
  for (int i = 1; i < d; ++i) {
    int v = order[i];
    if (current.subset_of(prior[v])) {
      current.add(v);
    } else {
      out.cliques.push_back(current);
      out.separators.push_back(prior[v]);
      current = prior[v];
      current.add(v);
    }
  }
  out.cliques.push_back(current);
  return out;
}

UndirectedGraph moral_ancestral(const Dag& d, VertexSet w) {
  if (!w.subset_of(VertexSet::full(d.size()))) throw_input("UnknownVertex", "set references a vertex outside the graph");
  VertexSet an = d.ancestral_set(w);
  UndirectedGraph g(d.size());
  for (int v : an) {
    VertexSet pa = d.parents(v) & an;
    for (int p : pa) g.add_edge(p, v);
    for (int p : pa)
      for (int q : pa)
        if (p < q) g.add_edge(p, q);
  }
  // Vertices outside an(w) stay isolated; separation queries never touch them
  // because a, b, s are all inside the ancestral set.
  return g;
}

bool dg_separated(const Dag& d, VertexSet a, VertexSet b, VertexSet s) {
  if (!pairwise_disjoint(a, b, s)) throw_input("OverlappingSets", "a, b, s must be pairwise disjoint");
  if (a.empty() || b.empty()) throw_input("OverlappingSets", "a and b must be non-empty");
  UndirectedGraph moral = moral_ancestral(d, a | b | s);
  return separates(moral, a, b, s);
}

std::int64_t count_connected_subgraphs(const UndirectedGraph& g) {
  const int d = g.size();
  if (d > 24) throw_resource("TooLarge", "subgraph enumeration limited to 24 vertices");
  std::vector<std::uint32_t> adj(d);
  for (int v = 0; v < d; ++v) adj[v] = g.neighbors(v).bits();

  const std::int64_t limit = static_cast<std::int64_t>(1) << d;
  auto count_range = [&adj](std::int64_t lo, std::int64_t hi) {
    std::int64_t count = 0;
    for (std::int64_t si = std::max<std::int64_t>(lo, 1); si < hi; ++si) {
      std::uint32_t s = static_cast<std::uint32_t>(si);
      std::uint32_t reached = s & (~s + 1);  // lowest set bit
      std::uint32_t frontier = reached;
      while (frontier) {
        std::uint32_t next = 0;
        for (std::uint32_t b = frontier; b; b &= b - 1) next |= adj[std::countr_zero(b)];
        frontier = next & s & ~reached;
        reached |= frontier;
      }
      if (reached == s) ++count;
    }
    return count;
  };
  return parallel_map_reduce<std::int64_t>(limit, 0, count_range,
                                           [](std::int64_t a, std::int64_t b) { return a + b; });
}

std::vector<SeparationTriple> separation_triples(const UndirectedGraph& g) {
  const int d = g.size();
  if (d > 12) throw_resource("TooLarge", "partition enumeration limited to 12 vertices");
  std::vector<SeparationTriple> out;
  const std::uint32_t full = VertexSet::full(d).bits();
  for (std::uint32_t abits = full; abits; abits = (abits - 1) & full) {
    std::uint32_t rest = full & ~abits;
    for (std::uint32_t bbits = rest; bbits; bbits = (bbits - 1) & rest) {
      VertexSet a(abits), b(bbits);
      if (a.min() > b.min()) continue;  // list unordered pairs once
      VertexSet c(full & ~abits & ~bbits);
      if (separates(g, a, b, c)) out.push_back({a, b, c});
    }
  }
  return out;
}

}  // namespace lgm
