#include "lgm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lgm/errors.hpp"
#include "lgm/special.hpp"

namespace lgm {

namespace {

constexpr double kZeroSideAbs = 1e-12;
constexpr double kMarginAgreeTol = 1e-9;

// Relative defect between the two sides of a factorization identity; exact
// constructions must agree to rounding, so a zero side forces the other side
// below an absolute threshold.
double factorization_defect(double lhs, double rhs) {
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  if (std::min(std::abs(lhs), std::abs(rhs)) == 0.0) return scale <= kZeroSideAbs ? 0.0 : 1.0;
  return std::abs(lhs - rhs) / scale;
}

std::string point_str(const std::vector<AxisGrid>& grids, const GridPoint& p) {
  std::string out = "(";
  for (std::size_t v = 0; v < p.size(); ++v) {
    if (v) out += ", ";
    out += p[v] < 0 ? "0" : std::to_string(grids[v].nodes[static_cast<std::size_t>(p[v])]);
  }
  return out + ")";
}

}  // namespace

AxisGrid::AxisGrid(std::vector<double> nodes_in) : nodes(std::move(nodes_in)) {
  if (nodes.empty()) throw_input("EmptyGrid", "axis grid needs at least one node");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!(nodes[i] > 0.0) || !std::isfinite(nodes[i]))
      throw_input("DomainError", "grid nodes must be positive and finite");
    if (i > 0 && !(nodes[i] > nodes[i - 1]))
      throw_input("DomainError", "grid nodes must be strictly increasing");
  }
  weights.resize(nodes.size());
  if (nodes.size() == 1) {
    weights[0] = 1.0;
    return;
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double lo = i == 0 ? nodes[0] : nodes[i - 1];
    double hi = i + 1 == nodes.size() ? nodes.back() : nodes[i + 1];
    weights[i] = 0.5 * (hi - lo);
  }
}

AxisGrid AxisGrid::geometric(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw_input("DomainError", "bad geometric grid parameters");
  std::vector<double> nodes(static_cast<std::size_t>(count));
  double ratio = std::pow(hi / lo, 1.0 / (count - 1));
  double x = lo;
  for (int i = 0; i < count; ++i) {
    nodes[static_cast<std::size_t>(i)] = x;
    x *= ratio;
  }
  nodes.back() = hi;
  return AxisGrid(std::move(nodes));
}

VertexSet point_pattern(const GridPoint& p) {
  VertexSet s;
  for (std::size_t v = 0; v < p.size(); ++v)
    if (p[v] >= 0) s.add(static_cast<int>(v));
  return s;
}

namespace detail {

std::size_t face_index(const std::vector<AxisGrid>& grids, VertexSet face, const GridPoint& p) {
  std::size_t idx = 0;
  for (int v : face) {
    idx = idx * grids[static_cast<std::size_t>(v)].nodes.size() +
          static_cast<std::size_t>(p[static_cast<std::size_t>(v)]);
  }
  return idx;
}

double face_eval(const FaceMap& faces, const std::vector<AxisGrid>& grids, const GridPoint& p,
                 double origin_value) {
  VertexSet pattern = point_pattern(p);
  if (pattern.empty()) return origin_value;
  auto it = faces.find(pattern.bits());
  if (it == faces.end()) return 0.0;
  return it->second[face_index(grids, pattern, p)];
}

}  // namespace detail

GridMeasure::GridMeasure(std::vector<AxisGrid> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 24) throw_input("TooLarge", "grid dimension must be in 1..24");
}

void GridMeasure::set_face(VertexSet face, std::vector<double> values) {
  if (face.empty()) throw_input("EmptyIndexSet", "the origin face carries no density");
  if (!face.subset_of(VertexSet::full(dimension()))) throw_input("UnknownVertex", "face outside dimension");
  std::size_t expected = 1;
  for (int v : face) expected *= axes_[static_cast<std::size_t>(v)].nodes.size();
  if (values.size() != expected) throw_input("DimensionMismatch", "face table has wrong size");
  for (double x : values)
    if (!(x >= 0.0) || !std::isfinite(x)) throw_input("DomainError", "densities must be non-negative and finite");
  faces_[face.bits()] = std::move(values);
}

double GridMeasure::value_at(const GridPoint& p) const {
  return detail::face_eval(faces_, axes_, p, 0.0);
}

ModifiedDensity::ModifiedDensity(std::vector<int> axes, std::vector<AxisGrid> grids)
    : axes_(std::move(axes)), grids_(std::move(grids)) {
  if (axes_.size() != grids_.size()) throw_input("DimensionMismatch", "axes and grids differ in size");
}

void ModifiedDensity::set_face(VertexSet local_face, std::vector<double> values) {
  if (local_face.empty()) throw_input("EmptyIndexSet", "the origin value is fixed to 1");
  std::size_t expected = 1;
  for (int v : local_face) expected *= grids_[static_cast<std::size_t>(v)].nodes.size();
  if (values.size() != expected) throw_input("DimensionMismatch", "face table has wrong size");
  faces_[local_face.bits()] = std::move(values);
}

double ModifiedDensity::value_at(const GridPoint& local) const {
  return detail::face_eval(faces_, grids_, local, 1.0);
}

double ModifiedDensity::value_at_global(const GridPoint& global) const {
  GridPoint local(axes_.size());
  for (std::size_t k = 0; k < axes_.size(); ++k) local[k] = global[static_cast<std::size_t>(axes_[k])];
  return value_at(local);
}

void for_each_grid_point(const std::vector<AxisGrid>& grids,
                         const std::function<void(const GridPoint&)>& fn) {
  const std::size_t d = grids.size();
  GridPoint p(d, -1);
  for (;;) {
    fn(p);
    std::size_t v = 0;
    while (v < d) {
      if (p[v] + 1 < static_cast<int>(grids[v].nodes.size())) {
        ++p[v];
        break;
      }
      p[v] = -1;
      ++v;
    }
    if (v == d) return;
  }
}

ModifiedDensity marginal_density(const GridMeasure& m, VertexSet dset) {
  if (dset.empty()) throw_input("EmptyIndexSet", "marginal requires a non-empty index set");
  if (!dset.subset_of(VertexSet::full(m.dimension()))) throw_input("UnknownVertex", "index outside measure");

  std::vector<int> axes = dset.to_vector();
  std::vector<AxisGrid> grids;
  grids.reserve(axes.size());
  for (int v : axes) grids.push_back(m.axis(v));
  ModifiedDensity out(axes, grids);

  // Local position of each original axis inside dset.
  std::vector<int> local_of(static_cast<std::size_t>(m.dimension()), -1);
  for (std::size_t k = 0; k < axes.size(); ++k) local_of[static_cast<std::size_t>(axes[k])] = static_cast<int>(k);

  std::map<std::uint32_t, std::vector<double>> tables;
  for (const auto& [face_bits, values] : m.faces()) {
    VertexSet face(face_bits);
    VertexSet kept = face & dset;
    if (kept.empty()) continue;  // projects onto the origin of the subgrid
    VertexSet integrated = face.minus(dset);

    VertexSet local_face;
    for (int v : kept) local_face.add(local_of[static_cast<std::size_t>(v)]);
    auto& table = tables[local_face.bits()];
    if (table.empty()) {
      std::size_t size = 1;
      for (int v : kept) size *= m.axis(v).nodes.size();
      table.assign(size, 0.0);
    }

    // Walk the face table; accumulate quadrature weight over integrated axes.
    std::vector<int> face_axes = face.to_vector();
    std::vector<std::size_t> pos_in_face(static_cast<std::size_t>(m.dimension()), 0);
    for (std::size_t k = 0; k < face_axes.size(); ++k) pos_in_face[static_cast<std::size_t>(face_axes[k])] = k;
    std::vector<int> idx(face_axes.size(), 0);
    for (;;) {
      double w = 1.0;
      std::size_t value_index = 0;
      for (std::size_t k = 0; k < face_axes.size(); ++k) {
        int v = face_axes[k];
        value_index = value_index * m.axis(v).nodes.size() + static_cast<std::size_t>(idx[k]);
        if (integrated.contains(v)) w *= m.axis(v).weights[static_cast<std::size_t>(idx[k])];
      }
      std::size_t target = 0;
      for (int v : kept)
        target = target * m.axis(v).nodes.size() +
                 static_cast<std::size_t>(idx[pos_in_face[static_cast<std::size_t>(v)]]);
      table[target] += values[value_index] * w;

      std::size_t k = face_axes.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (idx[k] + 1 < m.axis(face_axes[k]).size()) {
          ++idx[k];
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
  }
  for (auto& [bits, table] : tables) out.set_face(VertexSet(bits), std::move(table));
  return out;
}

CIReport ci_check(const GridMeasure& m, VertexSet a, VertexSet b, VertexSet c, double tol) {
  if (!(tol > 0.0)) throw_input("ToleranceNotPositive", "tolerance must be positive");
  if (!pairwise_disjoint(a, b, c)) throw_input("OverlappingSets", "a, b, c must be pairwise disjoint");
  if (a.empty() || b.empty()) throw_input("EmptyIndexSet", "a and b must be non-empty");
  if (!((a | b | c) == VertexSet::full(m.dimension())))
    throw_input("NotAPartition", "(a, b, c) must partition the index set; marginalize first");

  ModifiedDensity lam = marginal_density(m, VertexSet::full(m.dimension()));
  ModifiedDensity lam_c = c.empty() ? ModifiedDensity::scalar_one() : marginal_density(m, c);
  ModifiedDensity lam_ac = marginal_density(m, a | c);
  ModifiedDensity lam_bc = marginal_density(m, b | c);

  CIReport report;
  report.a = a;
  report.b = b;
  report.c = c;
  report.holds = true;

  GridPoint worst;
  for_each_grid_point(m.axes(), [&](const GridPoint& p) {
    VertexSet pattern = point_pattern(p);
    if (pattern.intersects(a) && pattern.intersects(b) && !pattern.intersects(c)) return;
    double lhs = lam.value_at_global(p) * lam_c.value_at_global(p);
    double rhs = lam_ac.value_at_global(p) * lam_bc.value_at_global(p);
    double defect = factorization_defect(lhs, rhs);
    if (defect > report.max_defect) {
      report.max_defect = defect;
      worst = p;
    }
  });
  if (report.max_defect > tol) {
    report.holds = false;
    CIWitness w;
    w.axes = VertexSet::full(m.dimension()).to_vector();
    w.defect = report.max_defect;
    w.detail = "worst factorization defect at " + point_str(m.axes(), worst);
    report.witness = std::move(w);
  }
  return report;
}

MarkovAudit hc_check(const GridMeasure& m, const UndirectedGraph& g, double tol) {
  if (!(tol > 0.0)) throw_input("ToleranceNotPositive", "tolerance must be positive");
  if (g.size() != m.dimension()) throw_input("DimensionMismatch", "graph and measure index sets differ");
  CliqueOrdering ord = clique_ordering(g);  // throws NotDecomposable

  ModifiedDensity lam = marginal_density(m, VertexSet::full(m.dimension()));
  std::vector<ModifiedDensity> clique_d, sep_d;
  for (VertexSet cq : ord.cliques) clique_d.push_back(marginal_density(m, cq));
  for (VertexSet s : ord.separators)
    sep_d.push_back(s.empty() ? ModifiedDensity::scalar_one() : marginal_density(m, s));

  // Component labels of g restricted to V minus S, per distinct separator.
  std::vector<VertexSet> distinct_seps;
  for (VertexSet s : ord.separators)
    if (std::find(distinct_seps.begin(), distinct_seps.end(), s) == distinct_seps.end())
      distinct_seps.push_back(s);
  const int d = g.size();
  std::vector<std::vector<int>> comp_of(distinct_seps.size(), std::vector<int>(static_cast<std::size_t>(d), -1));
  for (std::size_t si = 0; si < distinct_seps.size(); ++si) {
    VertexSet s = distinct_seps[si];
    int comp = 0;
    for (int v = 0; v < d; ++v) {
      if (s.contains(v) || comp_of[si][static_cast<std::size_t>(v)] >= 0) continue;
      VertexSet frontier = VertexSet::single(v);
      while (!frontier.empty()) {
        VertexSet next;
        for (int u : frontier) {
          comp_of[si][static_cast<std::size_t>(u)] = comp;
          next = next | g.neighbors(u);
        }
        next = next.minus(s);
        VertexSet fresh;
        for (int u : next)
          if (comp_of[si][static_cast<std::size_t>(u)] < 0) fresh.add(u);
        frontier = fresh;
      }
      ++comp;
    }
  }

  auto in_forbidden_zone = [&](VertexSet pattern) {
    for (std::size_t si = 0; si < distinct_seps.size(); ++si) {
      if (pattern.intersects(distinct_seps[si])) continue;
      int seen = -1;
      for (int v : pattern) {
        int cv = comp_of[si][static_cast<std::size_t>(v)];
        if (seen < 0) {
          seen = cv;
        } else if (cv != seen) {
          return true;  // two pattern vertices separated by this separator
        }
      }
    }
    return false;
  };

  double max_defect = 0.0, max_zone_mass = 0.0;
  GridPoint worst_fact, worst_zone;
  for_each_grid_point(m.axes(), [&](const GridPoint& p) {
    VertexSet pattern = point_pattern(p);
    if (in_forbidden_zone(pattern)) {
      double v = std::abs(m.value_at(p));
      if (v > max_zone_mass) {
        max_zone_mass = v;
        worst_zone = p;
      }
      return;
    }
    double lhs = lam.value_at_global(p);
    for (const auto& sd : sep_d) lhs *= sd.value_at_global(p);
    double rhs = 1.0;
    for (const auto& cd : clique_d) rhs *= cd.value_at_global(p);
    double defect = factorization_defect(lhs, rhs);
    if (defect > max_defect) {
      max_defect = defect;
      worst_fact = p;
    }
  });

  MarkovAudit audit;
  audit.record({"clique/separator factorization outside Z(G)", max_defect <= tol, max_defect,
                max_defect <= tol ? "" : "worst defect at " + point_str(m.axes(), worst_fact)});
  audit.record({"zero density on Z(G)", max_zone_mass <= kZeroSideAbs, max_zone_mass,
                max_zone_mass <= kZeroSideAbs ? "" : "mass at " + point_str(m.axes(), worst_zone)});
  return audit;
}

EdgeBlock make_edge_block(int i, int j, const AxisGrid& gi, const AxisGrid& gj, double p,
                          const std::function<double(double, double)>& kappa,
                          const std::function<double(double)>& m, double margin_tol) {
  if (!(p >= 0.0 && p <= 1.0)) throw_input("DomainError", "mixture probability must lie in [0, 1]");
  const double q = 1.0 - p;

  // Margin validation: wide log-scale quadrature of kappa against m, decoupled
  // from the (possibly coarse) measure grid.
  for (int side = 0; side < 2; ++side) {
    const AxisGrid& own = side == 0 ? gi : gj;
    for (double y : own.nodes) {
      double integral = integrate(
          [&](double u) {
            double z = std::exp(u);
            return (side == 0 ? kappa(y, z) : kappa(z, y)) * z;
          },
          std::log(y) - 15.0, std::log(y) + 15.0, 0.25);
      double target = m(y);
      if (std::abs(integral - target) > margin_tol * std::max(std::abs(target), 1e-300))
        throw_input("MarginMismatch", "kappa margin deviates from m beyond tolerance");
    }
  }

  int lo = std::min(i, j), hi = std::max(i, j);
  const AxisGrid& glo = lo == i ? gi : gj;
  const AxisGrid& ghi = lo == i ? gj : gi;
  ModifiedDensity density({lo, hi}, {glo, ghi});

  std::vector<double> axis_lo(glo.nodes.size()), axis_hi(ghi.nodes.size());
  for (std::size_t k = 0; k < glo.nodes.size(); ++k) axis_lo[k] = q * m(glo.nodes[k]);
  for (std::size_t k = 0; k < ghi.nodes.size(); ++k) axis_hi[k] = q * m(ghi.nodes[k]);
  density.set_face(VertexSet::of({0}), axis_lo);
  density.set_face(VertexSet::of({1}), axis_hi);

  std::vector<double> joint(glo.nodes.size() * ghi.nodes.size());
  for (std::size_t ki = 0; ki < glo.nodes.size(); ++ki)
    for (std::size_t kj = 0; kj < ghi.nodes.size(); ++kj) {
      double ylo = glo.nodes[ki], yhi = ghi.nodes[kj];
      double val = lo == i ? kappa(ylo, yhi) : kappa(yhi, ylo);
      joint[ki * ghi.nodes.size() + kj] = p * val;
    }
  density.set_face(VertexSet::of({0, 1}), joint);

  EdgeBlock block;
  block.i = lo;
  block.j = hi;
  block.density = std::move(density);
  block.margin_i.resize(glo.nodes.size());
  block.margin_j.resize(ghi.nodes.size());
  for (std::size_t k = 0; k < glo.nodes.size(); ++k) block.margin_i[k] = m(glo.nodes[k]);
  for (std::size_t k = 0; k < ghi.nodes.size(); ++k) block.margin_j[k] = m(ghi.nodes[k]);
  return block;
}

GridMeasure synthesize_forest(const UndirectedGraph& g, const std::vector<EdgeBlock>& blocks) {
  const int d = g.size();

  // Forest check via union-find.
  std::vector<int> root(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) root[static_cast<std::size_t>(v)] = v;
  std::function<int(int)> find = [&](int v) {
    while (root[static_cast<std::size_t>(v)] != v) v = root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])];
    return v;
  };
  for (auto [u, v] : g.edges()) {
    int ru = find(u), rv = find(v);
    if (ru == rv) throw_input("NotForest", "the graph contains a cycle");
    root[static_cast<std::size_t>(ru)] = rv;
  }

  // One block per edge, indexed by the edge.
  std::vector<const EdgeBlock*> block_of_edge;
  auto edges = g.edges();
  block_of_edge.assign(edges.size(), nullptr);
  for (const auto& b : blocks) {
    int lo = std::min(b.i, b.j), hi = std::max(b.i, b.j);
    bool matched = false;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (edges[e].first == lo && edges[e].second == hi) {
        if (block_of_edge[e]) throw_input("DimensionMismatch", "duplicate block for an edge");
        block_of_edge[e] = &b;
        matched = true;
      }
    }
    if (!matched) throw_input("UnknownVertex", "block does not correspond to a forest edge");
  }
  for (std::size_t e = 0; e < edges.size(); ++e)
    if (!block_of_edge[e]) throw_input("DimensionMismatch", "missing block for an edge");

  // Per-vertex grid and margin, consistency-checked across incident blocks.
  std::vector<const AxisGrid*> grid_of(static_cast<std::size_t>(d), nullptr);
  std::vector<const std::vector<double>*> margin_of(static_cast<std::size_t>(d), nullptr);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const EdgeBlock* b = block_of_edge[e];
    const AxisGrid* grids[2] = {&b->density.grids()[0], &b->density.grids()[1]};
    const std::vector<double>* margins[2] = {&b->margin_i, &b->margin_j};
    int verts[2] = {b->i, b->j};
    for (int s = 0; s < 2; ++s) {
      int v = verts[s];
      if (!grid_of[static_cast<std::size_t>(v)]) {
        grid_of[static_cast<std::size_t>(v)] = grids[s];
        margin_of[static_cast<std::size_t>(v)] = margins[s];
        continue;
      }
      if (grid_of[static_cast<std::size_t>(v)]->nodes != grids[s]->nodes)
        throw_input("InconsistentMargins", "incident blocks use different grids at a shared vertex");
      const auto& have = *margin_of[static_cast<std::size_t>(v)];
      const auto& incoming = *margins[s];
      for (std::size_t k = 0; k < have.size(); ++k) {
        if (std::abs(have[k] - incoming[k]) > kMarginAgreeTol * std::max(1.0, std::abs(have[k])))
          throw_input("InconsistentMargins", "edge margins disagree at a shared vertex");
      }
    }
  }
  for (int v = 0; v < d; ++v)
    if (!grid_of[static_cast<std::size_t>(v)])
      throw_input("IsolatedVertex", "every vertex needs an incident edge block");

  std::vector<AxisGrid> axes;
  axes.reserve(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) axes.push_back(*grid_of[static_cast<std::size_t>(v)]);
  GridMeasure out(axes);

  // Pattern admissibility for a forest: the induced subgraph is connected.
  auto connected = [&](VertexSet pattern) {
    VertexSet reached = VertexSet::single(pattern.min());
    VertexSet frontier = reached;
    while (!frontier.empty()) {
      VertexSet next;
      for (int v : frontier) next = next | g.neighbors(v);
      next = (next & pattern).minus(reached);
      reached = reached | next;
      frontier = next;
    }
    return reached == pattern;
  };

  std::vector<int> degree(static_cast<std::size_t>(d), 0);
  for (auto [u, v] : edges) {
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }

  const std::uint32_t full = VertexSet::full(d).bits();
  for (std::uint32_t bits = 1; bits <= full; ++bits) {
    VertexSet pattern(bits);
    if (!connected(pattern)) continue;

    std::vector<int> paxes = pattern.to_vector();
    std::size_t size = 1;
    for (int v : paxes) size *= axes[static_cast<std::size_t>(v)].nodes.size();
    std::vector<double> table(size);

    GridPoint global(static_cast<std::size_t>(d), -1);
    // Odometer over the pattern axes.
    std::vector<int> idx(paxes.size(), 0);
    for (;;) {
      for (std::size_t k = 0; k < paxes.size(); ++k) global[static_cast<std::size_t>(paxes[k])] = idx[k];
      double value = 1.0;
      for (std::size_t e = 0; e < edges.size(); ++e) value *= block_of_edge[e]->density.value_at_global(global);
      for (int v : pattern) {
        int extra = degree[static_cast<std::size_t>(v)] - 1;
        if (extra <= 0) continue;
        double mv = (*margin_of[static_cast<std::size_t>(v)])[static_cast<std::size_t>(global[static_cast<std::size_t>(v)])];
        value /= std::pow(mv, extra);
      }
      std::size_t target = 0;
      for (std::size_t k = 0; k < paxes.size(); ++k)
        target = target * axes[static_cast<std::size_t>(paxes[k])].nodes.size() + static_cast<std::size_t>(idx[k]);
      table[target] = value;

      std::size_t k = paxes.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (idx[k] + 1 < static_cast<int>(axes[static_cast<std::size_t>(paxes[k])].nodes.size())) {
          ++idx[k];
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
    for (std::size_t k = 0; k < paxes.size(); ++k) global[static_cast<std::size_t>(paxes[k])] = -1;
    out.set_face(pattern, std::move(table));
  }
  return out;
}

GridMeasure generic_trivariate(double p12, double p23,
                               const std::function<double(double, double)>& kappa12,
                               const std::function<double(double, double)>& kappa23,
                               const std::function<double(double)>& m,
                               const std::vector<AxisGrid>& grids, double margin_tol) {
  if (grids.size() != 3) throw_input("DimensionMismatch", "the construction is trivariate");
  // Built only for the margin validation these constructors perform.
  make_edge_block(0, 1, grids[0], grids[1], p12, kappa12, m, margin_tol);
  make_edge_block(1, 2, grids[1], grids[2], p23, kappa23, m, margin_tol);

  const double q12 = 1.0 - p12, q23 = 1.0 - p23;
  GridMeasure out(grids);
  const auto& g1 = grids[0];
  const auto& g2 = grids[1];
  const auto& g3 = grids[2];

  auto univariate = [&](const AxisGrid& g, double factor) {
    std::vector<double> t(g.nodes.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = factor * m(g.nodes[k]);
    return t;
  };
  out.set_face(VertexSet::of({0}), univariate(g1, q12));
  out.set_face(VertexSet::of({1}), univariate(g2, q12 * q23));
  out.set_face(VertexSet::of({2}), univariate(g3, q23));

  std::vector<double> f12(g1.nodes.size() * g2.nodes.size());
  for (std::size_t a = 0; a < g1.nodes.size(); ++a)
    for (std::size_t b = 0; b < g2.nodes.size(); ++b)
      f12[a * g2.nodes.size() + b] = p12 * q23 * kappa12(g1.nodes[a], g2.nodes[b]);
  out.set_face(VertexSet::of({0, 1}), f12);

  std::vector<double> f23(g2.nodes.size() * g3.nodes.size());
  for (std::size_t b = 0; b < g2.nodes.size(); ++b)
    for (std::size_t c = 0; c < g3.nodes.size(); ++c)
      f23[b * g3.nodes.size() + c] = q12 * p23 * kappa23(g2.nodes[b], g3.nodes[c]);
  out.set_face(VertexSet::of({1, 2}), f23);

  // Face {1,3} carries no mass: it is the one sub-face excluded by the
  // conditional independence of 1 and 3 given 2.

  std::vector<double> f123(g1.nodes.size() * g2.nodes.size() * g3.nodes.size());
  for (std::size_t a = 0; a < g1.nodes.size(); ++a)
    for (std::size_t b = 0; b < g2.nodes.size(); ++b)
      for (std::size_t c = 0; c < g3.nodes.size(); ++c)
        f123[(a * g2.nodes.size() + b) * g3.nodes.size() + c] =
            p12 * p23 * kappa12(g1.nodes[a], g2.nodes[b]) * kappa23(g2.nodes[b], g3.nodes[c]) /
            m(g2.nodes[b]);
  out.set_face(VertexSet::of({0, 1, 2}), f123);
  return out;
}

double total_mass_tail(const GridMeasure& m, double eps) {
  double min_node = std::numeric_limits<double>::infinity();
  for (int v = 0; v < m.dimension(); ++v) min_node = std::min(min_node, m.axis(v).nodes.front());
  if (eps < min_node) throw_input("EpsBelowGrid", "eps must not undercut the grid");

  double total = 0.0;
  for (const auto& [face_bits, values] : m.faces()) {
    VertexSet face(face_bits);
    std::vector<int> faxes = face.to_vector();
    std::vector<int> idx(faxes.size(), 0);
    for (;;) {
      double w = 1.0;
      double maxcoord = 0.0;
      std::size_t flat = 0;
      for (std::size_t k = 0; k < faxes.size(); ++k) {
        const AxisGrid& g = m.axis(faxes[k]);
        w *= g.weights[static_cast<std::size_t>(idx[k])];
        maxcoord = std::max(maxcoord, g.nodes[static_cast<std::size_t>(idx[k])]);
        flat = flat * g.nodes.size() + static_cast<std::size_t>(idx[k]);
      }
      if (maxcoord > eps) total += values[flat] * w;

      std::size_t k = faxes.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (idx[k] + 1 < m.axis(faxes[k]).size()) {
          ++idx[k];
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
  }
  return total;
}

}  // namespace lgm
