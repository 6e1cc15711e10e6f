#include "lgm/hr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgm/errors.hpp"
#include "lgm/special.hpp"

namespace lgm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double pareto_margin(double y) { return 1.0 / (y * y); }

}  // namespace

double hr_density(double gamma, double y1, double y2) {
  if (!(gamma > 0.0)) throw_input("DomainError", "gamma must be positive");
  if (!(y1 > 0.0) || !(y2 > 0.0)) throw_input("DomainError", "hr_density needs positive arguments");
  double z = std::log(y2 / y1) + 0.5 * gamma;
  return std::exp(-0.5 * z * z / gamma) / (std::sqrt(kTwoPi * gamma) * y1 * y1 * y2);
}

double hr_exponent_biv(double gamma, double x1, double x2) {
  if (!(gamma > 0.0)) throw_input("DomainError", "gamma must be positive");
  if (!(x1 > 0.0) || !(x2 > 0.0)) throw_input("DomainError", "hr_exponent_biv needs positive arguments");
  double sg = std::sqrt(gamma);
  return Phi(0.5 * sg + std::log(x2 / x1) / sg) / x1 + Phi(0.5 * sg + std::log(x1 / x2) / sg) / x2;
}

UndirectedGraph HRForestSpec::graph() const {
  UndirectedGraph g(d);
  for (const auto& e : edges) g.add_edge(e.i, e.j);
  // Forest: every component has one more vertex than edges.
  std::vector<int> root(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) root[static_cast<std::size_t>(v)] = v;
  auto find = [&](int v) {
    while (root[static_cast<std::size_t>(v)] != v)
      v = root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])];
    return v;
  };
  for (const auto& e : edges) {
    int ru = find(e.i), rv = find(e.j);
    if (ru == rv) throw_input("NotForest", "the edge set contains a cycle");
    root[static_cast<std::size_t>(ru)] = rv;
  }
  return g;
}

void HRForestSpec::validate() const {
  for (const auto& e : edges) {
    if (!(e.gamma > 0.0)) throw_input("DomainError", "edge gamma must be positive");
    if (!(e.p >= 0.0 && e.p <= 1.0)) throw_input("DomainError", "edge p must lie in [0, 1]");
  }
  graph();
}

namespace {

// Unique forest path between i and j as an edge index sequence, empty when
// i == j, or nullopt-like (found=false) across components.
struct PathResult {
  bool found = false;
  std::vector<int> vertices;  // i ... j inclusive
  std::vector<int> edge_idx;  // aligned with consecutive vertex pairs
};

PathResult forest_path(const HRForestSpec& spec, int i, int j) {
  PathResult out;
  if (i == j) {
    out.found = true;
    out.vertices = {i};
    return out;
  }
  std::vector<std::vector<std::pair<int, int>>> adj(static_cast<std::size_t>(spec.d));
  for (std::size_t e = 0; e < spec.edges.size(); ++e) {
    adj[static_cast<std::size_t>(spec.edges[e].i)].push_back({spec.edges[e].j, static_cast<int>(e)});
    adj[static_cast<std::size_t>(spec.edges[e].j)].push_back({spec.edges[e].i, static_cast<int>(e)});
  }
  std::vector<int> prev(static_cast<std::size_t>(spec.d), -1), via(static_cast<std::size_t>(spec.d), -1);
  std::vector<int> stack = {i};
  prev[static_cast<std::size_t>(i)] = i;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (auto [u, e] : adj[static_cast<std::size_t>(v)]) {
      if (prev[static_cast<std::size_t>(u)] >= 0) continue;
      prev[static_cast<std::size_t>(u)] = v;
      via[static_cast<std::size_t>(u)] = e;
      stack.push_back(u);
    }
  }
  if (prev[static_cast<std::size_t>(j)] < 0) return out;
  out.found = true;
  for (int v = j; v != i; v = prev[static_cast<std::size_t>(v)]) {
    out.vertices.push_back(v);
    out.edge_idx.push_back(via[static_cast<std::size_t>(v)]);
  }
  out.vertices.push_back(i);
  std::reverse(out.vertices.begin(), out.vertices.end());
  std::reverse(out.edge_idx.begin(), out.edge_idx.end());
  return out;
}

}  // namespace

std::vector<std::vector<double>> tree_complete_gamma(const HRForestSpec& spec) {
  spec.validate();
  const int d = spec.d;
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d),
                                       std::vector<double>(static_cast<std::size_t>(d),
                                                           std::numeric_limits<double>::quiet_NaN()));
  for (int i = 0; i < d; ++i) {
    out[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.0;
    for (int j = i + 1; j < d; ++j) {
      PathResult path = forest_path(spec, i, j);
      if (!path.found) continue;
      double sum = 0.0;
      for (int e : path.edge_idx) sum += spec.edges[static_cast<std::size_t>(e)].gamma;
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = sum;
      out[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = sum;
    }
  }
  return out;
}

std::vector<std::vector<double>> chi_forest(const HRForestSpec& spec) {
  spec.validate();
  const int d = spec.d;
  std::vector<std::vector<double>> out(static_cast<std::size_t>(d),
                                       std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int i = 0; i < d; ++i) {
    out[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    for (int j = i + 1; j < d; ++j) {
      PathResult path = forest_path(spec, i, j);
      if (!path.found) continue;
      double gamma = 0.0, pprod = 1.0;
      for (int e : path.edge_idx) {
        gamma += spec.edges[static_cast<std::size_t>(e)].gamma;
        pprod *= spec.edges[static_cast<std::size_t>(e)].p;
      }
      double chi = (2.0 - 2.0 * Phi(0.5 * std::sqrt(gamma))) * pprod;
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = chi;
      out[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = chi;
    }
  }
  return out;
}

GridMeasure build_grid(const HRForestSpec& spec, const std::vector<AxisGrid>& grids,
                       double margin_tol) {
  spec.validate();
  if (static_cast<int>(grids.size()) != spec.d) throw_input("DimensionMismatch", "one grid per vertex required");
  UndirectedGraph g = spec.graph();
  std::vector<EdgeBlock> blocks;
  for (const auto& e : spec.edges) {
    double gamma = e.gamma;
    blocks.push_back(make_edge_block(
        e.i, e.j, grids[static_cast<std::size_t>(e.i)], grids[static_cast<std::size_t>(e.j)], e.p,
        [gamma](double a, double b) { return hr_density(gamma, a, b); }, pareto_margin,
        margin_tol));
  }
  return synthesize_forest(g, blocks);
}

double chi_quadrature(const HRForestSpec& spec, int i, int j, const ChiQuadratureOptions& opts) {
  spec.validate();
  if (i < 0 || i >= spec.d || j < 0 || j >= spec.d) throw_input("UnknownVertex", "index outside the forest");
  if (i == j) return 1.0;
  PathResult path = forest_path(spec, i, j);
  if (!path.found) return 0.0;  // disconnected components carry no joint mass
  double pprod = 1.0;
  for (int e : path.edge_idx) pprod *= spec.edges[static_cast<std::size_t>(e)].p;
  if (pprod == 0.0) return 0.0;

  // Composite Gauss-Legendre nodes in log scale shared by all coordinates.
  const int panels = std::max(4, static_cast<int>((opts.log_hi - opts.log_lo) * opts.panels_per_unit));
  const long n_nodes = 16L * panels;
  if (n_nodes * static_cast<long>(path.vertices.size()) > opts.max_nodes)
    throw_resource("QuadratureBudgetExceeded", "path quadrature exceeds the node budget");

  std::vector<double> u_nodes, u_weights;
  {
    static const double kNode[8] = {0.0950125098376374401853193, 0.2816035507792589132304605,
                                    0.4580167776572273863424194, 0.6178762444026437484466718,
                                    0.7554044083550030338951012, 0.8656312023878317438804679,
                                    0.9445750230732325760779884, 0.9894009349916499325961542};
    static const double kWeight[8] = {0.1894506104550684962853967, 0.1826034150449235888667637,
                                      0.1691565193950025381893121, 0.1495959888165767320815017,
                                      0.1246289712555338720524763, 0.0951585116824927848099251,
                                      0.0622535239386478928628438, 0.0271524594117540948517806};
    double h = (opts.log_hi - opts.log_lo) / panels;
    for (int p = 0; p < panels; ++p) {
      double mid = opts.log_lo + (p + 0.5) * h;
      for (int k = 7; k >= 0; --k) {
        u_nodes.push_back(mid - 0.5 * h * kNode[k]);
        u_weights.push_back(0.5 * h * kWeight[k]);
      }
      for (int k = 0; k < 8; ++k) {
        u_nodes.push_back(mid + 0.5 * h * kNode[k]);
        u_weights.push_back(0.5 * h * kWeight[k]);
      }
    }
  }
  const std::size_t n = u_nodes.size();
  std::vector<double> y(n), dy(n);  // y = e^u, dy = y du (log substitution)
  for (std::size_t k = 0; k < n; ++k) {
    y[k] = std::exp(u_nodes[k]);
    dy[k] = y[k] * u_weights[k];
  }

  // Sequential marginalization along the path: start at y_i > 1, convolve
  // through the interiors over (0, inf) weighting by y^2 = 1/m(y), finish at
  // y_j > 1.
  auto edge_gamma = [&](std::size_t step) {
    return spec.edges[static_cast<std::size_t>(path.edge_idx[step])].gamma;
  };
  std::vector<double> g(n);
  {
    double gam = edge_gamma(0);
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        if (y[l] <= 1.0) continue;
        acc += dy[l] * hr_density(gam, y[l], y[k]);
      }
      g[k] = acc;
    }
  }
  for (std::size_t step = 1; step < path.edge_idx.size(); ++step) {
    double gam = edge_gamma(step);
    std::vector<double> next(n);
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t l = 0; l < n; ++l) acc += dy[l] * g[l] * y[l] * y[l] * hr_density(gam, y[l], y[k]);
      next[k] = acc;
    }
    g = std::move(next);
  }
  double integral = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (y[k] > 1.0) integral += dy[k] * g[k];
  return pprod * integral;
}

}  // namespace lgm
