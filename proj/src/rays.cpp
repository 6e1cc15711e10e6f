#include "lgm/rays.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

constexpr double kPropTol = 1e-9;

bool close(double a, double b, double tol = kPropTol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool vectors_close(const std::vector<double>& a, const std::vector<double>& b,
                   double tol = kPropTol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!close(a[i], b[i], tol)) return false;
  return true;
}

std::vector<double> project(const std::vector<double>& y, const std::vector<int>& axes) {
  std::vector<double> out;
  out.reserve(axes.size());
  for (int v : axes) out.push_back(y[v]);
  return out;
}

bool all_zero(const std::vector<double>& y) {
  for (double v : y)
    if (v != 0.0) return false;
  return true;
}

}  // namespace

RayMeasure::RayMeasure(int d, double alpha, std::vector<Ray> rays) : d_(d), alpha_(alpha) {
  if (d < 1 || d > 32) throw_input("TooLarge", "dimension must be in 1..32");
  if (!(alpha > 0.0)) throw_input("AlphaOutOfRange", "alpha must be positive");
  for (auto& r : rays) {
    if (static_cast<int>(r.dir.size()) != d) throw_input("DimensionMismatch", "ray has wrong dimension");
    if (!(r.c > 0.0)) throw_input("NonPositiveWeight", "ray scale c must be positive");
    bool nonzero = false;
    for (double v : r.dir) {
      if (v < 0.0 || !std::isfinite(v)) throw_input("NegativeDirection", "ray directions must be non-negative");
      if (v != 0.0) nonzero = true;
    }
    if (!nonzero) throw_input("ZeroDirection", "ray directions must be non-zero");
    // Merge rays with identical directions.
    bool merged = false;
    for (auto& existing : rays_) {
      if (vectors_close(existing.dir, r.dir, 1e-12)) {
        existing.c += r.c;
        merged = true;
        break;
      }
    }
    if (!merged) rays_.push_back(std::move(r));
  }
}

double RayMeasure::marginal_tail(int i, double u) const {
  double s = 0.0;
  for (const auto& r : rays_) s += r.c * std::pow(r.dir[static_cast<std::size_t>(i)], alpha_);
  return s * std::pow(u, -alpha_);
}

double RayMeasure::mass_outside_box(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != d_) throw_input("DimensionMismatch", "box has wrong dimension");
  for (double v : x)
    if (!(v > 0.0)) throw_input("DomainError", "box corner must be strictly positive");
  double total = 0.0;
  for (const auto& r : rays_) {
    double a = std::numeric_limits<double>::infinity();
    for (int i = 0; i < d_; ++i) {
      double w = r.dir[static_cast<std::size_t>(i)];
      if (w > 0.0) a = std::min(a, x[static_cast<std::size_t>(i)] / w);
    }
    total += r.c * std::pow(a, -alpha_);
  }
  return total;
}

MaxLinearSpec::MaxLinearSpec(Dag g) : dag(std::move(g)) {
  const int d = dag.size();
  beta.assign(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int v = 0; v < d; ++v) beta[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = 1.0;
  innovations.assign(static_cast<std::size_t>(d), Innovation{});
}

void MaxLinearSpec::set_arc(int parent, int child, double b) {
  if (!(b > 0.0)) throw_input("NonPositiveWeight", "beta entries must be positive");
  if (!dag.has_arc(parent, child)) throw_input("UnknownVertex", "beta set on a missing arc");
  beta[static_cast<std::size_t>(child)][static_cast<std::size_t>(parent)] = b;
}

void MaxLinearSpec::set_diag(int v, double b) {
  if (!(b > 0.0)) throw_input("NonPositiveWeight", "diagonal beta entries must be positive");
  beta[static_cast<std::size_t>(v)][static_cast<std::size_t>(v)] = b;
}

void MaxLinearSpec::validate() const {
  const int d = dag.size();
  for (int i = 0; i < d; ++i) {
    if (!(beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] > 0.0))
      throw_input("NonPositiveWeight", "diagonal beta entries must be positive");
    for (int j = 0; j < d; ++j) {
      if (i != j && dag.has_arc(j, i) && !(beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] > 0.0))
        throw_input("NonPositiveWeight", "arc beta entries must be positive");
    }
  }
}

std::vector<std::vector<double>> gamma_matrix(const MaxLinearSpec& spec, PathMode mode) {
  spec.validate();
  const int d = spec.dag.size();
  std::vector<int> topo = spec.dag.topological_order();  // throws CyclicGraph
  std::vector<std::vector<double>> gamma(static_cast<std::size_t>(d),
                                         std::vector<double>(static_cast<std::size_t>(d), 0.0));
  for (int j = 0; j < d; ++j)
    gamma[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)] =
        spec.beta[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
  for (int i : topo) {
    for (int p : spec.dag.parents(i)) {
      double b = spec.beta[static_cast<std::size_t>(i)][static_cast<std::size_t>(p)];
      for (int j = 0; j < d; ++j) {
        double via = b * gamma[static_cast<std::size_t>(p)][static_cast<std::size_t>(j)];
        if (i == j) continue;  // gamma_jj is the bare (j -> j) transition
        double& cell = gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        cell = mode == PathMode::kMax ? std::max(cell, via) : cell + via;
      }
    }
  }
  return gamma;
}

RayMeasure from_maxlinear(const MaxLinearSpec& spec, PathMode mode) {
  const int d = spec.dag.size();
  for (const auto& inn : spec.innovations) {
    if (inn.kind != Innovation::kFrechet)
      throw_input("UnsupportedInnovation", "exact ray form requires alpha-Frechet innovations");
  }
  auto gamma = gamma_matrix(spec, mode);
  std::vector<RayMeasure::Ray> rays;
  for (int j = 0; j < d; ++j) {
    RayMeasure::Ray r;
    r.dir.resize(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) r.dir[static_cast<std::size_t>(i)] = gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    r.c = std::pow(spec.innovations[static_cast<std::size_t>(j)].scale, spec.alpha);
    rays.push_back(std::move(r));
  }
  return RayMeasure(d, spec.alpha, std::move(rays));
}

namespace {

struct ProjectedRay {
  std::vector<double> a_part, b_part, c_part;
  double c = 0.0;
};

// Rank-1 (product form) test on the class weight matrix: normalize to sum 1
// and compare entrywise with the outer product of its margins.
bool class_factorizes(const std::vector<ProjectedRay>& members, double* defect) {
  std::vector<std::vector<double>> avals, bvals;
  std::vector<std::pair<int, int>> cells;
  std::vector<double> weights;
  for (const auto& r : members) {
    int ai = -1, bi = -1;
    for (std::size_t k = 0; k < avals.size(); ++k)
      if (vectors_close(avals[k], r.a_part)) ai = static_cast<int>(k);
    if (ai < 0) {
      avals.push_back(r.a_part);
      ai = static_cast<int>(avals.size()) - 1;
    }
    for (std::size_t k = 0; k < bvals.size(); ++k)
      if (vectors_close(bvals[k], r.b_part)) bi = static_cast<int>(k);
    if (bi < 0) {
      bvals.push_back(r.b_part);
      bi = static_cast<int>(bvals.size()) - 1;
    }
    cells.emplace_back(ai, bi);
    weights.push_back(r.c);
  }
  const std::size_t na = avals.size(), nb = bvals.size();
  std::vector<double> w(na * nb, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    w[static_cast<std::size_t>(cells[k].first) * nb + static_cast<std::size_t>(cells[k].second)] +=
        weights[k];
    total += weights[k];
  }
  std::vector<double> rowm(na, 0.0), colm(nb, 0.0);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j) {
      rowm[i] += w[i * nb + j] / total;
      colm[j] += w[i * nb + j] / total;
    }
  *defect = 0.0;
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      *defect = std::max(*defect, std::abs(w[i * nb + j] / total - rowm[i] * colm[j]));
  return *defect <= kPropTol;
}

}  // namespace

CIReport ci_oracle_rays(const RayMeasure& m, VertexSet a, VertexSet b, VertexSet c) {
  if (!pairwise_disjoint(a, b, c)) throw_input("OverlappingSets", "a, b, c must be pairwise disjoint");
  if (!(a | b | c).subset_of(VertexSet::full(m.dimension())))
    throw_input("UnknownVertex", "query references an index outside the measure");

  CIReport report;
  report.a = a;
  report.b = b;
  report.c = c;
  report.holds = true;
  if (a.empty() || b.empty()) return report;

  std::vector<int> aset = a.to_vector(), bset = b.to_vector(), cset = c.to_vector();
  const double alpha = m.alpha();

  // Project to a|b|c, dropping rays that vanish there, and split by whether
  // the conditioning part survives.
  std::vector<ProjectedRay> conditioned;   // c_part != 0
  std::vector<ProjectedRay> on_zero_face;  // c_part == 0 (all rays when c is empty)
  for (const auto& r : m.rays()) {
    ProjectedRay p;
    p.a_part = project(r.dir, aset);
    p.b_part = project(r.dir, bset);
    p.c_part = project(r.dir, cset);
    p.c = r.c;
    if (all_zero(p.a_part) && all_zero(p.b_part) && all_zero(p.c_part)) continue;
    if (all_zero(p.c_part)) {
      on_zero_face.push_back(std::move(p));
    } else {
      conditioned.push_back(std::move(p));
    }
  }

  // Support criterion for the restricted measure Lambda^0_{A u B}: no ray may
  // charge both A and B coordinates.
  for (const auto& r : on_zero_face) {
    if (!all_zero(r.a_part) && !all_zero(r.b_part)) {
      CIWitness w;
      w.axes = (a | b | c).to_vector();
      w.defect = 1.0;
      w.detail = "ray charges both a and b while the conditioning coordinates vanish";
      w.test_set = {r.a_part, r.b_part};
      report.holds = false;
      report.max_defect = 1.0;
      report.witness = std::move(w);
      return report;
    }
  }

  // Group the conditioned rays into proportionality classes of the c-part;
  // conditioning on Y_C = y_C selects exactly one class, and within the class
  // the radial part cancels, leaving weights c_j * lambda_j^alpha.
  std::vector<std::vector<double>> reps;
  std::vector<std::vector<ProjectedRay>> classes;
  for (auto& r : conditioned) {
    double lambda = 0.0;
    for (double v : r.c_part)
      if (v != 0.0) {
        lambda = v;
        break;
      }
    std::vector<double> unit = r.c_part;
    for (double& v : unit) v /= lambda;
    ProjectedRay scaled;
    for (double v : r.a_part) scaled.a_part.push_back(v / lambda);
    for (double v : r.b_part) scaled.b_part.push_back(v / lambda);
    scaled.c = r.c * std::pow(lambda, alpha);
    bool placed = false;
    for (std::size_t k = 0; k < reps.size(); ++k) {
      if (vectors_close(reps[k], unit)) {
        classes[k].push_back(std::move(scaled));
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps.push_back(std::move(unit));
      classes.push_back({std::move(scaled)});
    }
  }

  for (std::size_t k = 0; k < classes.size(); ++k) {
    double defect = 0.0;
    if (!class_factorizes(classes[k], &defect)) {
      CIWitness w;
      w.axes = (a | b | c).to_vector();
      w.cond_value = reps[k];
      w.defect = defect;
      w.detail = "class weight matrix is not rank-1";
      report.holds = false;
      report.max_defect = std::max(report.max_defect, defect);
      report.witness = std::move(w);
      return report;
    }
    report.max_defect = std::max(report.max_defect, defect);
  }
  return report;
}

MarkovAudit verify_directed_markov(const MaxLinearSpec& spec, MarkovLevel level) {
  RayMeasure m = from_maxlinear(spec);
  const int d = spec.dag.size();
  MarkovAudit audit;

  if (level == MarkovLevel::kLocal) {
    for (int v = 0; v < d; ++v) {
      VertexSet pa = spec.dag.parents(v);
      VertexSet nd = VertexSet::full(d).minus(spec.dag.descendants(v)).minus(pa);
      nd.remove(v);
      std::string desc = "(DL) v=" + std::to_string(v + 1) + " | pa=" + pa.str();
      if (nd.empty()) {
        audit.record({desc, true, 0.0, "trivial (no non-descendants outside the parents)"});
        continue;
      }
      CIReport r = ci_oracle_rays(m, VertexSet::single(v), nd, pa);
      audit.record({desc, r.holds, r.max_defect, r.holds ? "" : "oracle verdict false"});
    }
    return audit;
  }

  if (d > 12) throw_resource("TooLarge", "global sweep limited to 12 vertices");
  long total = 1;
  for (int i = 0; i < d; ++i) total *= 4;
  for (long code = 0; code < total; ++code) {
    long rem = code;
    VertexSet A, B, S;
    for (int v = 0; v < d; ++v) {
      switch (rem % 4) {
        case 0: A.add(v); break;
        case 1: B.add(v); break;
        case 2: S.add(v); break;
        default: break;
      }
      rem /= 4;
    }
    if (A.empty() || B.empty() || A.min() > B.min()) continue;
    if (!dg_separated(spec.dag, A, B, S)) continue;
    CIReport r = ci_oracle_rays(m, A, B, S);
    audit.record({"(DG) A=" + A.str() + " B=" + B.str() + " S=" + S.str(), r.holds, r.max_defect,
                  r.holds ? "" : "oracle verdict false"});
  }
  return audit;
}

RayMeasure standardize_margins(const RayMeasure& m) {
  const int d = m.dimension();
  const double alpha = m.alpha();
  std::vector<double> scale(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    for (const auto& r : m.rays()) s += r.c * std::pow(r.dir[static_cast<std::size_t>(i)], alpha);
    if (!(s > 0.0))
      throw_input("UnchargedCoordinate", "coordinate " + std::to_string(i + 1) + " carries no mass");
    scale[static_cast<std::size_t>(i)] = std::pow(s, 1.0 / alpha);
  }
  std::vector<RayMeasure::Ray> rays = m.rays();
  for (auto& r : rays)
    for (int i = 0; i < d; ++i) r.dir[static_cast<std::size_t>(i)] /= scale[static_cast<std::size_t>(i)];
  return RayMeasure(d, alpha, std::move(rays));
}

double chi_rays(const RayMeasure& m, int i, int j) {
  const int d = m.dimension();
  if (i < 0 || i >= d || j < 0 || j >= d) throw_input("UnknownVertex", "index outside the measure");
  for (int v = 0; v < d; ++v) {
    double s = 0.0;
    for (const auto& r : m.rays()) s += r.c * std::pow(r.dir[static_cast<std::size_t>(v)], m.alpha());
    if (std::abs(s - 1.0) > 1e-9)
      throw_input("NotStandardized", "margins must be standardized (use standardize_margins)");
  }
  if (i == j) return 1.0;
  double chi = 0.0;
  for (const auto& r : m.rays())
    chi += r.c * std::pow(std::min(r.dir[static_cast<std::size_t>(i)], r.dir[static_cast<std::size_t>(j)]),
                          m.alpha());
  return chi;
}

}  // namespace lgm
