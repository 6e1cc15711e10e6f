#include "lgm/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <tuple>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

constexpr double kRelEps = 1e-12;

bool weights_equal(double lhs, double rhs) {
  if (lhs == rhs) return true;
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  return std::abs(lhs - rhs) <= kRelEps * scale;
}

bool is_zero_vector(const std::vector<double>& y) {
  for (double v : y)
    if (v != 0.0) return false;
  return true;
}

// Dynamic atom bitmask; the oracle may face more than 64 atoms when the value
// grid is small.
using Mask = std::vector<std::uint64_t>;

Mask mask_zero(int n) { return Mask(static_cast<std::size_t>((n + 63) / 64), 0); }

Mask mask_full(int n) {
  Mask m = mask_zero(n);
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i / 64)] |= 1ull << (i % 64);
  return m;
}

void mask_set(Mask& m, int i) { m[static_cast<std::size_t>(i / 64)] |= 1ull << (i % 64); }

void mask_or(Mask& m, const Mask& o) {
  for (std::size_t k = 0; k < m.size(); ++k) m[k] |= o[k];
}

Mask mask_and(const Mask& a, const Mask& b) {
  Mask out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] & b[k];
  return out;
}

bool mask_empty(const Mask& m) {
  for (std::uint64_t w : m)
    if (w) return false;
  return true;
}

std::vector<int> mask_indices(const Mask& m) {
  std::vector<int> out;
  for (std::size_t k = 0; k < m.size(); ++k)
    for (std::uint64_t w = m[k]; w; w &= w - 1)
      out.push_back(static_cast<int>(k) * 64 + std::countr_zero(w));
  return out;
}

}  // namespace

AtomicMeasure::AtomicMeasure(int d, std::vector<Atom> atoms) : d_(d) {
  if (d < 1 || d > 24) throw_input("TooLarge", "dimension must be in 1..24");
  std::map<std::vector<double>, double> merged;
  for (auto& a : atoms) {
    if (static_cast<int>(a.y.size()) != d) throw_input("DimensionMismatch", "atom has wrong dimension");
    if (!(a.w > 0.0)) throw_input("NonPositiveWeight", "atom weights must be positive");
    for (double v : a.y)
      if (!std::isfinite(v)) throw_input("NonFinite", "atom coordinates must be finite");
    if (is_zero_vector(a.y)) throw_input("AtomAtOrigin", "atoms at the origin are not allowed");
    merged[a.y] += a.w;
  }
  for (auto& [y, w] : merged) atoms_.push_back({y, w});
}

double AtomicMeasure::total_mass() const {
  double t = 0.0;
  for (const auto& a : atoms_) t += a.w;
  return t;
}

VertexSet AtomicMeasure::support_pattern(const Atom& a) const {
  VertexSet p;
  for (int v = 0; v < d_; ++v)
    if (a.y[v] != 0.0) p.add(v);
  return p;
}

AtomicMeasure marginal(const AtomicMeasure& m, VertexSet dset) {
  if (dset.empty()) throw_input("EmptyIndexSet", "marginal requires a non-empty index set");
  if (!dset.subset_of(VertexSet::full(m.dimension()))) throw_input("UnknownVertex", "index outside measure dimension");
  std::vector<int> axes = dset.to_vector();
  std::vector<AtomicMeasure::Atom> projected;
  for (const auto& a : m.atoms()) {
    AtomicMeasure::Atom p;
    p.w = a.w;
    p.y.reserve(axes.size());
    for (int v : axes) p.y.push_back(a.y[v]);
    if (is_zero_vector(p.y)) continue;
    projected.push_back(std::move(p));
  }
  return AtomicMeasure(static_cast<int>(axes.size()), std::move(projected));
}

AtomicMeasure restrict_zero(const AtomicMeasure& m, VertexSet dset) {
  if (dset.empty()) throw_input("EmptyIndexSet", "restrict_zero requires a non-empty index set");
  if (!dset.subset_of(VertexSet::full(m.dimension()))) throw_input("UnknownVertex", "index outside measure dimension");
  std::vector<int> axes = dset.to_vector();
  VertexSet complement = VertexSet::full(m.dimension()).minus(dset);
  std::vector<AtomicMeasure::Atom> kept;
  for (const auto& a : m.atoms()) {
    bool complement_zero = true;
    for (int v : complement)
      if (a.y[v] != 0.0) complement_zero = false;
    if (!complement_zero) continue;
    AtomicMeasure::Atom p;
    p.w = a.w;
    for (int v : axes) p.y.push_back(a.y[v]);
    kept.push_back(std::move(p));
  }
  return AtomicMeasure(static_cast<int>(axes.size()), std::move(kept));
}

namespace {

// The conditional law of Y ~ P_R depends on R only through the set of atoms R
// captures.  A subset T of atoms arises as atoms-in-R for some product-form R
// iff T is product-closed: the smallest product set spanned by the per-axis
// values of T captures exactly T.  Origin avoidance (0_V outside the closure
// of R) is achievable precisely when some axis value set of T excludes the
// value 0, because finite value sets are closed and any Borel R_v whose trace
// contains 0 has 0 in its closure.  The oracle therefore enumerates either
//   (a) product-closed atom subsets directly (2^n candidates), or
//   (b) per-axis value subsets (prod_v 2^{|values_v|} candidates, the
//       documented guard), deduplicated by captured atom set,
// whichever is cheaper.  Both visit every distinct conditional law arising
// from the full test class.
struct OracleContext {
  const AtomicMeasure* m = nullptr;
  std::vector<int> axes_original;           // original axis ids of the marginal
  std::vector<std::vector<double>> values;  // distinct values per marginal axis
  std::vector<std::vector<Mask>> value_atoms;  // [axis][value_idx] -> atoms
  std::vector<int> aset, bset, cset;           // marginal-space coordinates
  CIReport report;
};

std::vector<double> project(const std::vector<double>& y, const std::vector<int>& axes) {
  std::vector<double> out;
  out.reserve(axes.size());
  for (int v : axes) out.push_back(y[v]);
  return out;
}

bool law_factorizes(OracleContext& ctx, const std::vector<int>& members, double* defect,
                    std::vector<double>* bad_cond) {
  const auto& atoms = ctx.m->atoms();
  struct Stratum {
    std::map<std::vector<double>, double> wa, wb;
    std::map<std::pair<std::vector<double>, std::vector<double>>, double> wab;
    double total = 0.0;
  };
  std::map<std::vector<double>, Stratum> strata;
  for (int i : members) {
    const auto& atom = atoms[static_cast<std::size_t>(i)];
    std::vector<double> za = project(atom.y, ctx.aset);
    std::vector<double> zb = project(atom.y, ctx.bset);
    std::vector<double> zc = project(atom.y, ctx.cset);
    Stratum& s = strata[zc];
    s.wa[za] += atom.w;
    s.wb[zb] += atom.w;
    s.wab[{za, zb}] += atom.w;
    s.total += atom.w;
  }
  for (auto& [zc, s] : strata) {
    for (auto& [za, wa] : s.wa) {
      for (auto& [zb, wb] : s.wb) {
        auto it = s.wab.find({za, zb});
        double joint = it == s.wab.end() ? 0.0 : it->second;
        double lhs = joint * s.total;
        double rhs = wa * wb;
        if (!weights_equal(lhs, rhs)) {
          *defect = std::abs(lhs - rhs) / std::max(lhs, rhs);
          *bad_cond = zc;
          return false;
        }
      }
    }
  }
  return true;
}

bool origin_avoidable(const OracleContext& ctx, const std::vector<int>& members) {
  const auto& atoms = ctx.m->atoms();
  const int d = ctx.m->dimension();
  for (int v = 0; v < d; ++v) {
    bool axis_has_zero = false;
    for (int i : members) {
      if (atoms[static_cast<std::size_t>(i)].y[v] == 0.0) {
        axis_has_zero = true;
        break;
      }
    }
    if (!axis_has_zero) return true;
  }
  return false;
}

void record_witness(OracleContext& ctx, const std::vector<int>& members, double defect,
                    const std::vector<double>& bad_cond) {
  const auto& atoms = ctx.m->atoms();
  const int d = ctx.m->dimension();
  CIWitness w;
  w.axes = ctx.axes_original;
  w.test_set.assign(static_cast<std::size_t>(d), {});
  for (int v = 0; v < d; ++v) {
    std::vector<double> vals;
    for (int i : members) vals.push_back(atoms[static_cast<std::size_t>(i)].y[v]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    w.test_set[static_cast<std::size_t>(v)] = std::move(vals);
  }
  w.cond_value = bad_cond;
  w.defect = defect;
  w.detail = "conditional law fails to factorize on the recorded test set";
  ctx.report.witness = std::move(w);
  ctx.report.holds = false;
  ctx.report.max_defect = std::max(ctx.report.max_defect, defect);
}

// Returns false to stop the enumeration (witness recorded).
bool check_candidate(OracleContext& ctx, const std::vector<int>& members) {
  if (!origin_avoidable(ctx, members)) return true;
  double defect = 0.0;
  std::vector<double> bad_cond;
  if (law_factorizes(ctx, members, &defect, &bad_cond)) return true;
  record_witness(ctx, members, defect, bad_cond);
  return false;
}

// Path (a): subsets of atoms, keeping only product-closed ones.
void enumerate_traces(OracleContext& ctx) {
  const auto& atoms = ctx.m->atoms();
  const int n = static_cast<int>(atoms.size());
  const int d = ctx.m->dimension();
  // Per-axis, per-value atom sets as plain 64-bit words (n <= 24 here).
  std::vector<std::vector<std::uint64_t>> value_words(static_cast<std::size_t>(d));
  for (int v = 0; v < d; ++v) {
    const auto& masks = ctx.value_atoms[static_cast<std::size_t>(v)];
    value_words[static_cast<std::size_t>(v)].resize(masks.size());
    for (std::size_t k = 0; k < masks.size(); ++k) value_words[static_cast<std::size_t>(v)][k] = masks[k][0];
  }
  for (std::uint64_t t = 1; t < (1ull << n); ++t) {
    std::uint64_t closure = ~0ull >> (64 - n);
    for (int v = 0; v < d && closure; ++v) {
      std::uint64_t axis_union = 0;
      for (std::uint64_t w : value_words[static_cast<std::size_t>(v)])
        if (w & t) axis_union |= w;
      closure &= axis_union;
    }
    if (closure != t) continue;
    std::vector<int> members;
    for (std::uint64_t w = t; w; w &= w - 1) members.push_back(std::countr_zero(w));
    if (!check_candidate(ctx, members)) return;
  }
}

// Path (b): odometer over per-axis value subsets with empty-intersection
// pruning; candidates deduplicated by captured atom set.
bool enumerate_value_subsets(OracleContext& ctx, int axis, const Mask& partial,
                             std::vector<Mask>& seen) {
  const int d = ctx.m->dimension();
  if (axis == d) {
    if (std::find(seen.begin(), seen.end(), partial) != seen.end()) return true;
    seen.push_back(partial);
    return check_candidate(ctx, mask_indices(partial));
  }
  const auto& masks = ctx.value_atoms[static_cast<std::size_t>(axis)];
  const std::uint32_t subsets = 1u << masks.size();
  for (std::uint32_t s = 1; s < subsets; ++s) {
    Mask axis_union = mask_zero(static_cast<int>(ctx.m->atoms().size()));
    for (std::uint32_t b = s; b; b &= b - 1) mask_or(axis_union, masks[static_cast<std::size_t>(std::countr_zero(b))]);
    Mask next = mask_and(partial, axis_union);
    if (mask_empty(next)) continue;  // never charged below this choice
    if (!enumerate_value_subsets(ctx, axis + 1, next, seen)) return false;
  }
  return true;
}

}  // namespace

CIReport ci_oracle(const AtomicMeasure& m, VertexSet a, VertexSet b, VertexSet c) {
  if (!pairwise_disjoint(a, b, c)) throw_input("OverlappingSets", "a, b, c must be pairwise disjoint");
  if (!(a | b | c).subset_of(VertexSet::full(m.dimension())))
    throw_input("UnknownVertex", "query references an index outside the measure");

  CIReport report;
  report.a = a;
  report.b = b;
  report.c = c;
  report.holds = true;
  if (a.empty() || b.empty()) return report;  // trivially true by definition

  VertexSet dset = a | b | c;
  AtomicMeasure mm = marginal(m, dset);
  std::vector<int> axes = dset.to_vector();

  OracleContext ctx;
  ctx.m = &mm;
  ctx.axes_original = axes;
  ctx.report = report;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    int original = axes[k];
    if (a.contains(original)) ctx.aset.push_back(static_cast<int>(k));
    if (b.contains(original)) ctx.bset.push_back(static_cast<int>(k));
    if (c.contains(original)) ctx.cset.push_back(static_cast<int>(k));
  }

  const auto& atoms = mm.atoms();
  const int n = static_cast<int>(atoms.size());
  const int dd = mm.dimension();
  ctx.values.resize(static_cast<std::size_t>(dd));
  ctx.value_atoms.resize(static_cast<std::size_t>(dd));
  double log2_cells = 0.0;
  for (int v = 0; v < dd; ++v) {
    std::vector<double> vals;
    for (const auto& atom : atoms) vals.push_back(atom.y[v]);
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    log2_cells += static_cast<double>(vals.size());
    ctx.value_atoms[static_cast<std::size_t>(v)].assign(vals.size(), mask_zero(n));
    for (int i = 0; i < n; ++i) {
      auto it = std::lower_bound(vals.begin(), vals.end(), atoms[static_cast<std::size_t>(i)].y[v]);
      mask_set(ctx.value_atoms[static_cast<std::size_t>(v)][static_cast<std::size_t>(it - vals.begin())], i);
    }
    ctx.values[static_cast<std::size_t>(v)] = std::move(vals);
  }
  if (log2_cells > 24.0) {
    throw_resource("TooManyCells", "test-set enumeration guard exceeded (2^" +
                                       std::to_string(static_cast<long>(log2_cells)) + " cells)");
  }

  if (n == 0) return ctx.report;  // zero measure: the test class is empty
  if (n <= 24 && static_cast<double>(n) <= log2_cells) {
    enumerate_traces(ctx);
  } else {
    std::vector<Mask> seen;
    enumerate_value_subsets(ctx, 0, mask_full(n), seen);
  }
  return ctx.report;
}

MarkovAudit semigraphoid_audit(const AtomicMeasure& m) {
  const int d = m.dimension();
  if (d > 5) throw_resource("TooLarge", "semi-graphoid audit limited to dimension 5");

  std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, bool> cache;
  auto holds = [&](VertexSet a, VertexSet b, VertexSet c) {
    std::uint32_t x = a.bits(), y = b.bits();
    if (x > y) std::swap(x, y);  // the oracle is symmetric in a and b
    auto key = std::make_tuple(x, y, c.bits());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    bool h = ci_oracle(m, a, b, c).holds;
    cache.emplace(key, h);
    return h;
  };

  MarkovAudit audit;
  bool ok_prop[4] = {true, true, true, true};

  // Assign every vertex to one of A/B/C/D/none and filter per axiom.
  long total = 1;
  for (int i = 0; i < d; ++i) total *= 5;
  for (long code = 0; code < total; ++code) {
    long rem = code;
    VertexSet A, B, C, D;
    for (int v = 0; v < d; ++v) {
      switch (rem % 5) {
        case 0: A.add(v); break;
        case 1: B.add(v); break;
        case 2: C.add(v); break;
        case 3: D.add(v); break;
        default: break;
      }
      rem /= 5;
    }
    if (A.empty() || B.empty()) continue;

    if (D.empty()) {
      if (holds(A, B, C) && !holds(B, A, C)) {
        ok_prop[0] = false;
        audit.record({"L1", false, 1.0, "A=" + A.str() + " B=" + B.str() + " C=" + C.str()});
      }
    } else {
      bool premise = holds(A, B | D, C);
      if (premise && !holds(A, B, C)) {
        ok_prop[1] = false;
        audit.record({"L2", false, 1.0,
                      "A=" + A.str() + " B=" + B.str() + " C=" + C.str() + " D=" + D.str()});
      }
      if (premise && !holds(A, B, C | D)) {
        ok_prop[2] = false;
        audit.record({"L3", false, 1.0,
                      "A=" + A.str() + " B=" + B.str() + " C=" + C.str() + " D=" + D.str()});
      }
      if (holds(A, B, C) && holds(A, D, B | C) && !holds(A, B | D, C)) {
        ok_prop[3] = false;
        audit.record({"L4", false, 1.0,
                      "A=" + A.str() + " B=" + B.str() + " C=" + C.str() + " D=" + D.str()});
      }
    }
  }

  const char* names[4] = {"L1 (symmetry)", "L2 (decomposition)", "L3 (weak union)",
                          "L4 (contraction)"};
  for (int i = 0; i < 4; ++i)
    audit.record({names[i], ok_prop[i], ok_prop[i] ? 0.0 : 1.0,
                  ok_prop[i] ? "all instances hold" : "violations listed above"});
  return audit;
}

std::vector<VertexSet> charged_faces(const AtomicMeasure& m) {
  std::vector<VertexSet> out;
  for (const auto& a : m.atoms()) {
    VertexSet p = m.support_pattern(a);
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](VertexSet x, VertexSet y) { return x.bits() < y.bits(); });
  return out;
}

FaceBoundReport face_bound_check(const AtomicMeasure& m, const UndirectedGraph& g) {
  if (g.size() != m.dimension()) throw_input("DimensionMismatch", "graph and measure index sets differ");
  FaceBoundReport report;
  for (VertexSet face : charged_faces(m)) {
    VertexSet reached = VertexSet::single(face.min());
    VertexSet frontier = reached;
    while (!frontier.empty()) {
      VertexSet next;
      for (int v : frontier) next = next | g.neighbors(v);
      next = (next & face).minus(reached);
      reached = reached | next;
      frontier = next;
    }
    if (!(reached == face)) {
      report.holds = false;
      report.disconnected_faces.push_back(face);
    }
  }
  return report;
}

}  // namespace lgm
