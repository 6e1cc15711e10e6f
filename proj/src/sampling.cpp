#include "lgm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

}  // namespace

std::uint64_t CounterRng::next_u64() {
  std::uint64_t h = mix64(seed_ + kGolden);
  h = mix64(h ^ (stream_ + kGolden));
  h = mix64(h ^ (counter_++ + kGolden));
  return h;
}

double CounterRng::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> SampleMatrix::column(int col) const {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) out[static_cast<std::size_t>(r)] = at(r, col);
  return out;
}

SampleMatrix sample_maxlinear(const MaxLinearSpec& spec, int n, std::uint64_t seed) {
  if (n < 1) throw_input("DomainError", "sample count must be positive");
  const int d = spec.dag.size();
  auto gamma = gamma_matrix(spec, PathMode::kMax);
  const double alpha = spec.alpha;

  SampleMatrix out;
  out.n = n;
  out.d = d;
  out.data.assign(static_cast<std::size_t>(n) * d, 0.0);
  std::vector<double> eps(static_cast<std::size_t>(d));
  for (int row = 0; row < n; ++row) {
    CounterRng rng(seed, static_cast<std::uint64_t>(row));
    for (int j = 0; j < d; ++j) {
      const Innovation& inn = spec.innovations[static_cast<std::size_t>(j)];
      double u = rng.next_uniform();
      switch (inn.kind) {
        case Innovation::kFrechet:
          eps[static_cast<std::size_t>(j)] = inn.scale * std::pow(-std::log(u), -1.0 / alpha);
          break;
        case Innovation::kUniform:
          eps[static_cast<std::size_t>(j)] = inn.scale * u;
          break;
        default:
          throw_input("UnsupportedInnovation", "unknown innovation kind");
      }
    }
    for (int i = 0; i < d; ++i) {
      double x = 0.0;
      for (int j = 0; j < d; ++j)
        x = std::max(x, gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                            eps[static_cast<std::size_t>(j)]);
      out.data[static_cast<std::size_t>(row) * d + i] = x;
    }
  }
  return out;
}

SampleMatrix sample_pareto_conditional(const RayMeasure& m, int v, int n, std::uint64_t seed) {
  if (n < 1) throw_input("DomainError", "sample count must be positive");
  const int d = m.dimension();
  if (v < 0 || v >= d) throw_input("UnknownVertex", "index outside the measure");
  const double alpha = m.alpha();

  std::vector<double> cum;
  std::vector<const RayMeasure::Ray*> charged;
  double total = 0.0;
  for (const auto& r : m.rays()) {
    double w = r.dir[static_cast<std::size_t>(v)];
    if (w <= 0.0) continue;
    total += r.c * std::pow(w, alpha);
    cum.push_back(total);
    charged.push_back(&r);
  }
  if (!(total > 0.0)) throw_input("UnchargedDirection", "no ray charges the requested coordinate");

  SampleMatrix out;
  out.n = n;
  out.d = d;
  out.data.assign(static_cast<std::size_t>(n) * d, 0.0);
  for (int row = 0; row < n; ++row) {
    CounterRng rng(seed, static_cast<std::uint64_t>(row));
    double pick = rng.next_uniform() * total;
    std::size_t j = static_cast<std::size_t>(std::lower_bound(cum.begin(), cum.end(), pick) - cum.begin());
    if (j >= charged.size()) j = charged.size() - 1;
    const auto& ray = *charged[j];
    double threshold = 1.0 / ray.dir[static_cast<std::size_t>(v)];
    double t = threshold * std::pow(rng.next_uniform(), -1.0 / alpha);
    for (int i = 0; i < d; ++i)
      out.data[static_cast<std::size_t>(row) * d + i] = t * ray.dir[static_cast<std::size_t>(i)];
  }
  return out;
}

EmpiricalChi empirical_chi(const SampleMatrix& samples, int i, int j, double q) {
  if (samples.n < 10000) throw_resource("TooFewSamples", "empirical_chi needs at least 10^4 samples");
  if (!(q > 0.9 && q < 1.0)) throw_input("DomainError", "tail quantile must lie in (0.9, 1)");

  auto quantile = [&](int col) {
    std::vector<double> v = samples.column(col);
    std::size_t k = static_cast<std::size_t>(q * samples.n);
    if (k >= v.size()) k = v.size() - 1;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
    return v[k];
  };
  double ui = quantile(i), uj = quantile(j);

  long joint = 0, marg = 0;
  for (int r = 0; r < samples.n; ++r) {
    bool ej = samples.at(r, j) > uj;
    if (ej) ++marg;
    if (ej && samples.at(r, i) > ui) ++joint;
  }
  EmpiricalChi out;
  out.joint = joint;
  out.marginal = marg;
  if (marg == 0) throw_input("DomainError", "no exceedances at the requested quantile");
  out.value = static_cast<double>(joint) / static_cast<double>(marg);
  out.stderr_ = std::sqrt(std::max(out.value * (1.0 - out.value), 1.0 / marg) / marg);
  return out;
}

namespace {

// Conditional independence is invariant under rescaling the a- and b-parts by
// any function of the conditioning coordinates.  Dividing by the conditioning
// magnitude removes the common radial scale that would otherwise leak through
// the quantile bins on singular (ray-supported) samples.
std::vector<double> scaled_column(const SampleMatrix& samples, int col, VertexSet cond) {
  // Snap to 10 significant digits: division round-off must not leak through
  // the quantile cuts, while distinctions above the 1e-9 proportionality
  // tolerance survive.
  auto snap = [](double v) {
    if (v <= 0.0) return v;
    double mag = std::pow(10.0, std::floor(std::log10(v)) - 9.0);
    return std::round(v / mag) * mag;
  };
  std::vector<double> out(static_cast<std::size_t>(samples.n));
  for (int r = 0; r < samples.n; ++r) {
    double s = 0.0;
    for (int v : cond) s = std::max(s, std::abs(samples.at(r, v)));
    out[static_cast<std::size_t>(r)] = s > 0.0 ? snap(samples.at(r, col) / s) : samples.at(r, col);
  }
  return out;
}

// Quantile bins among the positive part of a column, zeros in their own bin 0.
std::vector<int> bin_column(const std::vector<double>& col, int bins) {
  std::vector<double> positive;
  for (double x : col)
    if (x > 0.0) positive.push_back(x);
  std::sort(positive.begin(), positive.end());
  std::vector<double> cuts;
  for (int b = 1; b < bins; ++b) {
    std::size_t k = positive.size() * static_cast<std::size_t>(b) / static_cast<std::size_t>(bins);
    if (k >= positive.size()) k = positive.size() - 1;
    if (!positive.empty()) cuts.push_back(positive[k]);
  }
  std::vector<int> labels(col.size(), 0);
  for (std::size_t r = 0; r < col.size(); ++r) {
    if (col[r] <= 0.0) {
      labels[r] = 0;
      continue;
    }
    int b = 1;
    for (double cut : cuts)
      if (col[r] > cut) ++b;
    labels[r] = b;
  }
  return labels;
}

std::vector<int> composite_labels(const SampleMatrix& samples, VertexSet axes, int bins,
                                  VertexSet scale_by = VertexSet()) {
  std::vector<int> labels(static_cast<std::size_t>(samples.n), 0);
  for (int v : axes) {
    std::vector<int> axis = bin_column(scaled_column(samples, v, scale_by), bins);
    for (std::size_t r = 0; r < labels.size(); ++r)
      labels[r] = labels[r] * (bins + 1) + axis[r];
  }
  return labels;
}

double conditional_mi(const std::vector<int>& la, const std::vector<int>& lb,
                      const std::vector<std::vector<int>>& strata) {
  double total_n = 0.0;
  for (const auto& s : strata) total_n += static_cast<double>(s.size());
  double cmi = 0.0;
  for (const auto& rows : strata) {
    if (rows.empty()) continue;
    std::map<int, double> pa, pb;
    std::map<std::pair<int, int>, double> pab;
    double n = static_cast<double>(rows.size());
    for (int r : rows) {
      pa[la[static_cast<std::size_t>(r)]] += 1.0;
      pb[lb[static_cast<std::size_t>(r)]] += 1.0;
      pab[{la[static_cast<std::size_t>(r)], lb[static_cast<std::size_t>(r)]}] += 1.0;
    }
    double mi = 0.0;
    for (const auto& [key, cab] : pab) {
      double p_joint = cab / n;
      double p_ind = (pa[key.first] / n) * (pb[key.second] / n);
      mi += p_joint * std::log(p_joint / p_ind);
    }
    cmi += (n / total_n) * mi;
  }
  return cmi;
}

}  // namespace

double empirical_ci_test(const SampleMatrix& samples, VertexSet a, VertexSet b, VertexSet c,
                         const CiTestOptions& opts) {
  if (samples.n < 10000) throw_resource("TooFewSamples", "empirical_ci_test needs at least 10^4 samples");
  if (!pairwise_disjoint(a, b, c) || a.empty() || b.empty())
    throw_input("OverlappingSets", "a and b must be non-empty and disjoint from c");

  std::vector<int> la = composite_labels(samples, a, opts.bins, c);
  std::vector<int> lb = composite_labels(samples, b, opts.bins, c);
  std::vector<int> lc = composite_labels(samples, c, opts.cond_bins);

  std::map<int, std::vector<int>> strata_map;
  for (int r = 0; r < samples.n; ++r) strata_map[lc[static_cast<std::size_t>(r)]].push_back(r);
  std::vector<std::vector<int>> strata;
  for (auto& [key, rows] : strata_map) strata.push_back(std::move(rows));

  double observed = conditional_mi(la, lb, strata);

  // Permute a-labels within each stratum; one stream per permutation.
  int exceed = 0;
  std::vector<int> permuted = la;
  for (int p = 0; p < opts.permutations; ++p) {
    CounterRng rng(opts.seed, static_cast<std::uint64_t>(p) + 1);
    for (const auto& rows : strata) {
      for (std::size_t k = rows.size(); k > 1; --k) {
        std::size_t pick = static_cast<std::size_t>(rng.next_uniform() * static_cast<double>(k));
        if (pick >= k) pick = k - 1;
        std::swap(permuted[static_cast<std::size_t>(rows[k - 1])],
                  permuted[static_cast<std::size_t>(rows[pick])]);
      }
    }
    if (conditional_mi(permuted, lb, strata) >= observed) ++exceed;
    // Restore for the next round.
    for (const auto& rows : strata)
      for (int r : rows) permuted[static_cast<std::size_t>(r)] = la[static_cast<std::size_t>(r)];
  }
  return (1.0 + exceed) / (1.0 + opts.permutations);
}

}  // namespace lgm
