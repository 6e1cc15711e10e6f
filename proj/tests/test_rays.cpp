#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lgm/errors.hpp"
#include "lgm/rays.hpp"
#include "lgm/sampling.hpp"

using namespace lgm;

namespace {

MaxLinearSpec chain_spec(int d, double beta_val = 1.0, double alpha = 1.0) {
  Dag dag(d);
  for (int v = 0; v + 1 < d; ++v) dag.add_arc(v, v + 1);
  MaxLinearSpec spec(dag);
  spec.alpha = alpha;
  for (int v = 0; v + 1 < d; ++v) spec.set_arc(v, v + 1, beta_val);
  return spec;
}

// Brute-force path aggregation for the gamma oracle.
double brute_gamma(const MaxLinearSpec& spec, int i, int j, PathMode mode) {
  if (i == j) return spec.beta[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
  double best = 0.0, sum = 0.0;
  std::vector<std::pair<int, double>> stack = {
      {j, spec.beta[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)]}};
  while (!stack.empty()) {
    auto [v, prod] = stack.back();
    stack.pop_back();
    for (int child : spec.dag.children(v)) {
      double next = prod * spec.beta[static_cast<std::size_t>(child)][static_cast<std::size_t>(v)];
      if (child == i) {
        best = std::max(best, next);
        sum += next;
      } else {
        stack.push_back({child, next});
      }
    }
  }
  return mode == PathMode::kMax ? best : sum;
}

MaxLinearSpec random_recursive(CounterRng& rng, int d) {
  Dag dag(d);
  for (int v = 1; v < d; ++v)
    for (int p = 0; p < v; ++p)
      if (rng.next_uniform() < 0.45) dag.add_arc(p, v);
  MaxLinearSpec spec(dag);
  for (int v = 1; v < d; ++v)
    for (int p = 0; p < v; ++p)
      if (dag.has_arc(p, v)) spec.set_arc(p, v, 0.5 + 1.5 * rng.next_uniform());
  for (int v = 0; v < d; ++v) spec.set_diag(v, 0.5 + rng.next_uniform());
  return spec;
}

}  // namespace

TEST_CASE("gamma matrix on a single arc") {
  Dag dag(2);
  dag.add_arc(0, 1);
  MaxLinearSpec spec(dag);
  spec.set_arc(0, 1, 2.0);
  auto g = gamma_matrix(spec, PathMode::kMax);
  CHECK(g[0][0] == 1.0);
  CHECK(g[0][1] == 0.0);
  CHECK(g[1][0] == 2.0);
  CHECK(g[1][1] == 1.0);
}

TEST_CASE("gamma matrix on the diamond, both modes") {
  Dag dag(4);
  dag.add_arc(0, 1);
  dag.add_arc(0, 2);
  dag.add_arc(1, 3);
  dag.add_arc(2, 3);
  MaxLinearSpec spec(dag);
  for (auto [p, c] : dag.arcs()) spec.set_arc(p, c, 1.0);
  auto gmax = gamma_matrix(spec, PathMode::kMax);
  auto gsum = gamma_matrix(spec, PathMode::kSum);
  CHECK(gmax[3][0] == doctest::Approx(brute_gamma(spec, 3, 0, PathMode::kMax)));
  CHECK(gsum[3][0] == doctest::Approx(brute_gamma(spec, 3, 0, PathMode::kSum)));
  CHECK(gmax[3][0] == doctest::Approx(1.0));
  CHECK(gsum[3][0] == doctest::Approx(2.0));
}

TEST_CASE("gamma matches brute-force path enumeration on random dags") {
  CounterRng rng(42, 0);
  for (int trial = 0; trial < 25; ++trial) {
    MaxLinearSpec spec = random_recursive(rng, 5);
    for (PathMode mode : {PathMode::kMax, PathMode::kSum}) {
      auto g = gamma_matrix(spec, mode);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
          CHECK(g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                doctest::Approx(brute_gamma(spec, i, j, mode)).epsilon(1e-12));
    }
  }
}

TEST_CASE("cyclic graphs are rejected") {
  Dag dag(2);
  dag.add_arc(0, 1);
  dag.add_arc(1, 0);
  MaxLinearSpec spec(dag);
  spec.set_arc(0, 1, 1.0);
  spec.set_arc(1, 0, 1.0);
  CHECK_THROWS_AS(gamma_matrix(spec, PathMode::kMax), InputError);
}

TEST_CASE("from_maxlinear produces the gamma columns") {
  MaxLinearSpec spec = chain_spec(2);
  spec.set_arc(0, 1, 2.0);
  RayMeasure m = from_maxlinear(spec);
  REQUIRE(m.rays().size() == 2);
  CHECK(m.rays()[0].dir == std::vector<double>{1, 2});
  CHECK(m.rays()[0].c == doctest::Approx(1.0));
  CHECK(m.rays()[1].dir == std::vector<double>{0, 1});

  Dag iso(2);
  RayMeasure id = from_maxlinear(MaxLinearSpec(iso));
  REQUIRE(id.rays().size() == 2);
  CHECK(id.rays()[0].dir == std::vector<double>{1, 0});
  CHECK(id.rays()[1].dir == std::vector<double>{0, 1});

  MaxLinearSpec bad = chain_spec(2);
  bad.innovations[0].kind = Innovation::kUniform;
  CHECK_THROWS_AS(from_maxlinear(bad), InputError);
}

TEST_CASE("the diamond support consists of one ray per vertex") {
  Dag dag(4);
  dag.add_arc(0, 1);
  dag.add_arc(0, 2);
  dag.add_arc(1, 3);
  dag.add_arc(2, 3);
  MaxLinearSpec spec(dag);
  for (auto [pp, cc] : dag.arcs()) spec.set_arc(pp, cc, 1.0 + 0.1 * (pp + cc));
  RayMeasure m = from_maxlinear(spec);
  CHECK(m.rays().size() == 4);  // the gamma columns
}

TEST_CASE("ray oracle on the max-linear chain") {
  RayMeasure m = from_maxlinear(chain_spec(3));
  CHECK(ci_oracle_rays(m, VertexSet::of({0}), VertexSet::of({2}), VertexSet::of({1})).holds);
  CHECK_FALSE(ci_oracle_rays(m, VertexSet::of({0}), VertexSet::of({2}), VertexSet()).holds);

  RayMeasure axes(2, 1.0, {{{1, 0}, 1.0}, {{0, 1}, 1.0}});
  CHECK(ci_oracle_rays(axes, VertexSet::of({0}), VertexSet::of({1}), VertexSet()).holds);
}

TEST_CASE("collider with generic coefficients is dependent given the child") {
  Dag dag(3);
  dag.add_arc(0, 2);
  dag.add_arc(1, 2);
  MaxLinearSpec spec(dag);
  spec.set_arc(0, 2, 1.3);
  spec.set_arc(1, 2, 0.7);
  RayMeasure m = from_maxlinear(spec);
  CHECK(ci_oracle_rays(m, VertexSet::of({0}), VertexSet::of({1}), VertexSet()).holds);
  CHECK_FALSE(ci_oracle_rays(m, VertexSet::of({0}), VertexSet::of({1}), VertexSet::of({2})).holds);
}

TEST_CASE("directed local Markov property on random recursive models") {
  CounterRng rng(77, 0);
  for (int trial = 0; trial < 40; ++trial) {
    int d = 3 + static_cast<int>(rng.next_uniform() * 4);
    MaxLinearSpec spec = random_recursive(rng, d);
    MarkovAudit audit = verify_directed_markov(spec, MarkovLevel::kLocal);
    CHECK(audit.all_hold);
  }
}

TEST_CASE("directed global Markov property on random recursive models") {
  CounterRng rng(78, 0);
  for (int trial = 0; trial < 10; ++trial) {
    MaxLinearSpec spec = random_recursive(rng, 5);
    MarkovAudit audit = verify_directed_markov(spec, MarkovLevel::kGlobal);
    CHECK(audit.all_hold);
  }
}

TEST_CASE("sum-mode rays satisfy the same Markov properties") {
  CounterRng rng(79, 0);
  for (int trial = 0; trial < 15; ++trial) {
    MaxLinearSpec spec = random_recursive(rng, 5);
    RayMeasure sum_rays = from_maxlinear(spec, PathMode::kSum);
    RayMeasure max_rays = from_maxlinear(spec, PathMode::kMax);
    // Same support pattern per ray.
    REQUIRE(sum_rays.rays().size() == max_rays.rays().size());
    for (int v = 0; v < 5; ++v) {
      VertexSet pa = spec.dag.parents(v);
      VertexSet nd = VertexSet::full(5).minus(spec.dag.descendants(v)).minus(pa);
      nd.remove(v);
      if (nd.empty()) continue;
      CHECK(ci_oracle_rays(sum_rays, VertexSet::single(v), nd, pa).holds);
    }
  }
}

TEST_CASE("empty-arc dag gives full independence") {
  Dag iso(3);
  RayMeasure m = from_maxlinear(MaxLinearSpec(iso));
  CHECK(ci_oracle_rays(m, VertexSet::of({0}), VertexSet::of({1, 2}), VertexSet()).holds);
  CHECK(ci_oracle_rays(m, VertexSet::of({0}), VertexSet::of({1}), VertexSet::of({2})).holds);
}

TEST_CASE("standardize_margins normalizes the marginal tails") {
  RayMeasure m(2, 1.0, {{{1, 0}, 2.0}, {{0, 1}, 2.0}});
  RayMeasure s = standardize_margins(m);
  CHECK(s.marginal_tail(0, 1.0) == doctest::Approx(1.0));
  CHECK(s.marginal_tail(1, 1.0) == doctest::Approx(1.0));

  RayMeasure single(2, 1.0, {{{1, 1}, 1.0}});
  RayMeasure s2 = standardize_margins(single);
  CHECK(s2.rays()[0].dir[0] == doctest::Approx(1.0));
  CHECK(s2.rays()[0].dir[1] == doctest::Approx(1.0));

  RayMeasure uncharged(2, 1.0, {{{1, 0}, 1.0}});
  CHECK_THROWS_AS(standardize_margins(uncharged), InputError);
}

TEST_CASE("standardization preserves oracle verdicts") {
  CounterRng rng(80, 0);
  for (int trial = 0; trial < 20; ++trial) {
    MaxLinearSpec spec = random_recursive(rng, 4);
    RayMeasure m = from_maxlinear(spec);
    RayMeasure s = standardize_margins(m);
    for (int rep = 0; rep < 10; ++rep) {
      VertexSet a, b, c;
      for (int v = 0; v < 4; ++v) {
        double r = rng.next_uniform();
        if (r < 0.3)
          a.add(v);
        else if (r < 0.6)
          b.add(v);
        else if (r < 0.8)
          c.add(v);
      }
      if (a.empty() || b.empty()) continue;
      CHECK(ci_oracle_rays(m, a, b, c).holds == ci_oracle_rays(s, a, b, c).holds);
    }
  }
}

TEST_CASE("chi on rays") {
  RayMeasure shared(2, 1.0, {{{1, 1}, 1.0}});
  CHECK(chi_rays(shared, 0, 1) == doctest::Approx(1.0));

  RayMeasure axes(2, 1.0, {{{1, 0}, 1.0}, {{0, 1}, 1.0}});
  CHECK(chi_rays(axes, 0, 1) == doctest::Approx(0.0));

  RayMeasure mixed(2, 1.0, {{{1, 0.5}, 1.0}, {{0, 0.5}, 1.0}});
  CHECK(chi_rays(mixed, 0, 1) == doctest::Approx(0.5));

  RayMeasure unstd(2, 1.0, {{{2, 2}, 1.0}});
  CHECK_THROWS_AS(chi_rays(unstd, 0, 1), InputError);
}

TEST_CASE("homogeneity of box masses") {
  CounterRng rng(81, 0);
  RayMeasure m = from_maxlinear(chain_spec(3, 1.7, 2.0));
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<double> x = {0.5 + rng.next_uniform(), 0.5 + rng.next_uniform(),
                             0.5 + rng.next_uniform()};
    double t = 0.5 + 2.0 * rng.next_uniform();
    std::vector<double> tx = x;
    for (double& v : tx) v *= t;
    CHECK(m.mass_outside_box(tx) ==
          doctest::Approx(std::pow(t, -m.alpha()) * m.mass_outside_box(x)).epsilon(1e-12));
  }
}
