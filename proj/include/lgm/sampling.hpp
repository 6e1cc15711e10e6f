#ifndef LGM_SAMPLING_HPP_
#define LGM_SAMPLING_HPP_

#include <cstdint>
#include <vector>

#include "lgm/rays.hpp"
#include "lgm/vertex_set.hpp"

namespace lgm {

// Counter-based random stream: each draw hashes (seed, stream, counter), so
// samples are reproducible independently of evaluation order or threading.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  double next_uniform();  // strictly inside (0, 1)

 private:
  std::uint64_t seed_, stream_, counter_ = 0;
};

// Row-major n x d sample matrix.
struct SampleMatrix {
  int n = 0, d = 0;
  std::vector<double> data;

  double at(int row, int col) const { return data[static_cast<std::size_t>(row) * d + col]; }
  std::vector<double> column(int col) const;
};

// Draws n independent vectors X_i = max_j gamma_ij eps_j with one stream per
// row; deterministic for a fixed (spec, n, seed).
SampleMatrix sample_maxlinear(const MaxLinearSpec& spec, int n, std::uint64_t seed);

// Samples Y ~ P_{R_{v,1}} of a ray measure: ray J with probability
// proportional to c_j * w_vj^alpha among rays charging v, radius Pareto(alpha)
// from 1/w_vJ, Y = T * w_J.
SampleMatrix sample_pareto_conditional(const RayMeasure& m, int v, int n, std::uint64_t seed);

struct EmpiricalChi {
  double value = 0.0;
  double stderr_ = 0.0;
  long joint = 0, marginal = 0;
};

// Ratio of joint over marginal exceedance counts at the empirical q-quantile.
EmpiricalChi empirical_chi(const SampleMatrix& samples, int i, int j, double q);

struct CiTestOptions {
  int bins = 4;        // quantile bins for the a- and b-axes
  int cond_bins = 12;  // finer binning for the conditioning axes
  int permutations = 500;
  std::uint64_t seed = 1;
};

// Heuristic statistical validator (never an oracle): conditional mutual
// information on quantile-binned coordinates (zeros form their own bin),
// permutation null within the strata of the c-bin profile.
double empirical_ci_test(const SampleMatrix& samples, VertexSet a, VertexSet b, VertexSet c,
                         const CiTestOptions& opts = {});

}  // namespace lgm

#endif  // LGM_SAMPLING_HPP_
