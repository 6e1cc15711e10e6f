#ifndef LGM_REPORT_HPP_
#define LGM_REPORT_HPP_

#include <optional>
#include <string>
#include <vector>

#include "lgm/vertex_set.hpp"

namespace lgm {

// Witness of a failed conditional-independence check: the offending test set
// (per-axis value subsets over the queried coordinates), the conditioning
// value it failed at, and the factorization defect.
struct CIWitness {
  std::vector<int> axes;                        // queried coordinates, increasing
  std::vector<std::vector<double>> test_set;    // per-axis value subsets
  std::vector<double> cond_value;               // aligned with the c-axes
  double defect = 0.0;
  std::string detail;
};

struct CIReport {
  VertexSet a, b, c;
  bool holds = false;
  double max_defect = 0.0;  // for tolerance-based checks
  std::optional<CIWitness> witness;
};

// Result of sweeping a family of CI statements (semi-graphoid axioms, Markov
// properties, factorization checks).
struct MarkovAudit {
  struct Item {
    std::string description;
    bool holds = true;
    double defect = 0.0;
    std::string detail;
  };
  std::vector<Item> items;
  bool all_hold = true;

  void record(Item item) {
    all_hold = all_hold && item.holds;
    items.push_back(std::move(item));
  }
  std::vector<Item> violations() const {
    std::vector<Item> out;
    for (const auto& it : items)
      if (!it.holds) out.push_back(it);
    return out;
  }
};

}  // namespace lgm

#endif  // LGM_REPORT_HPP_
