#ifndef LGM_JSON_IO_HPP_
#define LGM_JSON_IO_HPP_

#include <string>
#include <vector>

#include <json.hpp>

#include "lgm/atomic.hpp"
#include "lgm/graph.hpp"
#include "lgm/grid.hpp"
#include "lgm/hr.hpp"
#include "lgm/rays.hpp"
#include "lgm/report.hpp"

namespace lgm {

using Json = nlohmann::json;

Json load_json_file(const std::string& path);

// Graphs carry external vertex names; everything else addresses coordinates
// by 1-based index.
struct NamedGraph {
  UndirectedGraph graph = UndirectedGraph(0);
  std::vector<std::string> names;
};
struct NamedDag {
  Dag dag = Dag(0);
  std::vector<std::string> names;
};

NamedGraph parse_undirected(const Json& j);
NamedDag parse_dag(const Json& j);
AtomicMeasure parse_atomic(const Json& j);
RayMeasure parse_rays(const Json& j);
MaxLinearSpec parse_maxlinear(const Json& j);
GridMeasure parse_grid(const Json& j);
HRForestSpec parse_hr_forest(const Json& j);

Json grid_to_json(const GridMeasure& m);
Json rays_to_json(const RayMeasure& m);
Json ci_report_to_json(const CIReport& r);
Json audit_to_json(const MarkovAudit& a);
Json matrix_to_json(const std::vector<std::vector<double>>& m);

VertexSet parse_index_set(const std::string& csv, int d);  // "1,3" -> {0,2}

}  // namespace lgm

#endif  // LGM_JSON_IO_HPP_
