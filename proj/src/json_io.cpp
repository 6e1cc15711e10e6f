#include "lgm/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

int name_index(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw_input("UnknownVertex", "unknown vertex name '" + name + "'");
  return static_cast<int>(it - names.begin());
}

std::vector<std::string> parse_names(const Json& j) {
  if (!j.contains("vertices") || !j["vertices"].is_array())
    throw_input("ParseError", "graph JSON needs a 'vertices' array");
  std::vector<std::string> names;
  for (const auto& v : j["vertices"]) names.push_back(v.get<std::string>());
  return names;
}

}  // namespace

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input("FileNotFound", "cannot open '" + path + "'");
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw_input("ParseError", std::string("invalid JSON: ") + e.what());
  }
  return j;
}

NamedGraph parse_undirected(const Json& j) {
  NamedGraph out;
  out.names = parse_names(j);
  out.graph = UndirectedGraph(static_cast<int>(out.names.size()));
  if (j.contains("edges")) {
    for (const auto& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2) throw_input("ParseError", "edges must be name pairs");
      out.graph.add_edge(name_index(out.names, e[0].get<std::string>()),
                         name_index(out.names, e[1].get<std::string>()));
    }
  }
  return out;
}

NamedDag parse_dag(const Json& j) {
  NamedDag out;
  out.names = parse_names(j);
  out.dag = Dag(static_cast<int>(out.names.size()));
  if (j.contains("arcs")) {
    for (const auto& e : j["arcs"]) {
      if (!e.is_array() || e.size() != 2) throw_input("ParseError", "arcs must be [parent, child] pairs");
      out.dag.add_arc(name_index(out.names, e[0].get<std::string>()),
                      name_index(out.names, e[1].get<std::string>()));
    }
  }
  out.dag.topological_order();  // acyclicity check
  return out;
}

AtomicMeasure parse_atomic(const Json& j) {
  if (!j.contains("d")) throw_input("ParseError", "measure JSON needs 'd'");
  int d = j["d"].get<int>();
  std::vector<AtomicMeasure::Atom> atoms;
  for (const auto& a : j.value("atoms", Json::array())) {
    AtomicMeasure::Atom atom;
    atom.y = a.at("y").get<std::vector<double>>();
    atom.w = a.at("w").get<double>();
    atoms.push_back(std::move(atom));
  }
  return AtomicMeasure(d, std::move(atoms));
}

RayMeasure parse_rays(const Json& j) {
  if (!j.contains("d")) throw_input("ParseError", "ray JSON needs 'd'");
  int d = j["d"].get<int>();
  double alpha = j.value("alpha", 1.0);
  std::vector<RayMeasure::Ray> rays;
  for (const auto& r : j.value("rays", Json::array())) {
    RayMeasure::Ray ray;
    ray.dir = r.at("dir").get<std::vector<double>>();
    ray.c = r.value("c", 1.0);
    rays.push_back(std::move(ray));
  }
  return RayMeasure(d, alpha, std::move(rays));
}

MaxLinearSpec parse_maxlinear(const Json& j) {
  if (!j.contains("dag")) throw_input("ParseError", "max-linear JSON needs 'dag'");
  NamedDag nd = parse_dag(j["dag"]);
  MaxLinearSpec spec(nd.dag);
  spec.alpha = j.value("alpha", 1.0);
  if (!(spec.alpha > 0.0)) throw_input("AlphaOutOfRange", "alpha must be positive");
  for (const auto& b : j.value("beta", Json::array())) {
    const auto& arc = b.at("arc");
    spec.set_arc(name_index(nd.names, arc[0].get<std::string>()),
                 name_index(nd.names, arc[1].get<std::string>()), b.at("v").get<double>());
  }
  if (j.contains("diag")) {
    for (auto it = j["diag"].begin(); it != j["diag"].end(); ++it)
      spec.set_diag(name_index(nd.names, it.key()), it.value().get<double>());
  }
  if (j.contains("innovations")) {
    for (auto it = j["innovations"].begin(); it != j["innovations"].end(); ++it) {
      int v = name_index(nd.names, it.key());
      const Json& inn = it.value();
      Innovation& target = spec.innovations[static_cast<std::size_t>(v)];
      std::string kind = inn.value("kind", "frechet");
      if (kind == "frechet") {
        target.kind = Innovation::kFrechet;
      } else if (kind == "uniform") {
        target.kind = Innovation::kUniform;
      } else {
        throw_input("UnsupportedInnovation", "innovation kind must be frechet or uniform");
      }
      target.scale = inn.value("scale", 1.0);
    }
  }
  return spec;
}

GridMeasure parse_grid(const Json& j) {
  if (!j.contains("axes")) throw_input("ParseError", "grid JSON needs 'axes'");
  std::vector<AxisGrid> axes;
  for (const auto& a : j["axes"]) axes.push_back(AxisGrid(a.get<std::vector<double>>()));
  GridMeasure m(axes);
  for (const auto& f : j.value("faces", Json::array())) {
    VertexSet face;
    for (int v : f.at("pattern").get<std::vector<int>>()) {
      if (v < 1 || v > m.dimension()) throw_input("UnknownVertex", "face pattern index out of range");
      face.add(v - 1);
    }
    m.set_face(face, f.at("values").get<std::vector<double>>());
  }
  return m;
}

HRForestSpec parse_hr_forest(const Json& j) {
  HRForestSpec spec;
  std::vector<std::string> names;
  if (j.contains("vertices")) {
    for (const auto& v : j["vertices"]) names.push_back(v.get<std::string>());
  } else {
    for (const auto& e : j.value("edges", Json::array())) {
      for (int side = 0; side < 2; ++side) {
        std::string n = e.at("e")[static_cast<std::size_t>(side)].get<std::string>();
        if (std::find(names.begin(), names.end(), n) == names.end()) names.push_back(n);
      }
    }
    // Numeric names sort numerically so that "1","2","10" map predictably.
    bool all_numeric = !names.empty();
    for (const auto& n : names)
      if (n.find_first_not_of("0123456789") != std::string::npos) all_numeric = false;
    if (all_numeric) {
      std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
        return std::stol(a) != std::stol(b) ? std::stol(a) < std::stol(b) : a < b;
      });
    } else {
      std::sort(names.begin(), names.end());
    }
  }
  spec.d = static_cast<int>(names.size());
  for (const auto& e : j.value("edges", Json::array())) {
    HREdge edge;
    edge.i = name_index(names, e.at("e")[0].get<std::string>());
    edge.j = name_index(names, e.at("e")[1].get<std::string>());
    edge.gamma = e.at("gamma").get<double>();
    edge.p = e.value("p", 1.0);
    spec.edges.push_back(edge);
  }
  spec.validate();
  return spec;
}

Json grid_to_json(const GridMeasure& m) {
  Json j;
  j["axes"] = Json::array();
  for (int v = 0; v < m.dimension(); ++v) j["axes"].push_back(m.axis(v).nodes);
  j["faces"] = Json::array();
  for (const auto& [bits, values] : m.faces()) {
    Json f;
    f["pattern"] = Json::array();
    for (int v : VertexSet(bits)) f["pattern"].push_back(v + 1);
    f["values"] = values;
    j["faces"].push_back(std::move(f));
  }
  return j;
}

Json rays_to_json(const RayMeasure& m) {
  Json j;
  j["d"] = m.dimension();
  j["alpha"] = m.alpha();
  j["rays"] = Json::array();
  for (const auto& r : m.rays()) {
    Json rj;
    rj["dir"] = r.dir;
    rj["c"] = r.c;
    j["rays"].push_back(std::move(rj));
  }
  return j;
}

namespace {

Json index_set_to_json(VertexSet s) {
  Json out = Json::array();
  for (int v : s) out.push_back(v + 1);
  return out;
}

}  // namespace

Json ci_report_to_json(const CIReport& r) {
  Json j;
  j["a"] = index_set_to_json(r.a);
  j["b"] = index_set_to_json(r.b);
  j["c"] = index_set_to_json(r.c);
  j["verdict"] = r.holds;
  j["max_defect"] = r.max_defect;
  if (r.witness) {
    Json w;
    w["axes"] = Json::array();
    for (int v : r.witness->axes) w["axes"].push_back(v + 1);
    w["test_set"] = r.witness->test_set;
    w["cond_value"] = r.witness->cond_value;
    w["defect"] = r.witness->defect;
    w["detail"] = r.witness->detail;
    j["witness"] = std::move(w);
  }
  return j;
}

Json audit_to_json(const MarkovAudit& a) {
  Json j;
  j["all_hold"] = a.all_hold;
  j["items"] = Json::array();
  for (const auto& it : a.items) {
    Json item;
    item["description"] = it.description;
    item["holds"] = it.holds;
    item["defect"] = it.defect;
    if (!it.detail.empty()) item["detail"] = it.detail;
    j["items"].push_back(std::move(item));
  }
  return j;
}

Json matrix_to_json(const std::vector<std::vector<double>>& m) {
  Json j = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (double x : row) {
      if (std::isnan(x)) {
        r.push_back(nullptr);  // absent entries (disconnected pairs)
      } else {
        r.push_back(x);
      }
    }
    j.push_back(std::move(r));
  }
  return j;
}

VertexSet parse_index_set(const std::string& csv, int d) {
  VertexSet out;
  if (csv.empty()) return out;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    std::string tok = csv.substr(pos, comma - pos);
    try {
      int v = std::stoi(tok);
      if (v < 1 || v > d) throw_input("UnknownVertex", "index " + tok + " outside 1.." + std::to_string(d));
      out.add(v - 1);
    } catch (const InputError&) {
      throw;
    } catch (const std::exception&) {
      throw_input("ParseError", "bad index '" + tok + "'");
    }
    pos = comma + 1;
  }
  return out;
}

}  // namespace lgm
