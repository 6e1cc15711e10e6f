#include "lgm/cli.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>

#include <CLI11.hpp>

#include "lgm/asymp.hpp"
#include "lgm/errors.hpp"
#include "lgm/json_io.hpp"
#include "lgm/sampling.hpp"

namespace lgm {

namespace {

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

struct CliState {
  std::ostream* out;
  int exit_code = 0;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conditional independence toolkit for exponent and Levy measures"};
  app.require_subcommand(1);

  // ci-atomic
  std::string m_path, a_csv, b_csv, c_csv;
  auto* ci_atomic = app.add_subcommand("ci-atomic", "exact CI oracle for an atomic measure");
  ci_atomic->add_option("--measure", m_path)->required();
  ci_atomic->add_option("--a", a_csv)->required();
  ci_atomic->add_option("--b", b_csv)->required();
  ci_atomic->add_option("--c", c_csv);

  // audit-semigraphoid
  std::string audit_path;
  auto* audit_cmd = app.add_subcommand("audit-semigraphoid", "sweep the semi-graphoid axioms");
  audit_cmd->add_option("--measure", audit_path)->required();

  // faces
  std::string faces_path, faces_graph;
  auto* faces_cmd = app.add_subcommand("faces", "charged faces, optionally bounded by a graph");
  faces_cmd->add_option("--measure", faces_path)->required();
  faces_cmd->add_option("--graph", faces_graph);

  // rays ci / rays chi
  auto* rays_cmd = app.add_subcommand("rays", "ray-measure operations");
  rays_cmd->require_subcommand(1);
  std::string rays_path, rays_a, rays_b, rays_c;
  auto* rays_ci = rays_cmd->add_subcommand("ci", "exact CI oracle for a ray measure");
  rays_ci->add_option("--measure", rays_path)->required();
  rays_ci->add_option("--a", rays_a)->required();
  rays_ci->add_option("--b", rays_b)->required();
  rays_ci->add_option("--c", rays_c);
  std::string chi_path;
  bool chi_standardize = false;
  auto* rays_chi = rays_cmd->add_subcommand("chi", "extremal correlation matrix");
  rays_chi->add_option("--measure", chi_path)->required();
  rays_chi->add_flag("--standardize", chi_standardize);

  // maxlinear verify-markov / simulate
  auto* ml_cmd = app.add_subcommand("maxlinear", "recursive max-linear models");
  ml_cmd->require_subcommand(1);
  std::string ml_spec;
  bool ml_global = false;
  auto* ml_verify = ml_cmd->add_subcommand("verify-markov", "directed Markov sweep");
  ml_verify->add_option("--spec", ml_spec)->required();
  ml_verify->add_flag("--global", ml_global);
  std::string sim_spec, sim_out;
  int sim_n = 10000;
  std::uint64_t sim_seed = 1;
  auto* ml_sim = ml_cmd->add_subcommand("simulate", "draw samples");
  ml_sim->add_option("--spec", sim_spec)->required();
  ml_sim->add_option("-n,--n", sim_n);
  ml_sim->add_option("--seed", sim_seed);
  ml_sim->add_option("--out", sim_out);

  // grid ci-check / hc-check
  auto* grid_cmd = app.add_subcommand("grid", "grid-density factorization checks");
  grid_cmd->require_subcommand(1);
  std::string gci_path, gci_a, gci_b, gci_c;
  double gci_tol = 1e-8;
  auto* grid_ci = grid_cmd->add_subcommand("ci-check", "modified-density CI factorization");
  grid_ci->add_option("--measure", gci_path)->required();
  grid_ci->add_option("--a", gci_a)->required();
  grid_ci->add_option("--b", gci_b)->required();
  grid_ci->add_option("--c", gci_c);
  grid_ci->add_option("--tol", gci_tol);
  std::string ghc_path, ghc_graph;
  double ghc_tol = 1e-8;
  auto* grid_hc = grid_cmd->add_subcommand("hc-check", "Hammersley-Clifford factorization");
  grid_hc->add_option("--measure", ghc_path)->required();
  grid_hc->add_option("--graph", ghc_graph)->required();
  grid_hc->add_option("--tol", ghc_tol);

  // hr chi / build
  auto* hr_cmd = app.add_subcommand("hr", "Husler-Reiss forest models");
  hr_cmd->require_subcommand(1);
  std::string hrchi_spec;
  bool hr_numeric = false;
  auto* hr_chi = hr_cmd->add_subcommand("chi", "extremal correlation matrix");
  hr_chi->add_option("--spec", hrchi_spec)->required();
  hr_chi->add_flag("--numeric", hr_numeric);
  std::string hrb_spec, hrb_out;
  double hrb_lo = 0.01, hrb_hi = 100.0;
  int hrb_count = 40;
  auto* hr_build = hr_cmd->add_subcommand("build", "grid realization of the forest density");
  hr_build->add_option("--spec", hrb_spec)->required();
  hr_build->add_option("--lo", hrb_lo);
  hr_build->add_option("--hi", hrb_hi);
  hr_build->add_option("--count", hrb_count);
  hr_build->add_option("--out", hrb_out);

  // eta
  double eta_a = 0.5, eta_b = 0.5, eta_umin = 2.0, eta_umax = 4.5;
  int eta_points = 9;
  auto* eta_cmd = app.add_subcommand("eta", "residual tail dependence of the chain construction");
  eta_cmd->add_option("--a", eta_a)->required();
  eta_cmd->add_option("--b", eta_b)->required();
  eta_cmd->add_option("--umin", eta_umin);
  eta_cmd->add_option("--umax", eta_umax);
  eta_cmd->add_option("--points", eta_points);

  // graph count-subgraphs
  auto* graph_cmd = app.add_subcommand("graph", "graph utilities");
  graph_cmd->require_subcommand(1);
  std::string cs_graph;
  auto* count_cmd = graph_cmd->add_subcommand("count-subgraphs", "connected induced subgraphs");
  count_cmd->add_option("--graph", cs_graph)->required();

  std::vector<const char*> argv;
  argv.push_back("lambda-gm");
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (ci_atomic->parsed()) {
      AtomicMeasure m = parse_atomic(load_json_file(m_path));
      CIReport r = ci_oracle(m, parse_index_set(a_csv, m.dimension()),
                             parse_index_set(b_csv, m.dimension()),
                             parse_index_set(c_csv, m.dimension()));
      emit(out, ci_report_to_json(r));
    } else if (audit_cmd->parsed()) {
      AtomicMeasure m = parse_atomic(load_json_file(audit_path));
      emit(out, audit_to_json(semigraphoid_audit(m)));
    } else if (faces_cmd->parsed()) {
      AtomicMeasure m = parse_atomic(load_json_file(faces_path));
      Json j;
      j["faces"] = Json::array();
      for (VertexSet f : charged_faces(m)) {
        Json face = Json::array();
        for (int v : f) face.push_back(v + 1);
        j["faces"].push_back(std::move(face));
      }
      if (!faces_graph.empty()) {
        NamedGraph g = parse_undirected(load_json_file(faces_graph));
        FaceBoundReport rep = face_bound_check(m, g.graph);
        j["face_bound_holds"] = rep.holds;
        j["disconnected_faces"] = Json::array();
        for (VertexSet f : rep.disconnected_faces) {
          Json face = Json::array();
          for (int v : f) face.push_back(v + 1);
          j["disconnected_faces"].push_back(std::move(face));
        }
      }
      emit(out, j);
    } else if (rays_ci->parsed()) {
      RayMeasure m = parse_rays(load_json_file(rays_path));
      CIReport r = ci_oracle_rays(m, parse_index_set(rays_a, m.dimension()),
                                  parse_index_set(rays_b, m.dimension()),
                                  parse_index_set(rays_c, m.dimension()));
      emit(out, ci_report_to_json(r));
    } else if (rays_chi->parsed()) {
      RayMeasure m = parse_rays(load_json_file(chi_path));
      if (chi_standardize) m = standardize_margins(m);
      const int d = m.dimension();
      std::vector<std::vector<double>> chi(static_cast<std::size_t>(d),
                                           std::vector<double>(static_cast<std::size_t>(d), 0.0));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) chi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = chi_rays(m, i, j);
      Json j;
      j["chi"] = matrix_to_json(chi);
      emit(out, j);
    } else if (ml_verify->parsed()) {
      MaxLinearSpec spec = parse_maxlinear(load_json_file(ml_spec));
      MarkovAudit a = verify_directed_markov(spec, ml_global ? MarkovLevel::kGlobal : MarkovLevel::kLocal);
      emit(out, audit_to_json(a));
    } else if (ml_sim->parsed()) {
      MaxLinearSpec spec = parse_maxlinear(load_json_file(sim_spec));
      SampleMatrix s = sample_maxlinear(spec, sim_n, sim_seed);
      auto write_csv = [&](std::ostream& target) {
        for (int col = 0; col < s.d; ++col) target << (col ? "," : "") << "x" << (col + 1);
        target << "\n";
        for (int row = 0; row < s.n; ++row) {
          for (int col = 0; col < s.d; ++col)
            target << (col ? "," : "") << format_g17(s.at(row, col));
          target << "\n";
        }
      };
      if (sim_out.empty()) {
        write_csv(out);
      } else {
        std::ofstream f(sim_out);
        if (!f) throw_input("FileNotFound", "cannot write '" + sim_out + "'");
        write_csv(f);
        Json sidecar;
        sidecar["spec"] = sim_spec;
        sidecar["n"] = sim_n;
        sidecar["seed"] = sim_seed;
        sidecar["columns"] = s.d;
        std::ofstream sf(sim_out + ".meta.json");
        sf << sidecar.dump(2) << "\n";
        Json j;
        j["written"] = sim_out;
        j["sidecar"] = sim_out + ".meta.json";
        emit(out, j);
      }
    } else if (grid_ci->parsed()) {
      GridMeasure m = parse_grid(load_json_file(gci_path));
      CIReport r = ci_check(m, parse_index_set(gci_a, m.dimension()),
                            parse_index_set(gci_b, m.dimension()),
                            parse_index_set(gci_c, m.dimension()), gci_tol);
      emit(out, ci_report_to_json(r));
    } else if (grid_hc->parsed()) {
      GridMeasure m = parse_grid(load_json_file(ghc_path));
      NamedGraph g = parse_undirected(load_json_file(ghc_graph));
      emit(out, audit_to_json(hc_check(m, g.graph, ghc_tol)));
    } else if (hr_chi->parsed()) {
      HRForestSpec spec = parse_hr_forest(load_json_file(hrchi_spec));
      Json j;
      if (hr_numeric) {
        std::vector<std::vector<double>> chi(static_cast<std::size_t>(spec.d),
                                             std::vector<double>(static_cast<std::size_t>(spec.d), 1.0));
        for (int i = 0; i < spec.d; ++i)
          for (int k = 0; k < spec.d; ++k)
            chi[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = chi_quadrature(spec, i, k);
        j["chi"] = matrix_to_json(chi);
        j["method"] = "quadrature";
      } else {
        j["chi"] = matrix_to_json(chi_forest(spec));
        j["method"] = "closed_form";
      }
      emit(out, j);
    } else if (hr_build->parsed()) {
      HRForestSpec spec = parse_hr_forest(load_json_file(hrb_spec));
      std::vector<AxisGrid> grids(static_cast<std::size_t>(spec.d),
                                  AxisGrid::geometric(hrb_lo, hrb_hi, hrb_count));
      GridMeasure m = build_grid(spec, grids);
      Json j = grid_to_json(m);
      if (hrb_out.empty()) {
        emit(out, j);
      } else {
        std::ofstream f(hrb_out);
        if (!f) throw_input("FileNotFound", "cannot write '" + hrb_out + "'");
        f << j.dump(2) << "\n";
        Json note;
        note["written"] = hrb_out;
        emit(out, note);
      }
    } else if (eta_cmd->parsed()) {
      if (eta_points < 4) throw_input("DomainError", "need at least 4 fit points");
      std::vector<double> grid(static_cast<std::size_t>(eta_points));
      for (int k = 0; k < eta_points; ++k)
        grid[static_cast<std::size_t>(k)] = eta_umin + (eta_umax - eta_umin) * k / (eta_points - 1);
      double a = eta_a, b = eta_b;
      double fitted = eta_fit([a, b](double u) { return survival13(a, b, u); }, grid);
      Json j;
      j["closed_form"] = eta13(eta_a, eta_b);
      j["fitted"] = fitted;
      j["umin"] = eta_umin;
      j["umax"] = eta_umax;
      j["points"] = eta_points;
      emit(out, j);
    } else if (count_cmd->parsed()) {
      NamedGraph g = parse_undirected(load_json_file(cs_graph));
      Json j;
      j["count"] = count_connected_subgraphs(g.graph);
      emit(out, j);
    }
  } catch (const ResourceError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lgm
