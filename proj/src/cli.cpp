#include "qgraph/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/floquet.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/reducibility.hpp"
#include "qgraph/riemann.hpp"

namespace qg {

namespace {

constexpr int kMonodromyPoints = 256;
constexpr double kMonodromyRadius = 0.5;

struct Output {
  std::string text;
};

Potential single_potential(const RunConfig& cfg) {
  if (cfg.potentials.size() != 1)
    throw DomainError(fmt::format("command '{}' needs exactly one --potential", cfg.command));
  return resolve_potential(cfg.potentials.front());
}

BuiltinModel load_model(const RunConfig& cfg) {
  if (cfg.graph_path && cfg.builtin) throw DomainError("give either --graph or --builtin, not both");
  if (!cfg.graph_path && !cfg.builtin)
    throw DomainError(fmt::format("command '{}' needs --graph or --builtin", cfg.command));
  BuiltinModel model = cfg.graph_path ? parse_graph_spec(*cfg.graph_path) : builtin_graph(*cfg.builtin);

  PeriodicGraph& layer = std::holds_alternative<PeriodicGraph>(model)
                             ? std::get<PeriodicGraph>(model)
                             : std::get<BilayerSpec>(model).layer;
  // Layer potentials are overridden in name order.
  if (!cfg.potentials.empty()) {
    if (cfg.potentials.size() != 1 && cfg.potentials.size() != layer.potentials.size())
      throw DomainError(fmt::format("--potential given {} times; layer has {} potentials",
                                    cfg.potentials.size(), layer.potentials.size()));
    std::size_t i = 0;
    for (auto& [name, p] : layer.potentials) {
      p = resolve_potential(cfg.potentials[cfg.potentials.size() == 1 ? 0 : i]);
      ++i;
    }
  }
  // Connectors are overridden in layer vertex order; a plain graph becomes a bilayer.
  if (!cfg.connectors.empty()) {
    const std::size_t nv = layer.vertices.size();
    if (cfg.connectors.size() != 1 && cfg.connectors.size() != nv)
      throw DomainError(fmt::format("--connector given {} times; layer has {} vertices",
                                    cfg.connectors.size(), nv));
    BilayerSpec spec;
    spec.layer = layer;
    for (std::size_t i = 0; i < nv; ++i)
      spec.connectors.insert_or_assign(layer.vertices[i].id,
                                       resolve_potential(cfg.connectors[cfg.connectors.size() == 1 ? 0 : i]));
    model = std::move(spec);
  }
  return model;
}

BilayerSpec require_bilayer(const RunConfig& cfg) {
  BuiltinModel m = load_model(cfg);
  if (!std::holds_alternative<BilayerSpec>(m))
    throw DomainError(fmt::format("command '{}' needs a bilayer (connectors or --connector)", cfg.command));
  return std::get<BilayerSpec>(m);
}

PeriodicGraph require_graph(const RunConfig& cfg) {
  BuiltinModel m = load_model(cfg);
  if (auto* spec = std::get_if<BilayerSpec>(&m)) return build_bilayer(*spec);
  return std::get<PeriodicGraph>(m);
}

json lambda_json(cplx l) { return to_json(l); }

json edge_report(const Potential& p, cplx lambda, int slices) {
  const DiscretizedEdge edge(p, slices);
  const EdgeSpectral sp = edge.spectral(lambda);
  const Matrix2 t = transfer_matrix(sp);
  const CsResiduals cs = check_csrelations(p, lambda, slices);
  json j;
  j["lambda"] = lambda_json(lambda);
  j["potential"] = to_json(p);
  j["spectral"] = to_json(sp);
  j["abs_s"] = std::abs(sp.s);
  j["transfer_matrix"] = to_json(t);
  j["det_t_plus_one"] = std::abs(t.determinant() + 1.0);
  j["wronskian_residual"] = std::abs(sp.c * sp.s_prime - sp.s * sp.c_prime - 1.0);
  j["csrelations"] = json{{"s_vs_s_tilde", cs.s_vs_s_tilde},
                          {"c_prime_vs_tilde", cs.c_prime_vs_tilde},
                          {"c_vs_s_tilde_prime", cs.c_vs_s_tilde_prime},
                          {"s_prime_vs_c_tilde", cs.s_prime_vs_c_tilde}};
  if (std::abs(sp.s) > kDirichletGuard) {
    j["dtn_matrix"] = to_json(dtn_matrix(sp));
  } else {
    j["dtn_matrix"] = nullptr;
    j["note"] = fmt::format("|s| = {:.17g} is within the Dirichlet guard; DtN matrix omitted",
                            std::abs(sp.s));
  }
  return j;
}

json cmd_edge(const RunConfig& cfg) { return edge_report(single_potential(cfg), cfg.lambda, cfg.slices); }

json cmd_afun(const RunConfig& cfg) {
  const Potential p = single_potential(cfg);
  if (cfg.grid < 2) throw DomainError("--grid must be at least 2");
  const DiscretizedEdge edge(p, cfg.slices);
  json samples = json::array();
  const double step = (cfg.lambda_max - cfg.lambda.real()) / (cfg.grid - 1);
  for (int k = 0; k < cfg.grid; ++k) {
    const cplx l = cfg.lambda + cplx(step * k, 0.0);
    const EdgeSpectral sp = edge.spectral(l);
    samples.push_back(json{{"lambda", to_json(l)},
                           {"a", to_json(sp.a)},
                           {"b", to_json(sp.b)},
                           {"mu", to_json(mu_branches(sp.a).first)}});
  }
  double max_a = 0.0;
  for (cplx l : default_class_grid()) max_a = std::max(max_a, std::abs(edge.spectral(l).a));
  return json{{"potential", to_json(p)},
              {"max_abs_a_on_class_grid", max_a},
              {"symmetric", max_a < cfg.tol},
              {"samples", samples}};
}

json cmd_classes(const RunConfig& cfg) {
  if (cfg.potentials.size() < 2) throw DomainError("command 'classes' needs at least two --potential");
  std::vector<Potential> ps;
  for (const auto& name : cfg.potentials) ps.push_back(resolve_potential(name));
  const std::vector<cplx> grid = default_class_grid();
  json entries = json::array();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const DiscretizedEdge edge(ps[i], cfg.slices);
    json a_vals = json::array();
    for (cplx l : grid) a_vals.push_back(to_json(edge.spectral(l).a));
    entries.push_back(json{{"name", cfg.potentials[i]},
                           {"a_on_class_grid", a_vals},
                           {"dirichlet_eigenvalues", dirichlet_eigenvalues(ps[i], cfg.lambda_max, cfg.slices)}});
  }
  json same = json::array();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < ps.size(); ++j)
      row.push_back(i == j || same_asymmetry_class(ps[i], ps[j], grid, cfg.tol, cfg.slices));
    same.push_back(row);
  }
  json g = json::array();
  for (cplx l : grid) g.push_back(to_json(l));
  return json{{"class_grid", g}, {"potentials", entries}, {"same_class", same}};
}

json cmd_dispersion(const RunConfig& cfg) {
  const FloquetModel model(require_graph(cfg), cfg.slices);
  const FloquetMatrix fm = model.reduced_matrix(cfg.lambda);
  json entries = json::array();
  for (int i = 0; i < fm.matrix.size(); ++i) {
    json row = json::array();
    for (int k = 0; k < fm.matrix.size(); ++k) row.push_back(to_json(fm.matrix(i, k)));
    entries.push_back(row);
  }
  return json{{"lambda", lambda_json(cfg.lambda)},
              {"vertex_order", fm.vertex_order},
              {"reduced_matrix", entries},
              {"dispersion", to_json(lp_det(fm.matrix))}};
}

json cmd_factor(const RunConfig& cfg) {
  const BilayerSpec spec = require_bilayer(cfg);
  const FactorReport r = SameClassFactorizer(spec, cfg.slices)(cfg.lambda);
  json j = to_json(r);
  j["full"] = to_json(r.full);
  j["passes"] = r.product_residual < cfg.tol;
  return j;
}

json cmd_graphene(const RunConfig& cfg) {
  const GrapheneReducer reducer(require_bilayer(cfg), cfg.slices);
  const GrapheneReport r = reducer(cfg.lambda);
  json j = to_json(r);
  j["vertex_order"] = reducer.vertex_order();
  j["w"] = to_json(r.w);
  j["w_prime"] = to_json(r.w_prime);
  j["reduced"] = to_json(r.reduced);
  return j;
}

json cmd_square7(const RunConfig& cfg) {
  return to_json(Square7Analyzer(require_bilayer(cfg), cfg.slices, cfg.tol)(cfg.lambda));
}

std::string cmd_fermi(const RunConfig& cfg) {
  if (cfg.lambda.imag() != 0.0) throw DomainError("fermi slices need a real lambda (--im 0)");
  return fermi_csv(fermi_slice(require_graph(cfg), cfg.lambda.real(), cfg.grid, cfg.slices));
}

json rami_report(const Potential& p, double radius, int slices) {
  const Region region{-radius, radius, -radius, radius};
  const std::vector<BranchPoint> pts = branch_points(p, region, slices);
  json list = json::array();
  for (const auto& bp : pts) {
    const DerivativeCheck d = a_derivative_at_branch(p, bp.lambda0, slices);
    const std::vector<cplx> mus = continue_mu(p, circle_path(bp.lambda0, kMonodromyRadius, kMonodromyPoints), 1, slices);
    list.push_back(json{{"lambda0", to_json(bp.lambda0)},
                        {"sign", bp.sign},
                        {"newton_residual", bp.newton_residual},
                        {"derivative_formula", to_json(d.formula_value)},
                        {"derivative_fd", to_json(d.fd_value)},
                        {"derivative_relative_error", d.relative_error()},
                        {"psi_square_integral", to_json(psi_square_integral(DiscretizedEdge(p, slices), bp.lambda0))},
                        {"monodromy_initial", to_json(mus.front())},
                        {"monodromy_final", to_json(mus.back())},
                        {"branch_flipped", std::abs(mus.back() + mus.front()) < std::abs(mus.back() - mus.front())}});
  }
  json region_j{{"re_min", region.re_min}, {"re_max", region.re_max}, {"im_min", region.im_min}, {"im_max", region.im_max}};
  return json{{"potential", to_json(p)},
              {"region", region_j},
              {"branch_points", list},
              {"generic", genericity_holds(genericity_check(p, region, slices))}};
}

json cmd_rami(const RunConfig& cfg) {
  if (!(cfg.radius > 0.0)) throw DomainError("--radius must be positive");
  return rami_report(single_potential(cfg), cfg.radius, cfg.slices);
}

json cmd_decorated(const RunConfig& cfg) {
  const BilayerSpec spec = require_bilayer(cfg);
  const Potential& connector = spec.connectors.begin()->second;
  for (const auto& [v, p] : spec.connectors)
    if (!(p == connector)) throw DomainError("decorated comparison needs one common connector potential");
  json j = to_json(decorated_equivalence(spec.layer, connector, cfg.lambda, cfg.slices));
  j["passes"] = j["neumann_residual"].get<double>() < cfg.tol && j["dirichlet_residual"].get<double>() < cfg.tol;
  return j;
}

json cmd_export(const RunConfig& cfg) {
  BuiltinModel m = load_model(cfg);
  return std::visit([](const auto& g) { return to_json(g); }, m);
}

BilayerSpec with_connectors(const std::string& builtin, const std::vector<std::string>& names) {
  BilayerSpec spec = std::get<BilayerSpec>(builtin_graph(builtin));
  std::size_t i = 0;
  for (const auto& v : spec.layer.vertices) spec.connectors.insert_or_assign(v.id, builtin_potential(names[i++]));
  return spec;
}

// Fixed workload; output depends only on `slices`.
json cmd_suite(const RunConfig& cfg) {
  const int n = cfg.slices;
  json j;
  json edges = json::array();
  for (const auto& name : builtin_potential_names())
    for (cplx l : {cplx(2.5, 0.0), cplx(10.0, 3.0), cplx(-4.0, 0.0)}) {
      json e = edge_report(builtin_potential(name), l, n);
      e["name"] = name;
      edges.push_back(e);
    }
  j["edges"] = edges;

  RunConfig c = cfg;
  c.potentials = builtin_potential_names();
  j["classes"] = cmd_classes(c);

  json factor = json::array();
  const SameClassFactorizer fs(with_connectors("bilayer_square", {"step"}), n);
  const SameClassFactorizer fg(with_connectors("graphene_bilayer", {"trig", "trig"}), n);
  for (cplx l : {cplx(1.3, 0.2), cplx(7.1, 0.0), cplx(-2.0, 1.5)}) {
    factor.push_back(json{{"model", "bilayer_square"}, {"report", to_json(fs(l))}});
    factor.push_back(json{{"model", "graphene_bilayer"}, {"report", to_json(fg(l))}});
  }
  j["factor"] = factor;

  json decorated = json::array();
  for (cplx l : {cplx(1.3, 0.2), cplx(5.5, -1.0)})
    decorated.push_back(to_json(decorated_equivalence(std::get<PeriodicGraph>(builtin_graph("square_lattice")),
                                                      builtin_potential("well"), l, n)));
  j["decorated"] = decorated;

  json graphene = json::array();
  const GrapheneReducer gr(with_connectors("graphene_bilayer", {"step", "zero"}), n);
  for (cplx l : {cplx(2.2, 0.0), cplx(5.0, 1.0)}) graphene.push_back(to_json(gr(l)));
  j["graphene"] = graphene;

  json square7 = json::array();
  const Square7Analyzer sq(with_connectors("bilayer_double_square_7", {"step", "zero"}), n, cfg.tol);
  for (cplx l : {cplx(3.3, 0.0), cplx(8.1, 0.5)}) square7.push_back(to_json(sq(l)));
  j["square7"] = square7;

  j["branch_points"] = rami_report(builtin_potential("step"), 25.0, n);

  json f0 = json::array();
  for (const auto& [z1, z2] : f0_intersection()) f0.push_back(json::array({to_json(z1), to_json(z2)}));
  j["f0_intersection"] = f0;

  const std::vector<FermiRow> rows =
      fermi_slice(std::get<PeriodicGraph>(builtin_graph("square_lattice")), std::numbers::pi * std::numbers::pi / 4.0, 9, n);
  json fermi = json::array();
  for (const auto& r : rows) fermi.push_back(json::array({r.k1, r.k2, r.abs_d}));
  j["fermi_square_zero"] = fermi;
  return j;
}

void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + fmt::format(".tmp{}", static_cast<long>(::getpid()));
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DomainError(fmt::format("cannot write '{}'", tmp.string()));
    f << text;
    f.flush();
    if (!f) throw DomainError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw DomainError(fmt::format("cannot move output into '{}': {}", path, ec.message()));
  }
}

std::string dispatch(const RunConfig& cfg) {
  const std::string& c = cfg.command;
  if (c == "fermi") return cmd_fermi(cfg);
  json j;
  if (c == "edge") j = cmd_edge(cfg);
  else if (c == "afun") j = cmd_afun(cfg);
  else if (c == "classes") j = cmd_classes(cfg);
  else if (c == "dispersion") j = cmd_dispersion(cfg);
  else if (c == "factor") j = cmd_factor(cfg);
  else if (c == "graphene") j = cmd_graphene(cfg);
  else if (c == "square7") j = cmd_square7(cfg);
  else if (c == "rami") j = cmd_rami(cfg);
  else if (c == "decorated") j = cmd_decorated(cfg);
  else if (c == "export") j = cmd_export(cfg);
  else if (c == "suite") j = cmd_suite(cfg);
  return j.dump(2) + "\n";
}

}  // namespace

std::vector<std::string> command_names() {
  return {"edge",  "afun",  "classes",   "dispersion", "factor", "graphene",
          "square7", "fermi", "rami", "decorated", "export", "suite"};
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto names = command_names();
  if (std::find(names.begin(), names.end(), cfg.command) == names.end()) {
    err << fmt::format("unknown command '{}'; expected one of: {}\n", cfg.command, fmt::join(names, ", "));
    return kExitUsage;
  }
  try {
    if (cfg.slices < 1) throw DomainError("--slices must be positive");
    if (!(cfg.tol > 0.0)) throw DomainError("--tol must be positive");
    const std::string text = dispatch(cfg);
    if (cfg.out_path) write_atomically(*cfg.out_path, text);
    else out << text;
    return kExitOk;
  } catch (const SchemaError& e) {
    for (const auto& m : e.messages()) err << "schema error: " << m << "\n";
    return kExitDomain;
  } catch (const PoleError& e) {
    err << fmt::format("refused: {} (pole magnitude {:.3g})\n", e.what(), e.magnitude());
    return kExitPole;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral analysis of periodic and bilayer quantum graphs"};
  RunConfig cfg;
  double re = 0.0;
  double im = 0.0;
  std::string graph;
  std::string builtin;
  std::string out_path;
  app.add_option("command", cfg.command, fmt::format("One of: {}", fmt::join(command_names(), ", ")))->required();
  app.add_option("--graph", graph, "Graph-spec JSON file");
  app.add_option("--builtin", builtin, "Builtin graph name");
  app.add_option("--potential", cfg.potentials, "Builtin potential name or potential JSON file (repeatable)");
  app.add_option("--connector", cfg.connectors, "Connector potential, one per layer vertex or one for all");
  app.add_option("--re", re, "Real part of lambda");
  app.add_option("--im", im, "Imaginary part of lambda");
  app.add_option("--grid", cfg.grid, "Grid points (per axis for fermi)");
  app.add_option("--slices", cfg.slices, "Slices per unit length");
  app.add_option("--tol", cfg.tol, "Tolerance for pass/fail verdicts");
  app.add_option("--radius", cfg.radius, "Half-width of the branch-point search square");
  app.add_option("--lambda-max", cfg.lambda_max, "Upper end of real sweeps and eigenvalue lists");
  app.add_option("--out", out_path, "Output file (written atomically)");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return kExitUsage;
  }
  cfg.lambda = cplx(re, im);
  if (!graph.empty()) cfg.graph_path = graph;
  if (!builtin.empty()) cfg.builtin = builtin;
  if (!out_path.empty()) cfg.out_path = out_path;
  const int code = run(cfg, out, err);
  if (code == kExitUsage) err << app.help();
  return code;
}

}  // namespace qg
