#include "qgraph/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qg {

const char* to_string(EndCondition e) {
  return e == EndCondition::dirichlet ? "dirichlet" : "neumann";
}

int PeriodicGraph::vertex_index(const std::string& id) const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i].id == id) return static_cast<int>(i);
  return -1;
}

Potential PeriodicGraph::edge_potential(const Edge& e) const {
  return potentials.at(e.potential).with_length(e.length);
}

Potential PeriodicGraph::dangling_potential(const DanglingEdge& d) const {
  return potentials.at(d.potential).with_length(d.length);
}

void PeriodicGraph::validate() const {
  std::vector<std::string> errs;
  if (rank < 1) errs.push_back(fmt::format("rank must be positive, got {}", rank));
  if (vertices.empty()) errs.push_back("graph has no vertices");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& v = vertices[i];
    if (v.id.empty()) errs.push_back(fmt::format("vertices[{}]: empty id", i));
    if (!ids.insert(v.id).second) errs.push_back(fmt::format("vertices[{}]: duplicate id '{}'", i, v.id));
    if (!std::isfinite(v.alpha)) errs.push_back(fmt::format("vertices[{}]: alpha not finite", i));
  }
  auto check_potential = [&](const std::string& where, const std::string& name, double length) {
    auto it = potentials.find(name);
    if (it == potentials.end()) {
      errs.push_back(fmt::format("{}: unknown potential '{}'", where, name));
      return;
    }
    try {
      (void)it->second.with_length(length);
    } catch (const DomainError& e) {
      errs.push_back(fmt::format("{}: {}", where, e.what()));
    }
  };
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const std::string where = fmt::format("edges[{}]", i);
    if (!ids.count(e.tail)) errs.push_back(fmt::format("{}: unknown tail vertex '{}'", where, e.tail));
    if (!ids.count(e.head)) errs.push_back(fmt::format("{}: unknown head vertex '{}'", where, e.head));
    if (static_cast<int>(e.shift.size()) != rank)
      errs.push_back(fmt::format("{}: shift has length {}, rank is {}", where, e.shift.size(), rank));
    if (!(e.length > 0.0) || !std::isfinite(e.length))
      errs.push_back(fmt::format("{}: length must be positive", where));
    const bool zero_shift = std::all_of(e.shift.begin(), e.shift.end(), [](int k) { return k == 0; });
    if (e.tail == e.head && zero_shift)
      errs.push_back(fmt::format("{}: loop at '{}' with zero shift", where, e.tail));
    if (e.length > 0.0) check_potential(where, e.potential, e.length);
  }
  for (std::size_t i = 0; i < dangling.size(); ++i) {
    const auto& d = dangling[i];
    const std::string where = fmt::format("dangling[{}]", i);
    if (!ids.count(d.vertex)) errs.push_back(fmt::format("{}: unknown vertex '{}'", where, d.vertex));
    if (!(d.length > 0.0) || !std::isfinite(d.length))
      errs.push_back(fmt::format("{}: length must be positive", where));
    else
      check_potential(where, d.potential, d.length);
  }
  if (!errs.empty()) throw SchemaError(std::move(errs));
}

void BilayerSpec::validate() const {
  std::vector<std::string> errs;
  try {
    layer.validate();
  } catch (const SchemaError& e) {
    errs = e.messages();
  }
  for (const auto& v : layer.vertices) {
    auto it = connectors.find(v.id);
    if (it == connectors.end())
      errs.push_back(fmt::format("connectors: missing connector for vertex '{}'", v.id));
    else if (it->second.kind() != PotentialKind::zero && it->second.kind() != PotentialKind::constant &&
             std::abs(it->second.length() - 1.0) > 1e-12)
      errs.push_back(fmt::format("connectors.{}: connector length must be 1", v.id));
  }
  for (const auto& [id, p] : connectors)
    if (layer.vertex_index(id) < 0)
      errs.push_back(fmt::format("connectors.{}: no such vertex in layer", id));
  if (!errs.empty()) throw SchemaError(std::move(errs));
}

std::string layer_vertex_id(const std::string& id, int layer) {
  return fmt::format("{}#{}", id, layer);
}

PeriodicGraph build_bilayer(const BilayerSpec& spec) {
  spec.validate();
  const PeriodicGraph& L = spec.layer;
  PeriodicGraph g;
  g.rank = L.rank;
  g.potentials = L.potentials;
  for (int layer : {1, 2})
    for (const auto& v : L.vertices) g.vertices.push_back({layer_vertex_id(v.id, layer), v.alpha});
  for (int layer : {1, 2})
    for (const auto& e : L.edges)
      g.edges.push_back({layer_vertex_id(e.tail, layer), layer_vertex_id(e.head, layer), e.shift,
                         e.length, e.potential});
  for (const auto& d : L.dangling)
    for (int layer : {1, 2})
      g.dangling.push_back({layer_vertex_id(d.vertex, layer), d.length, d.potential, d.end});
  for (const auto& v : L.vertices) {
    const std::string name = "connector:" + v.id;
    g.potentials.insert_or_assign(name, spec.connectors.at(v.id).with_length(1.0));
    g.edges.push_back({layer_vertex_id(v.id, 1), layer_vertex_id(v.id, 2),
                       std::vector<int>(static_cast<std::size_t>(L.rank), 0), 1.0, name});
  }
  return g;
}

PeriodicGraph build_decorated_layer(const PeriodicGraph& layer, const Potential& connector,
                                    EndCondition bc) {
  layer.validate();
  const DiscretizedEdge edge(connector);
  for (cplx lam : default_class_grid()) {
    const EdgeSpectral e = edge.spectral(lam);
    if (std::abs(e.a) > 1e-12 * std::max(1.0, std::abs(e.b)))
      throw DomainError("decorated layer needs a symmetric connector potential");
  }
  PeriodicGraph g = layer;
  const double half = 0.5 * connector.length();
  const std::string name = "dangling";
  g.potentials.insert_or_assign(name, connector.head(half));
  for (const auto& v : layer.vertices) g.dangling.push_back({v.id, half, name, bc});
  return g;
}

namespace {

PeriodicGraph square_lattice() {
  PeriodicGraph g;
  g.rank = 2;
  g.vertices = {{"v", 0.0}};
  g.potentials.emplace("layer", Potential::zero());
  g.edges = {{"v", "v", {1, 0}, 1.0, "layer"}, {"v", "v", {0, 1}, 1.0, "layer"}};
  return g;
}

// Tail v2, head v1: row v2 of the reduced matrix reads w = 1/s_a + z1/s_b + z2/s_c.
PeriodicGraph graphene_layer() {
  PeriodicGraph g;
  g.rank = 2;
  g.vertices = {{"v1", 0.0}, {"v2", 0.0}};
  g.potentials.emplace("qa", Potential::zero());
  g.potentials.emplace("qb", Potential::zero());
  g.potentials.emplace("qc", Potential::zero());
  g.edges = {{"v2", "v1", {0, 0}, 1.0, "qa"},
             {"v2", "v1", {1, 0}, 1.0, "qb"},
             {"v2", "v1", {0, 1}, 1.0, "qc"}};
  return g;
}

// Two unit squares side by side per period: horizontal edges v1-v2 and
// v2-(v1 + e1), vertical self-edges at v1 and v2 with shift e2.
PeriodicGraph double_square_7() {
  PeriodicGraph g;
  g.rank = 2;
  g.vertices = {{"v1", 0.0}, {"v2", 0.0}};
  g.potentials.emplace("layer", Potential::zero());
  g.edges = {{"v1", "v2", {0, 0}, 1.0, "layer"},
             {"v2", "v1", {1, 0}, 1.0, "layer"},
             {"v1", "v1", {0, 1}, 1.0, "layer"},
             {"v2", "v2", {0, 1}, 1.0, "layer"}};
  return g;
}

BilayerSpec bilayer_of(PeriodicGraph layer) {
  BilayerSpec spec;
  for (const auto& v : layer.vertices) spec.connectors.emplace(v.id, Potential::zero());
  spec.layer = std::move(layer);
  return spec;
}

}  // namespace

BuiltinModel builtin_graph(const std::string& name) {
  if (name == "square_lattice") return square_lattice();
  if (name == "graphene_layer") return graphene_layer();
  if (name == "double_square_7") return double_square_7();
  if (name == "graphene_bilayer") return bilayer_of(graphene_layer());
  if (name == "bilayer_square") return bilayer_of(square_lattice());
  if (name == "bilayer_double_square_7") return bilayer_of(double_square_7());
  throw DomainError(fmt::format("unknown builtin graph '{}'", name));
}

std::vector<std::string> builtin_graph_names() {
  return {"square_lattice", "graphene_layer", "graphene_bilayer", "double_square_7",
          "bilayer_square", "bilayer_double_square_7"};
}

Potential builtin_potential(const std::string& name) {
  if (name == "zero") return Potential::zero();
  if (name == "constant") return Potential::constant(3.0);
  if (name == "step") return Potential::piecewise({0.0, 0.5, 1.0}, {5.0, 0.0});
  if (name == "trig") return Potential::trig({0.5, 1.0, 0.3}, {0.8, -0.4});
  if (name == "well") return Potential::piecewise({0.0, 0.25, 0.75, 1.0}, {0.0, 4.0, 0.0});
  if (name == "table") return Potential::table({0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0});
  throw DomainError(fmt::format("unknown builtin potential '{}'", name));
}

std::vector<std::string> builtin_potential_names() {
  return {"zero", "constant", "step", "trig", "well", "table"};
}

bool dirichlet_guard_check(const PeriodicGraph& g, cplx lambda, int slices, double guard) {
  for (const auto& e : g.edges) {
    const EdgeSpectral sp = DiscretizedEdge(g.edge_potential(e), slices).spectral(lambda);
    if (!(std::abs(sp.s) > guard)) return false;
  }
  for (const auto& d : g.dangling) {
    const EdgeSpectral sp = DiscretizedEdge(g.dangling_potential(d), slices).spectral(lambda);
    const cplx denom = d.end == EndCondition::neumann ? sp.s_prime : sp.s;
    if (!(std::abs(denom) > guard)) return false;
  }
  return true;
}

}  // namespace qg
