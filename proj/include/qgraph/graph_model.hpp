#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qgraph/edge_spectral.hpp"
#include "qgraph/potential.hpp"

namespace qg {

struct Vertex {
  std::string id;
  double alpha = 0.0;  // Robin constant: sum of inward derivatives = alpha * f(v)

  bool operator==(const Vertex&) const = default;
};

/// Edge from `tail` in the fundamental domain to the copy of `head` shifted by `shift`.
/// The potential is parameterized from tail (x = 0) to head (x = length).
struct Edge {
  std::string tail;
  std::string head;
  std::vector<int> shift;
  double length = 1.0;
  std::string potential;  // key into PeriodicGraph::potentials

  bool operator==(const Edge&) const = default;
};

enum class EndCondition { dirichlet, neumann };

const char* to_string(EndCondition e);

/// Edge hanging off `vertex`, x = 0 at the vertex, free end at x = length.
struct DanglingEdge {
  std::string vertex;
  double length = 0.5;
  std::string potential;
  EndCondition end = EndCondition::neumann;

  bool operator==(const DanglingEdge&) const = default;
};

/// Z^n-periodic metric graph, one fundamental domain. Potentials are stored
/// by name; each edge refers to one.
class PeriodicGraph {
 public:
  int rank = 2;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<DanglingEdge> dangling;
  std::map<std::string, Potential> potentials;

  /// Throws SchemaError listing every violated invariant.
  void validate() const;

  int vertex_index(const std::string& id) const;  // -1 when absent
  /// Potential on an edge, resized for zero/constant kinds.
  Potential edge_potential(const Edge& e) const;
  Potential dangling_potential(const DanglingEdge& d) const;
};

/// A layer plus one connector potential per layer vertex.
struct BilayerSpec {
  PeriodicGraph layer;
  std::map<std::string, Potential> connectors;

  void validate() const;
};

/// Suffixes for the two copies of a layer vertex.
std::string layer_vertex_id(const std::string& id, int layer);

/// Vertices "<id>#1" for every layer vertex, then "<id>#2"; connector edge
/// for v runs from v#1 to v#2 with shift 0 and length 1.
PeriodicGraph build_bilayer(const BilayerSpec& spec);

/// Throws DomainError unless the connector is symmetric (a = 0 on a test grid).
PeriodicGraph build_decorated_layer(const PeriodicGraph& layer, const Potential& connector,
                                    EndCondition bc);

using BuiltinModel = std::variant<PeriodicGraph, BilayerSpec>;

/// Builtin names: square_lattice, graphene_layer, graphene_bilayer,
/// double_square_7, and bilayer_square. Layer edges carry `layer_potential`;
/// bilayer connectors default to the zero potential.
BuiltinModel builtin_graph(const std::string& name);
std::vector<std::string> builtin_graph_names();

/// Named potentials used by tests and the CLI: zero, constant, step, trig,
/// well, table.
Potential builtin_potential(const std::string& name);
std::vector<std::string> builtin_potential_names();

/// True iff every edge (and dangling pole set) stays outside the guard at lambda.
bool dirichlet_guard_check(const PeriodicGraph& g, cplx lambda, int slices = kDefaultSlices,
                           double guard = kDirichletGuard);

}  // namespace qg
