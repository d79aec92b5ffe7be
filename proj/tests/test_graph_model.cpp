#include <doctest.h>

#include <numbers>

#include "qgraph/errors.hpp"
#include "qgraph/floquet.hpp"
#include "qgraph/graph_model.hpp"

using namespace qg;

namespace {

PeriodicGraph graph(const std::string& name) { return std::get<PeriodicGraph>(builtin_graph(name)); }
BilayerSpec bilayer(const std::string& name) { return std::get<BilayerSpec>(builtin_graph(name)); }

bool has_message(const SchemaError& e, const std::string& needle) {
  for (const auto& m : e.messages())
    if (m.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("builtin layers") {
  const PeriodicGraph sq = graph("square_lattice");
  CHECK(sq.rank == 2);
  CHECK(sq.vertices.size() == 1);
  CHECK(sq.edges.size() == 2);
  const PeriodicGraph gr = graph("graphene_layer");
  CHECK(gr.vertices.size() == 2);
  CHECK(gr.edges.size() == 3);
  for (const auto& e : gr.edges) CHECK(e.tail != e.head);
  const PeriodicGraph ds = graph("double_square_7");
  CHECK(ds.vertices.size() == 2);
  CHECK(ds.edges.size() == 4);
  CHECK_THROWS_AS(builtin_graph("hexagon"), DomainError);
  for (const auto& name : builtin_graph_names()) CHECK_NOTHROW(builtin_graph(name));
}

TEST_CASE("bilayer construction counts") {
  CHECK(build_bilayer(bilayer("bilayer_square")).edges.size() == 5);
  CHECK(build_bilayer(bilayer("graphene_bilayer")).edges.size() == 8);
  const PeriodicGraph b7 = build_bilayer(bilayer("bilayer_double_square_7"));
  CHECK(b7.edges.size() == 10);
  CHECK(b7.vertices.size() == 4);
  CHECK(b7.vertices[0].id == "v1#1");
  CHECK(b7.vertices[2].id == "v1#2");
  const Edge& conn = b7.edges.back();
  CHECK(conn.tail == "v2#1");
  CHECK(conn.head == "v2#2");
  CHECK(conn.length == 1.0);
  CHECK(conn.shift == std::vector<int>{0, 0});
}

TEST_CASE("bilayer needs every connector") {
  BilayerSpec spec = bilayer("graphene_bilayer");
  spec.connectors.erase("v2");
  try {
    build_bilayer(spec);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(has_message(e, "v2"));
  }
}

TEST_CASE("validation names the offending edge") {
  PeriodicGraph g = graph("square_lattice");
  g.edges.push_back({"v", "w", {1, 1}, 1.0, "layer"});
  g.edges.push_back({"v", "v", {0, 0}, 1.0, "layer"});
  g.edges.push_back({"v", "v", {1}, 1.0, "nope"});
  try {
    g.validate();
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(has_message(e, "edges[2]: unknown head vertex 'w'"));
    CHECK(has_message(e, "edges[3]: loop"));
    CHECK(has_message(e, "edges[4]: shift has length 1"));
    CHECK(has_message(e, "edges[4]: unknown potential 'nope'"));
  }
}

TEST_CASE("decorated layers") {
  const PeriodicGraph sq = graph("square_lattice");
  const PeriodicGraph n = build_decorated_layer(sq, Potential::zero(), EndCondition::neumann);
  REQUIRE(n.dangling.size() == 1);
  CHECK(n.dangling[0].end == EndCondition::neumann);
  CHECK(n.dangling[0].length == 0.5);
  CHECK(n.edges == sq.edges);
  const PeriodicGraph d = build_decorated_layer(sq, Potential::zero(), EndCondition::dirichlet);
  CHECK(d.dangling[0].end == EndCondition::dirichlet);
  CHECK(d.edges == n.edges);
  CHECK_THROWS_AS(build_decorated_layer(sq, builtin_potential("step"), EndCondition::neumann), DomainError);
  const PeriodicGraph w = build_decorated_layer(sq, builtin_potential("well"), EndCondition::neumann);
  const Potential half = w.dangling_potential(w.dangling[0]);
  CHECK(half.length() == 0.5);
  CHECK(half.evaluate(0.1) == 0.0);
  CHECK(half.evaluate(0.4) == 4.0);
}

TEST_CASE("Dirichlet guard") {
  const double pi = std::numbers::pi;
  const PeriodicGraph sq = graph("square_lattice");
  CHECK_FALSE(dirichlet_guard_check(sq, pi * pi));
  CHECK(dirichlet_guard_check(sq, 1.0));

  // One distinct edge at its own Dirichlet eigenvalue.
  PeriodicGraph gr = graph("graphene_layer");
  gr.potentials.at("qb") = builtin_potential("step");
  const double l0 = dirichlet_eigenvalues(builtin_potential("step"), 60.0).front();
  CHECK_FALSE(dirichlet_guard_check(gr, l0));
  CHECK_FALSE(dirichlet_guard_check(gr, pi * pi));
  CHECK(dirichlet_guard_check(gr, 0.5 * (l0 + pi * pi)));
}

TEST_CASE("property: swapping layers and reflecting connectors preserves the dispersion") {
  BilayerSpec spec = bilayer("graphene_bilayer");
  spec.layer.potentials.at("qa") = builtin_potential("trig");
  spec.connectors.at("v1") = builtin_potential("step");
  spec.connectors.at("v2") = builtin_potential("table");
  BilayerSpec swapped = spec;
  for (auto& [v, p] : swapped.connectors) p = p.reflect();
  const PeriodicGraph g1 = build_bilayer(spec);
  const PeriodicGraph g2 = build_bilayer(swapped);
  std::vector<std::string> relabeled;
  for (const auto& v : g2.vertices) {
    const std::string base = v.id.substr(0, v.id.size() - 1);
    relabeled.push_back(base + (v.id.back() == '1' ? "2" : "1"));
  }
  for (cplx l : {cplx(1.7, 0.0), cplx(6.0, 2.0), cplx(-3.0, -1.0)}) {
    const LaurentPoly d1 = FloquetModel(g1).dispersion_poly(l);
    // Vertex (v, 1) of the swapped graph plays the role of (v, 2).
    const LaurentPoly d2 = lp_det(FloquetModel(g2).reduced_matrix(l, relabeled).matrix);
    CHECK(lp_residual(d1, d2) < 1e-8);
  }
}
