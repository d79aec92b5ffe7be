#include "qgraph/floquet.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qg {

FloquetModel::FloquetModel(PeriodicGraph g, int slices, double guard)
    : graph_(std::move(g)), guard_(guard) {
  graph_.validate();
  edges_.reserve(graph_.edges.size());
  for (const auto& e : graph_.edges) edges_.emplace_back(graph_.edge_potential(e), slices);
  for (const auto& d : graph_.dangling) dangling_.emplace_back(graph_.dangling_potential(d), slices);
}

EdgeSpectral FloquetModel::edge_spectral(std::size_t i, cplx lambda) const {
  return edges_.at(i).spectral(lambda);
}

bool FloquetModel::guard_ok(cplx lambda) const {
  for (const auto& e : edges_)
    if (!(std::abs(e.spectral(lambda).s) > guard_)) return false;
  for (std::size_t i = 0; i < dangling_.size(); ++i) {
    const EdgeSpectral sp = dangling_[i].spectral(lambda);
    const cplx d = graph_.dangling[i].end == EndCondition::neumann ? sp.s_prime : sp.s;
    if (!(std::abs(d) > guard_)) return false;
  }
  return true;
}

FloquetMatrix FloquetModel::reduced_matrix(cplx lambda) const {
  std::vector<std::string> order;
  for (const auto& v : graph_.vertices) order.push_back(v.id);
  return reduced_matrix(lambda, order);
}

FloquetMatrix FloquetModel::reduced_matrix(cplx lambda,
                                           const std::vector<std::string>& vertex_order) const {
  const int m = static_cast<int>(graph_.vertices.size());
  if (static_cast<int>(vertex_order.size()) != m) throw ShapeError("vertex order has wrong length");
  std::map<std::string, int> pos;
  for (int i = 0; i < m; ++i) pos[vertex_order[i]] = i;
  for (const auto& v : graph_.vertices)
    if (!pos.count(v.id)) throw ShapeError(fmt::format("vertex order misses '{}'", v.id));

  const int n = graph_.rank;
  FloquetMatrix out{lambda, vertex_order, LaurentMatrix(m, n)};
  LaurentMatrix& M = out.matrix;
  const Exponent origin(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    const Edge& e = graph_.edges[k];
    const EdgeSpectral sp = edges_[k].spectral(lambda);
    if (!(std::abs(sp.s) > guard_))
      throw PoleError(fmt::format("edges[{}] ({} -> {})", k, e.tail, e.head), std::abs(sp.s));
    const int v = pos.at(e.tail);
    const int w = pos.at(e.head);
    Exponent minus(e.shift.size());
    for (std::size_t i = 0; i < e.shift.size(); ++i) minus[i] = -e.shift[i];
    M(v, w).add_term(e.shift, 1.0 / sp.s);
    M(w, v).add_term(minus, 1.0 / sp.s);
    M(v, v).add_term(origin, -sp.c / sp.s);
    M(w, w).add_term(origin, -sp.s_prime / sp.s);
  }
  for (std::size_t k = 0; k < dangling_.size(); ++k) {
    const DanglingEdge& d = graph_.dangling[k];
    const EdgeSpectral sp = dangling_[k].spectral(lambda);
    const bool neumann = d.end == EndCondition::neumann;
    const cplx denom = neumann ? sp.s_prime : sp.s;
    if (!(std::abs(denom) > guard_))
      throw PoleError(fmt::format("dangling[{}] at {}", k, d.vertex), std::abs(denom));
    M(pos.at(d.vertex), pos.at(d.vertex)).add_term(origin, neumann ? -sp.c_prime / denom : -sp.c / denom);
  }
  for (const auto& v : graph_.vertices) M(pos.at(v.id), pos.at(v.id)).add_term(origin, -v.alpha);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) M(i, j).normalize();
  return out;
}

LaurentPoly FloquetModel::dispersion_poly(cplx lambda) const {
  return lp_det(reduced_matrix(lambda).matrix);
}

FloquetMatrix reduced_matrix(const PeriodicGraph& g, cplx lambda, int slices) {
  return FloquetModel(g, slices).reduced_matrix(lambda);
}

LaurentPoly dispersion_poly(const PeriodicGraph& g, cplx lambda, int slices) {
  return FloquetModel(g, slices).dispersion_poly(lambda);
}

std::vector<FermiRow> fermi_slice(const PeriodicGraph& g, double lambda, int grid, int slices) {
  if (g.rank != 2) throw DomainError("fermi slices need a rank-2 graph");
  if (grid < 2) throw DomainError("fermi grid needs at least 2 points per axis");
  const LaurentPoly d = dispersion_poly(g, lambda, slices);
  std::vector<FermiRow> rows;
  rows.reserve(static_cast<std::size_t>(grid) * grid);
  const double pi = std::numbers::pi;
  for (int i = 0; i < grid; ++i) {
    const double k1 = -pi + 2.0 * pi * i / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double k2 = -pi + 2.0 * pi * j / (grid - 1);
      const double v = std::abs(d.evaluate({std::polar(1.0, k1), std::polar(1.0, k2)}));
      rows.push_back({k1, k2, v, std::log10(v)});
    }
  }
  return rows;
}

std::string fermi_csv(const std::vector<FermiRow>& rows) {
  std::string out = "k1,k2,absD,log10absD\n";
  for (const auto& r : rows)
    out += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", r.k1, r.k2, r.abs_d, r.log10_abs_d);
  return out;
}

}  // namespace qg
