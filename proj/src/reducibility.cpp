#include "qgraph/reducibility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/riemann.hpp"

namespace qg {

namespace {

Exponent origin(int n) { return Exponent(static_cast<std::size_t>(n), 0); }

std::vector<DiscretizedEdge> connector_edges(const BilayerSpec& spec, int slices) {
  std::vector<DiscretizedEdge> out;
  for (const auto& v : spec.layer.vertices)
    out.emplace_back(spec.connectors.at(v.id).with_length(1.0), slices);
  return out;
}

EdgeSpectral guarded(const DiscretizedEdge& e, cplx lambda, const std::string& where) {
  EdgeSpectral sp = e.spectral(lambda);
  if (!(std::abs(sp.s) > kDirichletGuard)) throw PoleError(where, std::abs(sp.s));
  return sp;
}

const BilayerSpec& validated(const BilayerSpec& spec) {
  spec.validate();
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------

SameClassFactorizer::SameClassFactorizer(const BilayerSpec& spec, int slices,
                                         const std::vector<cplx>& class_grid, double class_tol)
    : spec_(validated(spec)),
      layer_(spec.layer, slices),
      bilayer_(build_bilayer(spec), slices),
      connectors_(connector_edges(spec, slices)) {
  const std::vector<cplx> grid = class_grid.empty() ? default_class_grid() : class_grid;
  for (std::size_t i = 0; i < connectors_.size(); ++i) {
    for (std::size_t j = i + 1; j < connectors_.size(); ++j) {
      double worst = 0.0;
      for (cplx lam : grid)
        worst = std::max(worst, std::abs(connectors_[i].spectral(lam).a - connectors_[j].spectral(lam).a));
      if (worst > class_tol)
        throw NotSameClassError(fmt::format(
            "connectors at '{}' and '{}' differ in A-function by {:.3e}",
            spec_.layer.vertices[i].id, spec_.layer.vertices[j].id, worst));
    }
  }
}

FactorReport SameClassFactorizer::operator()(cplx lambda, int branch) const {
  FactorReport rep;
  rep.lambda = lambda;
  rep.full = bilayer_.dispersion_poly(lambda);
  const FloquetMatrix A = layer_.reduced_matrix(lambda);
  const int n = spec_.layer.rank;
  const EdgeSpectral first = connectors_.front().spectral(lambda);
  rep.mu = double(branch >= 0 ? 1 : -1) * mu_branches(first.a).first;
  LaurentMatrix plus = A.matrix;
  LaurentMatrix minus = A.matrix;
  for (std::size_t v = 0; v < connectors_.size(); ++v) {
    const EdgeSpectral sp =
        guarded(connectors_[v], lambda, "connector at " + spec_.layer.vertices[v].id);
    const int i = static_cast<int>(v);
    plus(i, i).add_term(origin(n), (-sp.b + rep.mu) / sp.s);
    minus(i, i).add_term(origin(n), (-sp.b - rep.mu) / sp.s);
    plus(i, i).normalize();
    minus(i, i).normalize();
  }
  rep.d_plus = lp_det(plus);
  rep.d_minus = lp_det(minus);
  rep.product_residual = lp_residual(rep.full, rep.d_plus * rep.d_minus);
  rep.components_nonempty = {rep.d_plus.depends_on_z(), rep.d_minus.depends_on_z()};
  rep.components_distinct = lp_residual(rep.d_plus, rep.d_minus) > 1e-6;
  return rep;
}

FactorReport factor_same_class(const BilayerSpec& spec, cplx lambda, int slices) {
  return SameClassFactorizer(spec, slices)(lambda);
}

// ---------------------------------------------------------------------------

DecoratedReport decorated_equivalence(const PeriodicGraph& layer, const Potential& connector,
                                      cplx lambda, int slices) {
  const PeriodicGraph neumann = build_decorated_layer(layer, connector, EndCondition::neumann);
  const PeriodicGraph dirichlet = build_decorated_layer(layer, connector, EndCondition::dirichlet);
  BilayerSpec spec;
  spec.layer = layer;
  for (const auto& v : layer.vertices) spec.connectors.emplace(v.id, connector);
  const FactorReport f = SameClassFactorizer(spec, slices)(lambda);
  const LaurentPoly dn = FloquetModel(neumann, slices).dispersion_poly(lambda);
  const LaurentPoly dd = FloquetModel(dirichlet, slices).dispersion_poly(lambda);
  const double straight_n = lp_residual(dn, f.d_plus);
  const double straight_d = lp_residual(dd, f.d_minus);
  const double swapped_n = lp_residual(dn, f.d_minus);
  const double swapped_d = lp_residual(dd, f.d_plus);
  if (straight_n + straight_d <= swapped_n + swapped_d)
    return {lambda, straight_n, straight_d, true};
  return {lambda, swapped_n, swapped_d, false};
}

// ---------------------------------------------------------------------------

namespace {

const BilayerSpec& bipartite(const BilayerSpec& spec) {
  spec.validate();
  const PeriodicGraph& L = spec.layer;
  if (L.vertices.size() != 2) throw ShapeError("bipartite reduction needs exactly 2 layer vertices");
  if (!L.dangling.empty()) throw ShapeError("bipartite reduction does not allow dangling edges");
  for (std::size_t i = 0; i < L.edges.size(); ++i)
    if (L.edges[i].tail == L.edges[i].head)
      throw ShapeError(fmt::format("edges[{}] does not join the two vertex classes", i));
  return spec;
}

Eigen::Vector2cd null_vector(const Matrix2& m) {
  // Null vector of a singular 2x2 matrix from its better-conditioned row.
  Eigen::Vector2cd a(m(0, 1), -m(0, 0));
  Eigen::Vector2cd b(m(1, 1), -m(1, 0));
  Eigen::Vector2cd v = a.norm() >= b.norm() ? a : b;
  if (v.norm() == 0.0) v << 1.0, 0.0;
  return v / v.norm();
}

}  // namespace

GrapheneReducer::GrapheneReducer(const BilayerSpec& spec, int slices)
    : spec_(bipartite(spec)),
      layer_(spec.layer, slices),
      bilayer_(build_bilayer(spec), slices),
      connectors_(connector_edges(spec, slices)) {
  const std::string& v1 = spec_.layer.vertices[0].id;
  const std::string& v2 = spec_.layer.vertices[1].id;
  order_ = {layer_vertex_id(v1, 1), layer_vertex_id(v1, 2), layer_vertex_id(v2, 1),
            layer_vertex_id(v2, 2)};
}

GrapheneReport GrapheneReducer::operator()(cplx lambda) const {
  GrapheneReport rep;
  rep.lambda = lambda;
  const int n = spec_.layer.rank;
  rep.full = lp_det(bilayer_.reduced_matrix(lambda, order_).matrix);
  const FloquetMatrix A = layer_.reduced_matrix(lambda);
  rep.w = A.matrix(1, 0);
  rep.w_prime = A.matrix(0, 1);
  rep.ww = rep.w_prime * rep.w;
  std::array<Matrix2, 2> B;
  for (int i = 0; i < 2; ++i) {
    const cplx m = A.matrix(i, i).coeff(origin(n));
    const EdgeSpectral sp = guarded(connectors_[i], lambda, "connector at " + spec_.layer.vertices[i].id);
    B[i] << m - sp.c / sp.s, 1.0 / sp.s, 1.0 / sp.s, m - sp.s_prime / sp.s;
  }
  rep.B1 = B[0];
  rep.B2 = B[1];
  rep.R = B[0] * B[1];
  const cplx tr = rep.R.trace();
  const cplx det = rep.R.determinant();
  rep.reduced = rep.ww * rep.ww - rep.ww * tr + LaurentPoly::constant(n, det);
  rep.quad_residual = lp_residual(rep.full, rep.reduced);
  const cplx half = 0.5 * tr;
  const cplx root = std::sqrt(half * half - det);
  rep.zeta_eigs = {half + root, half - root};
  const std::array<cplx, 2> zetas{rep.zeta_eigs.first, rep.zeta_eigs.second};
  for (int k = 0; k < 2; ++k) {
    const Eigen::Vector2cd phi2 = null_vector(rep.R - zetas[k] * Matrix2::Identity());
    rep.phi2[k] = phi2;
    Eigen::Matrix<cplx, 4, 2> basis = Eigen::Matrix<cplx, 4, 2>::Zero();
    basis.block<2, 1>(0, 0) = -rep.B2 * phi2;
    basis.block<2, 1>(2, 1) = phi2;
    rep.mode_subspaces[k] = basis;
  }
  return rep;
}

double GrapheneReducer::kernel_residual(const GrapheneReport& rep, int k,
                                        const std::vector<cplx>& z) const {
  const Eigen::MatrixXcd A = bilayer_.reduced_matrix(rep.lambda, order_).matrix.evaluate(z);
  const cplx w = rep.w.evaluate(z);
  Eigen::VectorXcd v(4);
  v.head<2>() = -rep.B2 * rep.phi2[k];
  v.tail<2>() = w * rep.phi2[k];
  return (A * v).norm() / (A.norm() * v.norm());
}

std::vector<std::vector<cplx>> GrapheneReducer::points_with_ww(const GrapheneReport& rep, cplx z1,
                                                               cplx target) const {
  if (rep.ww.nvars() != 2) throw ShapeError("composite-variable points need a rank-2 layer");
  std::vector<std::vector<cplx>> out;
  for (cplx z2 : solve_last_variable(rep.ww, {z1}, target)) out.push_back({z1, z2});
  return out;
}

GrapheneReport graphene_reduction(const BilayerSpec& spec, cplx lambda, int slices) {
  return GrapheneReducer(spec, slices)(lambda);
}

double evaluation_difference(const LaurentPoly& p, const std::vector<cplx>& z,
                             const std::vector<cplx>& zp) {
  double scale = 0.0;
  for (const auto& [e, c] : p.terms()) {
    double mz = 1.0;
    double mzp = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      mz *= std::pow(std::abs(z[i]), e[i]);
      mzp *= std::pow(std::abs(zp[i]), e[i]);
    }
    scale += std::abs(c) * std::max(mz, mzp);
  }
  if (scale == 0.0) return 0.0;
  return std::abs(p.evaluate(z) - p.evaluate(zp)) / scale;
}

// ---------------------------------------------------------------------------

std::vector<FZetaPoint> f_zeta_points(cplx zeta, const std::array<cplx, 3>& s_values,
                                      const std::vector<cplx>& w_samples,
                                      std::vector<std::string>* notes) {
  for (cplx s : s_values)
    if (std::abs(s - s_values[0]) > 1e-12 * std::abs(s_values[0]) || s_values[0] == 0.0)
      throw DomainError("F_zeta parameterization needs equal nonzero s on all three edges");
  auto note = [&](std::string msg) {
    if (notes) notes->push_back(std::move(msg));
  };
  auto w_of = [](cplx z1, cplx z2) { return 1.0 + z1 + z2; };
  auto wp_of = [](cplx z1, cplx z2) { return 1.0 + 1.0 / z1 + 1.0 / z2; };
  std::vector<FZetaPoint> out;
  if (std::abs(zeta) < 1e-14) {
    for (cplx t : w_samples) {
      if (t == 0.0) {
        note("sample z1 = 0 skipped");
        continue;
      }
      if (-1.0 - t != 0.0) out.push_back({t, -1.0 - t, 1});
      if (t + 1.0 != 0.0)
        out.push_back({t, -t / (t + 1.0), 2});
      else
        note("sample z1 = -1 has no point on the second component");
    }
    return out;
  }
  for (cplx w : w_samples) {
    if (w == 0.0) {
      note("sample w = 0 skipped");
      continue;
    }
    const cplx wp = zeta / w;
    const cplx sum = w - 1.0;  // z1 + z2
    if (std::abs(wp - 1.0) < 1e-14) {
      note(fmt::format("degenerate quadratic at w = ({}, {})", w.real(), w.imag()));
      continue;
    }
    const cplx prod = sum / (wp - 1.0);  // z1 z2
    for (cplx z1 : polynomial_roots({prod, -sum, 1.0})) {
      const cplx z2 = sum - z1;
      if (z1 == 0.0 || z2 == 0.0) continue;
      if (std::abs(w_of(z1, z2) * wp_of(z1, z2) - zeta) < 1e-8) out.push_back({z1, z2, 0});
    }
  }
  return out;
}

std::vector<std::pair<cplx, cplx>> f0_intersection() {
  // z2 = -1 - z1 on the first component; the second then forces z1^2 + z1 + 1 = 0.
  std::vector<std::pair<cplx, cplx>> pts;
  for (cplx z1 : polynomial_roots({1.0, 1.0, 1.0})) pts.emplace_back(z1, -1.0 - z1);
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return std::arg(a.first) > std::arg(b.first); });
  return pts;
}

// ---------------------------------------------------------------------------

namespace {

const BilayerSpec& double_square(const BilayerSpec& spec) {
  spec.validate();
  const PeriodicGraph& L = spec.layer;
  const auto reference = std::get<PeriodicGraph>(builtin_graph("double_square_7"));
  if (L.vertices.size() != 2 || L.edges.size() != reference.edges.size() || !L.dangling.empty() ||
      L.rank != 2)
    throw ShapeError("layer is not the double-square lattice");
  auto signature = [](const PeriodicGraph& g) {
    std::multiset<std::tuple<int, int, std::vector<int>>> sig;
    for (const auto& e : g.edges) sig.emplace(g.vertex_index(e.tail), g.vertex_index(e.head), e.shift);
    return sig;
  };
  if (signature(L) != signature(reference)) throw ShapeError("layer is not the double-square lattice");
  const Potential p0 = L.edge_potential(L.edges[0]);
  for (const auto& e : L.edges)
    if (e.length != 1.0 || !(L.edge_potential(e) == p0))
      throw ShapeError("double-square layer needs one common unit-length edge potential");
  if (L.vertices[0].alpha != L.vertices[1].alpha)
    throw ShapeError("double-square layer needs a common Robin constant");
  const DiscretizedEdge e(p0);
  for (cplx lam : default_class_grid()) {
    const EdgeSpectral sp = e.spectral(lam);
    if (std::abs(sp.a) > 1e-12 * std::max(1.0, std::abs(sp.b)))
      throw ShapeError("double-square layer potential must be symmetric");
  }
  return spec;
}

DiscretizedEdge connector_at(const BilayerSpec& spec, int i, int slices) {
  return DiscretizedEdge(spec.connectors.at(spec.layer.vertices[i].id).with_length(1.0), slices);
}

// Coefficients in x of sum_k poly[k] x^k products.
std::vector<cplx> conv(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<cplx> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<cplx> axpy(const std::vector<cplx>& a, cplx s, const std::vector<cplx>& b) {
  std::vector<cplx> out(std::max(a.size(), b.size()), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += s * b[i];
  return out;
}

}  // namespace

cplx square7_d2_formula(const std::array<cplx, 4>& om, cplx r2) {
  const cplx d1 = om[0] - om[1];
  return 16.0 * r2 * d1 * d1 * (r2 + (om[0] - om[3]) * (om[2] - om[1]));
}

Square7Analyzer::Square7Analyzer(const BilayerSpec& spec, int slices, double tol)
    : spec_(double_square(spec)),
      tol_(tol),
      layer_(spec.layer, slices),
      bilayer_(build_bilayer(spec), slices),
      layer_edge_(spec.layer.edge_potential(spec.layer.edges[0]), slices),
      connectors_{connector_at(spec, 0, slices), connector_at(spec, 1, slices)} {}

Square7Report Square7Analyzer::operator()(cplx lambda) const {
  Square7Report rep;
  rep.lambda = lambda;
  const LaurentPoly full = bilayer_.dispersion_poly(lambda);

  const EdgeSpectral ring = guarded(layer_edge_, lambda, "layer edge");
  const double alpha = spec_.layer.vertices[0].alpha;
  const cplx omega0 = -4.0 * ring.c - alpha * ring.s;
  const EdgeSpectral e1 = guarded(connectors_[0], lambda, "connector at " + spec_.layer.vertices[0].id);
  const EdgeSpectral e2 = guarded(connectors_[1], lambda, "connector at " + spec_.layer.vertices[1].id);
  rep.mu1 = mu_branches(e1.a).first;
  if (!(std::abs(rep.mu1) > 1e-12)) throw RamificationError("mu_1 vanishes at this energy");
  // N_2 in the eigenbasis of N_1 is [[nu2, rho], [rho, -nu2]].
  rep.nu2 = (1.0 + e1.a * e2.a) / rep.mu1;
  const cplx rho2 = (e1.a - e2.a) * (e1.a - e2.a) / (rep.mu1 * rep.mu1);
  rep.r_squared = ring.s * ring.s * rho2 / (e2.s * e2.s);
  rep.omega = {omega0 + ring.s / e1.s * (-e1.b + rep.mu1), omega0 + ring.s / e1.s * (-e1.b - rep.mu1),
               omega0 + ring.s / e2.s * (-e2.b + rep.nu2), omega0 + ring.s / e2.s * (-e2.b - rep.nu2)};
  rep.discriminant_d2 = square7_d2_formula(rep.omega, rep.r_squared);
  double m = std::sqrt(std::abs(rep.r_squared));
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) m = std::max(m, std::abs(rep.omega[i] - rep.omega[j]));
  rep.scale = std::pow(m, 6);
  rep.reducible = std::abs(rep.discriminant_d2) < tol_ * rep.scale;

  // Independent route: the 4x4 determinant itself.
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> angle(-3.14159, 3.14159);
  double sym = 0.0;
  for (int t = 0; t < 6; ++t) {
    const cplx z1 = std::polar(1.0, angle(rng));
    const cplx z2 = std::polar(1.0, angle(rng));
    const cplx d = full.evaluate({z1, z2});
    const double ref = std::max(std::abs(d), full.max_coeff());
    sym = std::max({sym, std::abs(full.evaluate({1.0 / z1, z2}) - d) / ref,
                    std::abs(full.evaluate({z1, 1.0 / z2}) - d) / ref});
  }
  rep.symmetry_residual = sym;
  const LaurentPoly q = to_zeta_variables(full, &rep.zeta_leftover);
  // q(zeta1, zeta2) = A zeta1^2 + B zeta1 + C with A, B, C polynomials in zeta2.
  std::array<std::vector<cplx>, 3> coef;
  for (const auto& [e, c] : q.terms()) {
    if (e[0] > 2 || e[0] < 0 || e[1] < 0) throw NumericalError("unexpected zeta degree in determinant");
    auto& v = coef[e[0]];
    if (static_cast<int>(v.size()) <= e[1]) v.resize(e[1] + 1, 0.0);
    v[e[1]] = c;
  }
  if (coef[2].empty() || coef[2][0] == 0.0) throw NumericalError("determinant is not quadratic in zeta1");
  const cplx lead = coef[2][0];
  for (auto& v : coef)
    for (auto& c : v) c /= lead;
  const std::vector<cplx> d1 = axpy(conv(coef[1], coef[1]), -4.0, conv(coef[2], coef[0]));
  auto at = [&](std::size_t k) { return k < d1.size() ? d1[k] : cplx(0.0); };
  const cplx a = at(2);
  const cplx b = at(1);
  const cplx c = at(0);
  rep.graph_d2 = b * b - 4.0 * a * c;
  const double denom = std::max(std::norm(b), std::abs(4.0 * a * c));
  rep.graph_d2_relative = denom == 0.0 ? 0.0 : std::abs(rep.graph_d2) / denom;
  rep.graph_square = rep.graph_d2_relative < tol_;
  rep.d2_relative_difference = denom == 0.0 ? 0.0 : std::abs(rep.graph_d2 - rep.discriminant_d2) / denom;
  return rep;
}

Square7Report square7_discriminant(const BilayerSpec& spec, cplx lambda, int slices, double tol) {
  return Square7Analyzer(spec, slices, tol)(lambda);
}

}  // namespace qg
