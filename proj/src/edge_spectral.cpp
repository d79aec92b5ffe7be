#include "qgraph/edge_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/newton.hpp"

namespace qg {

namespace {

// cos(sqrt(w)) and sin(sqrt(w))/sqrt(w); both even in sqrt(w), hence entire in w.
void cos_sinc(cplx w, cplx& cw, cplx& sw) {
  if (std::abs(w) < 0.1) {
    cplx term_c = 1.0;
    cplx term_s = 1.0;
    cw = 1.0;
    sw = 1.0;
    for (int n = 1; n < 12; ++n) {
      term_c *= -w / double((2 * n - 1) * (2 * n));
      term_s *= -w / double((2 * n) * (2 * n + 1));
      cw += term_c;
      sw += term_s;
    }
    return;
  }
  const cplx r = std::sqrt(w);
  cw = std::cos(r);
  sw = std::sin(r) / r;
}

bool finite(const Matrix2& m) {
  return std::isfinite(m.cwiseAbs().maxCoeff());
}

cplx simpson(const std::vector<double>& fine, const std::vector<cplx>& f) {
  cplx out = 0.0;
  for (std::size_t i = 0; i + 2 < fine.size(); i += 2) {
    const double h = fine[i + 2] - fine[i];
    out += h / 6.0 * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
  }
  return out;
}

}  // namespace

Matrix2 slice_propagator(cplx lambda, double qbar, double h) {
  const cplx w = (lambda - qbar) * h * h;
  cplx cw;
  cplx sw;
  cos_sinc(w, cw, sw);
  Matrix2 m;
  m << cw, h * sw, -(w / h) * sw, cw;
  return m;
}

Matrix2 magnus_step(cplx lambda, double q1, double q2, double h) {
  // Exponent [[d, h], [h (qbar - lambda), -d]] is traceless, so its square is
  // the scalar -w and exp = cos(sqrt w) I + sinc(sqrt w) * exponent.
  const double d = std::numbers::sqrt3 / 12.0 * h * h * (q1 - q2);
  const double qbar = 0.5 * (q1 + q2);
  const cplx w = (lambda - qbar) * h * h - d * d;
  cplx cw;
  cplx sw;
  cos_sinc(w, cw, sw);
  Matrix2 m;
  m << cw + d * sw, h * sw, h * (qbar - lambda) * sw, cw - d * sw;
  return m;
}

std::pair<double, double> DiscretizedEdge::gauss_samples(double a, double b) const {
  const double mid = 0.5 * (a + b);
  const double off = 0.5 * (b - a) / std::numbers::sqrt3;
  return {potential_.evaluate(mid - off), potential_.evaluate(mid + off)};
}

DiscretizedEdge::DiscretizedEdge(const Potential& p, int slices) : potential_(p) {
  if (slices < 1) throw DomainError("slices must be at least 1");
  const double L = p.length();
  // Mirror-closed breakpoint set so the mirrored discretization shares nodes.
  std::vector<double> cuts{0.0, L};
  for (double x : p.jump_points()) {
    cuts.push_back(x);
    cuts.push_back(L - x);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> uniq;
  for (double x : cuts)
    if (uniq.empty() || x - uniq.back() > 1e-13 * L) uniq.push_back(x);
  uniq.back() = L;
  nodes_.push_back(0.0);
  for (std::size_t k = 0; k + 1 < uniq.size(); ++k) {
    const double a = uniq[k];
    const double b = uniq[k + 1];
    const long n = std::max(1L, std::lround(double(slices) * (b - a)));
    for (long j = 1; j <= n; ++j) nodes_.push_back(j == n ? b : a + (b - a) * double(j) / double(n));
  }
  q_mid_.reserve(nodes_.size() - 1);
  q_gauss_.reserve(nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    q_mid_.push_back(p.evaluate(0.5 * (nodes_[i] + nodes_[i + 1])));
    q_gauss_.push_back(gauss_samples(nodes_[i], nodes_[i + 1]));
  }
}

Matrix2 DiscretizedEdge::propagator(cplx lambda) const {
  Matrix2 phi = Matrix2::Identity();
  for (std::size_t i = 0; i < q_mid_.size(); ++i)
    phi = magnus_step(lambda, q_gauss_[i].first, q_gauss_[i].second, nodes_[i + 1] - nodes_[i]) * phi;
  if (!finite(phi))
    throw NumericalError(fmt::format("propagation overflow at lambda = ({}, {})", lambda.real(),
                                     lambda.imag()));
  return phi;
}

EdgeSpectral DiscretizedEdge::spectral(cplx lambda) const {
  const Matrix2 phi = propagator(lambda);
  EdgeSpectral e;
  e.lambda = lambda;
  e.c = phi(0, 0);
  e.s = phi(0, 1);
  e.c_prime = phi(1, 0);
  e.s_prime = phi(1, 1);
  e.a = 0.5 * (e.c - e.s_prime);
  e.b = 0.5 * (e.c + e.s_prime);
  return e;
}

std::vector<double> DiscretizedEdge::fine_grid() const {
  std::vector<double> g;
  g.reserve(2 * q_mid_.size() + 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    g.push_back(nodes_[i]);
    g.push_back(0.5 * (nodes_[i] + nodes_[i + 1]));
  }
  g.push_back(nodes_.back());
  return g;
}

void DiscretizedEdge::trace(cplx lambda, std::vector<cplx>& c_vals, std::vector<cplx>& s_vals,
                            const std::optional<std::pair<cplx, cplx>>& psi_init,
                            std::vector<cplx>* psi_vals) const {
  const std::size_t n = q_mid_.size();
  c_vals.assign(2 * n + 1, 0.0);
  s_vals.assign(2 * n + 1, 0.0);
  Eigen::Matrix<cplx, 2, 3> y;
  y << 1.0, 0.0, 1.0, 0.0, 1.0, 0.0;
  if (psi_init) {
    y(0, 2) = psi_init->first;
    y(1, 2) = psi_init->second;
    if (psi_vals) psi_vals->assign(2 * n + 1, 0.0);
  }
  auto record = [&](std::size_t k) {
    c_vals[k] = y(0, 0);
    s_vals[k] = y(0, 1);
    if (psi_init && psi_vals) (*psi_vals)[k] = y(0, 2);
  };
  record(0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = nodes_[i];
    const double b = nodes_[i + 1];
    const double m = 0.5 * (a + b);
    const auto [l1, l2] = gauss_samples(a, m);
    const auto [r1, r2] = gauss_samples(m, b);
    y = magnus_step(lambda, l1, l2, m - a) * y;
    record(2 * i + 1);
    y = magnus_step(lambda, r1, r2, b - m) * y;
    record(2 * i + 2);
  }
  if (!std::isfinite(y.cwiseAbs().maxCoeff())) throw NumericalError("trace propagation overflow");
}

DiscretizedEdge DiscretizedEdge::mirrored() const {
  const double L = length();
  std::vector<double> nodes(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) nodes[i] = L - nodes_[nodes_.size() - 1 - i];
  nodes.front() = 0.0;
  nodes.back() = L;
  std::vector<double> q(q_mid_.rbegin(), q_mid_.rend());
  std::vector<std::pair<double, double>> g;
  g.reserve(q_gauss_.size());
  for (auto it = q_gauss_.rbegin(); it != q_gauss_.rend(); ++it) g.emplace_back(it->second, it->first);
  return DiscretizedEdge(potential_.reflect(), std::move(nodes), std::move(q), std::move(g));
}

std::pair<EdgeSpectral, SolutionTrace> fundamental_solutions(const Potential& p, cplx lambda,
                                                             int slices) {
  const DiscretizedEdge edge(p, slices);
  const DiscretizedEdge mirror = edge.mirrored();
  SolutionTrace tr;
  tr.grid = edge.fine_grid();
  edge.trace(lambda, tr.c_values, tr.s_values, std::nullopt, nullptr);
  std::vector<cplx> s_tilde;
  mirror.trace(lambda, tr.c_tilde_values, s_tilde, std::nullopt, nullptr);
  return {edge.spectral(lambda), std::move(tr)};
}

Matrix2 transfer_matrix(const EdgeSpectral& e) {
  Matrix2 t;
  t << e.c, e.s, -e.c_prime, -e.s_prime;
  return t;
}

Matrix2 transfer_matrix(const Potential& p, cplx lambda, int slices) {
  return transfer_matrix(DiscretizedEdge(p, slices).spectral(lambda));
}

Matrix2 dtn_matrix(const EdgeSpectral& e, double guard) {
  if (!(std::abs(e.s) > guard)) throw PoleError("edge", std::abs(e.s));
  Matrix2 g;
  g << -e.c, 1.0, 1.0, -e.s_prime;
  return g / e.s;
}

Matrix2 dtn_matrix(const Potential& p, cplx lambda, int slices, double guard) {
  return dtn_matrix(DiscretizedEdge(p, slices).spectral(lambda), guard);
}

cplx a_function(const Potential& p, cplx lambda, int slices) {
  return DiscretizedEdge(p, slices).spectral(lambda).a;
}

cplx b_function(const Potential& p, cplx lambda, int slices) {
  return DiscretizedEdge(p, slices).spectral(lambda).b;
}

std::vector<double> dirichlet_eigenvalues(const Potential& p, double lambda_max, int slices) {
  if (!std::isfinite(lambda_max)) throw DomainError("lambda_max must be finite");
  const DiscretizedEdge edge(p, slices);
  const double base = p.lower_bound();
  std::vector<double> roots;
  if (lambda_max <= base) return roots;
  auto s_of = [&](double lam) { return edge.spectral(lam).s.real(); };
  const double dk = std::numbers::pi / (16.0 * p.length());
  const double kmax = std::sqrt(lambda_max - base);
  double k_prev = 0.0;
  double f_prev = s_of(base);
  auto tol = [](double a, double b) { return std::abs(b - a) < 1e-11; };
  for (double k = dk;; k += dk) {
    const double kk = std::min(k, kmax);
    const double lam = base + kk * kk;
    const double f = s_of(lam);
    if (f_prev == 0.0) {
      roots.push_back(base + k_prev * k_prev);
    } else if (f_prev * f < 0.0) {
      std::uintmax_t iters = 200;
      auto [lo, hi] = boost::math::tools::toms748_solve(s_of, base + k_prev * k_prev, lam, f_prev,
                                                        f, tol, iters);
      roots.push_back(0.5 * (lo + hi));
    }
    if (kk >= kmax) {
      if (f == 0.0) roots.push_back(lam);
      break;
    }
    k_prev = kk;
    f_prev = f;
  }
  return roots;
}

std::vector<cplx> default_class_grid() {
  return {cplx(-3.7, 0.0), cplx(0.5, 0.0),  cplx(2.3, 1.1),   cplx(7.9, -2.2),
          cplx(15.2, 0.4), cplx(31.5, 5.0), cplx(-12.0, 3.0), cplx(55.0, -1.5)};
}

bool same_asymmetry_class(const Potential& p1, const Potential& p2,
                          const std::vector<cplx>& lambda_grid, double tol, int slices) {
  if (lambda_grid.empty()) throw DomainError("asymmetry class test needs a non-empty grid");
  const DiscretizedEdge e1(p1, slices);
  const DiscretizedEdge e2(p2, slices);
  double worst = 0.0;
  for (cplx lam : lambda_grid)
    worst = std::max(worst, std::abs(e1.spectral(lam).a - e2.spectral(lam).a));
  return worst <= tol;
}

double CsResiduals::max() const {
  return std::max({s_vs_s_tilde, c_prime_vs_tilde, c_vs_s_tilde_prime, s_prime_vs_c_tilde});
}

CsResiduals check_csrelations(const Potential& p, cplx lambda, int slices) {
  const EdgeSpectral e = DiscretizedEdge(p, slices).spectral(lambda);
  const EdgeSpectral r = DiscretizedEdge(p.reflect(), slices).spectral(lambda);
  return {std::abs(e.s - r.s), std::abs(e.c_prime - r.c_prime), std::abs(e.c - r.s_prime),
          std::abs(e.s_prime - r.c)};
}

double check_intqcc(const Potential& p, cplx lambda, int slices) {
  const DiscretizedEdge edge(p, slices);
  const DiscretizedEdge mirror = edge.mirrored();
  const std::vector<double> fine = edge.fine_grid();
  std::vector<cplx> c;
  std::vector<cplx> s;
  std::vector<cplx> ct;
  std::vector<cplx> st;
  edge.trace(lambda, c, s, std::nullopt, nullptr);
  mirror.trace(lambda, ct, st, std::nullopt, nullptr);
  const auto& q = edge.q_mid();
  const std::size_t n = q.size();
  // Composite trapezoid on the trace grid with q_odd frozen per slice.
  cplx integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q_odd = 0.5 * (q[i] - q[n - 1 - i]);
    if (q_odd == 0.0) continue;
    const double h = 0.5 * (fine[2 * i + 2] - fine[2 * i]);
    integral += q_odd * h *
                (0.5 * c[2 * i] * ct[2 * i] + c[2 * i + 1] * ct[2 * i + 1] +
                 0.5 * c[2 * i + 2] * ct[2 * i + 2]);
  }
  const EdgeSpectral e = edge.spectral(lambda);
  return std::abs(e.c_prime * e.a + integral);
}

double DerivativeCheck::relative_error() const {
  return std::abs(formula_value - fd_value) / std::abs(fd_value);
}

cplx psi_square_integral(const DiscretizedEdge& edge, cplx lambda0) {
  const EdgeSpectral e = edge.spectral(lambda0);
  if (!(std::abs(e.s) > kDirichletGuard)) throw PoleError("edge", std::abs(e.s));
  std::vector<cplx> c;
  std::vector<cplx> s;
  std::vector<cplx> psi;
  edge.trace(lambda0, c, s, std::make_pair(cplx(1.0), -e.b / e.s), &psi);
  std::vector<cplx> sq(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) sq[i] = psi[i] * psi[i];
  return simpson(edge.fine_grid(), sq);
}

DerivativeCheck a_derivative_at_branch(const Potential& p, cplx lambda0, int slices) {
  const DiscretizedEdge edge(p, slices);
  const EdgeSpectral e = edge.spectral(lambda0);
  const double res = std::abs(e.a * e.a + 1.0);
  if (!(res < 1e-8))
    throw NotBranchPointError(
        fmt::format("|a^2 + 1| = {:.3e} at ({}, {})", res, lambda0.real(), lambda0.imag()));
  const double h = 1e-5;
  DerivativeCheck out;
  out.formula_value = -0.5 * e.s * psi_square_integral(edge, lambda0);
  out.fd_value = (edge.spectral(lambda0 + h).a - edge.spectral(lambda0 - h).a) / (2.0 * h);
  return out;
}

std::vector<GenericityEntry> genericity_check(const Potential& p, const Region& region,
                                              int slices) {
  const DiscretizedEdge fine(p, slices);
  const DiscretizedEdge coarse(p, std::min(slices, 128));
  auto f_fine = [&](cplx l) { const cplx a = fine.spectral(l).a; return a * a + 1.0; };
  auto f_coarse = [&](cplx l) { const cplx a = coarse.spectral(l).a; return a * a + 1.0; };
  // a is identically zero for symmetric q; no roots to find.
  const std::vector<cplx> probe = default_class_grid();
  if (std::all_of(probe.begin(), probe.end(),
                  [&](cplx l) { return std::abs(fine.spectral(l).a) < 1e-12; }))
    return {};
  std::vector<GenericityEntry> out;
  for (cplx root : multistart_roots(f_coarse, f_fine, region)) {
    if (std::abs(root.imag()) < 1e-12) continue;
    out.push_back({root, psi_square_integral(fine, root)});
  }
  return out;
}

bool genericity_holds(const std::vector<GenericityEntry>& entries) {
  return std::any_of(entries.begin(), entries.end(),
                     [](const GenericityEntry& e) { return std::abs(e.psi_square_integral) > 1e-8; });
}

}  // namespace qg
