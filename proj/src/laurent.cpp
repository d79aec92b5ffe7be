#include "qgraph/laurent.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "qgraph/errors.hpp"

namespace qg {

LaurentPoly::LaurentPoly(int nvars) : nvars_(nvars) {
  if (nvars < 1) throw DomainError("Laurent polynomial needs at least one variable");
}

LaurentPoly LaurentPoly::constant(int nvars, cplx value) {
  LaurentPoly p(nvars);
  if (value != 0.0) p.terms_[Exponent(nvars, 0)] = value;
  return p;
}

LaurentPoly LaurentPoly::monomial(const Exponent& e, cplx coeff) {
  LaurentPoly p(static_cast<int>(e.size()));
  if (coeff != 0.0) p.terms_[e] = coeff;
  return p;
}

LaurentPoly LaurentPoly::variable(int nvars, int index, int power) {
  if (index < 0 || index >= nvars) throw DomainError("variable index out of range");
  Exponent e(nvars, 0);
  e[index] = power;
  return monomial(e);
}

cplx LaurentPoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? cplx(0.0) : it->second;
}

double LaurentPoly::max_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

bool LaurentPoly::depends_on_z() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) {
    return std::any_of(t.first.begin(), t.first.end(), [](int k) { return k != 0; });
  });
}

void LaurentPoly::add_term(const Exponent& e, cplx c) {
  if (static_cast<int>(e.size()) != nvars_) throw ShapeError("exponent length mismatch");
  terms_[e] += c;
}

LaurentPoly& LaurentPoly::normalize() {
  const double cut = kPruneRelative * max_coeff();
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) <= cut || it->second == 0.0)
      it = terms_.erase(it);
    else
      ++it;
  }
  return *this;
}

cplx LaurentPoly::evaluate(const std::vector<cplx>& z) const {
  if (static_cast<int>(z.size()) != nvars_) throw ShapeError("evaluation point has wrong length");
  for (cplx zi : z)
    if (zi == 0.0) throw DomainError("Laurent polynomial evaluated at a zero coordinate");
  cplx sum = 0.0;
  for (const auto& [e, c] : terms_) {
    cplx t = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i] != 0) t *= std::pow(z[i], e[i]);
    sum += t;
  }
  return sum;
}

void LaurentPoly::check_nvars(const LaurentPoly& o) const {
  if (o.nvars_ != nvars_)
    throw ShapeError(fmt::format("nvars mismatch: {} vs {}", nvars_, o.nvars_));
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  check_nvars(o);
  for (const auto& [e, c] : o.terms_) terms_[e] += c;
  return normalize();
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) {
  check_nvars(o);
  for (const auto& [e, c] : o.terms_) terms_[e] -= c;
  return normalize();
}

LaurentPoly& LaurentPoly::operator*=(cplx c) {
  for (auto& [e, v] : terms_) v *= c;
  return normalize();
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
  a.check_nvars(b);
  LaurentPoly r(a.nvars_);
  Exponent e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      r.terms_[e] += ca * cb;
    }
  }
  return r.normalize();
}

LaurentPoly lp_add(const LaurentPoly& a, const LaurentPoly& b) { return a + b; }
LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b) { return a * b; }
cplx lp_eval(const LaurentPoly& p, const std::vector<cplx>& z) { return p.evaluate(z); }

double lp_residual(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.nvars() != b.nvars()) throw ShapeError("nvars mismatch in residual");
  double diff = 0.0;
  for (const auto& [e, c] : a.terms()) diff = std::max(diff, std::abs(c - b.coeff(e)));
  for (const auto& [e, c] : b.terms())
    if (!a.terms().count(e)) diff = std::max(diff, std::abs(c));
  const double scale = a.is_zero() ? b.max_coeff() : a.max_coeff();
  if (scale == 0.0) return 0.0;
  return diff / scale;
}

LaurentMatrix::LaurentMatrix(int m, int nvars)
    : m_(m), nvars_(nvars), entries_(static_cast<std::size_t>(m * m), LaurentPoly(nvars)) {
  if (m < 1) throw ShapeError("matrix dimension must be positive");
}

Eigen::MatrixXcd LaurentMatrix::evaluate(const std::vector<cplx>& z) const {
  Eigen::MatrixXcd out(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j) out(i, j) = (*this)(i, j).evaluate(z);
  return out;
}

namespace {

LaurentPoly det_rec(const LaurentMatrix& m, const std::vector<int>& rows,
                    const std::vector<int>& cols) {
  const int n = static_cast<int>(rows.size());
  if (n == 1) return m(rows[0], cols[0]);
  if (n == 2)
    return m(rows[0], cols[0]) * m(rows[1], cols[1]) - m(rows[0], cols[1]) * m(rows[1], cols[0]);
  int best = 0;
  std::size_t best_count = SIZE_MAX;
  for (int r = 0; r < n; ++r) {
    std::size_t count = 0;
    for (int c : cols) count += m(rows[r], c).is_zero() ? 0 : 1;
    if (count < best_count) {
      best_count = count;
      best = r;
    }
  }
  std::vector<int> sub_rows;
  for (int r = 0; r < n; ++r)
    if (r != best) sub_rows.push_back(rows[r]);
  LaurentPoly total(m.nvars());
  for (int k = 0; k < n; ++k) {
    const LaurentPoly& entry = m(rows[best], cols[k]);
    if (entry.is_zero()) continue;
    std::vector<int> sub_cols;
    for (int c = 0; c < n; ++c)
      if (c != k) sub_cols.push_back(cols[c]);
    LaurentPoly term = entry * det_rec(m, sub_rows, sub_cols);
    if ((best + k) % 2 == 1) term = -term;
    total += term;
  }
  return total;
}

std::vector<std::vector<double>> binomials(int n) {
  std::vector<std::vector<double>> b(n + 1);
  for (int i = 0; i <= n; ++i) {
    b[i].assign(i + 1, 1.0);
    for (int k = 1; k < i; ++k) b[i][k] = b[i - 1][k - 1] + b[i - 1][k];
  }
  return b;
}

// prod_i (z_i + 1/z_i)^{n_i}, expanded.
LaurentPoly zeta_monomial(const Exponent& n) {
  const int nv = static_cast<int>(n.size());
  LaurentPoly out = LaurentPoly::constant(nv, 1.0);
  for (int i = 0; i < nv; ++i) {
    if (n[i] == 0) continue;
    const auto b = binomials(n[i]);
    LaurentPoly factor(nv);
    for (int k = 0; k <= n[i]; ++k) {
      Exponent e(nv, 0);
      e[i] = n[i] - 2 * k;
      factor.add_term(e, b[n[i]][k]);
    }
    out = out * factor;
  }
  return out;
}

}  // namespace

LaurentPoly lp_det(const LaurentMatrix& m) {
  if (m.size() > kMaxDetDimension)
    throw ShapeError(fmt::format("determinant limited to {}x{}", kMaxDetDimension, kMaxDetDimension));
  std::vector<int> idx(m.size());
  for (int i = 0; i < m.size(); ++i) idx[i] = i;
  LaurentPoly d = det_rec(m, idx, idx);
  return d.normalize();
}

LaurentPoly to_zeta_variables(const LaurentPoly& p, double* leftover) {
  const int nv = p.nvars();
  LaurentPoly rest = p;
  LaurentPoly out(nv);
  const double scale = p.max_coeff();
  const double stop = 1e-12 * scale;
  // Each step cancels the lexicographically largest term exactly.
  for (std::size_t guard = 0; guard < 4 * p.size() + 8 && !rest.is_zero(); ++guard) {
    const auto top = std::prev(rest.terms().end());
    const Exponent n = top->first;
    const cplx c = top->second;
    if (std::abs(c) <= stop) {
      LaurentPoly trimmed(nv);
      for (const auto& [e, v] : rest.terms())
        if (e != n) trimmed.add_term(e, v);
      rest = trimmed;
      continue;
    }
    if (std::any_of(n.begin(), n.end(), [](int k) { return k < 0; })) break;
    out.add_term(n, c);
    LaurentPoly sub = zeta_monomial(n) * c;
    LaurentPoly next(nv);
    for (const auto& [e, v] : rest.terms()) next.add_term(e, v - sub.coeff(e));
    for (const auto& [e, v] : sub.terms())
      if (!rest.terms().count(e)) next.add_term(e, -v);
    LaurentPoly cleaned(nv);
    for (const auto& [e, v] : next.terms())
      if (e != n && v != 0.0) cleaned.add_term(e, v);
    rest = cleaned;
  }
  if (leftover) *leftover = scale == 0.0 ? 0.0 : rest.max_coeff() / scale;
  return out.normalize();
}

LaurentPoly from_zeta_variables(const LaurentPoly& q) {
  LaurentPoly out(q.nvars());
  for (const auto& [e, c] : q.terms()) out += zeta_monomial(e) * c;
  return out;
}

std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs) {
  const double scale = [&] {
    double m = 0.0;
    for (cplx c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }();
  while (!coeffs.empty() && std::abs(coeffs.back()) <= 1e-14 * scale) coeffs.pop_back();
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  if (solver.info() != Eigen::Success) throw NumericalError("companion eigenvalue solve failed");
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);
  return roots;
}

std::vector<cplx> solve_last_variable(const LaurentPoly& p, const std::vector<cplx>& fixed,
                                      cplx rhs) {
  const int nv = p.nvars();
  if (static_cast<int>(fixed.size()) != nv - 1) throw ShapeError("need nvars - 1 fixed values");
  std::map<int, cplx> by_power;
  for (const auto& [e, c] : p.terms()) {
    cplx t = c;
    for (int i = 0; i + 1 < nv; ++i)
      if (e[i] != 0) t *= std::pow(fixed[i], e[i]);
    by_power[e[nv - 1]] += t;
  }
  by_power[0] -= rhs;
  const int lo = by_power.begin()->first;
  const int hi = by_power.rbegin()->first;
  std::vector<cplx> coeffs(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (const auto& [k, c] : by_power) coeffs[k - lo] = c;
  std::vector<cplx> roots = polynomial_roots(coeffs);
  roots.erase(std::remove_if(roots.begin(), roots.end(), [](cplx r) { return std::abs(r) < 1e-300; }),
              roots.end());
  return roots;
}

}  // namespace qg
