#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace qg {

using cplx = std::complex<double>;
using Exponent = std::vector<int>;

/// Sparse Laurent polynomial in nvars variables with complex coefficients.
/// Terms are kept in lexicographic exponent order; coefficients at or below
/// kPruneRelative * (largest magnitude) are dropped on normalization.
class LaurentPoly {
 public:
  static constexpr double kPruneRelative = 1e-13;

  explicit LaurentPoly(int nvars = 1);

  static LaurentPoly constant(int nvars, cplx value);
  static LaurentPoly monomial(const Exponent& e, cplx coeff = 1.0);
  /// z_index ^ power
  static LaurentPoly variable(int nvars, int index, int power = 1);

  int nvars() const { return nvars_; }
  const std::map<Exponent, cplx>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  cplx coeff(const Exponent& e) const;
  double max_coeff() const;
  /// True if some stored term has a non-zero exponent.
  bool depends_on_z() const;

  /// Adds c z^e without normalizing.
  void add_term(const Exponent& e, cplx c);
  LaurentPoly& normalize();

  cplx evaluate(const std::vector<cplx>& z) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);
  LaurentPoly& operator*=(cplx c);

  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
  friend LaurentPoly operator*(LaurentPoly a, cplx c) { return a *= c; }
  friend LaurentPoly operator*(cplx c, LaurentPoly a) { return a *= c; }

 private:
  void check_nvars(const LaurentPoly& o) const;

  int nvars_;
  std::map<Exponent, cplx> terms_;
};

LaurentPoly lp_add(const LaurentPoly& a, const LaurentPoly& b);
LaurentPoly lp_mul(const LaurentPoly& a, const LaurentPoly& b);
cplx lp_eval(const LaurentPoly& p, const std::vector<cplx>& z);

/// max |a - b| / max |a|; normalized by b when a is zero; 0 when both vanish.
double lp_residual(const LaurentPoly& a, const LaurentPoly& b);

class LaurentMatrix {
 public:
  LaurentMatrix(int m, int nvars);

  int size() const { return m_; }
  int nvars() const { return nvars_; }
  LaurentPoly& operator()(int i, int j) { return entries_[i * m_ + j]; }
  const LaurentPoly& operator()(int i, int j) const { return entries_[i * m_ + j]; }

  Eigen::MatrixXcd evaluate(const std::vector<cplx>& z) const;

 private:
  int m_;
  int nvars_;
  std::vector<LaurentPoly> entries_;
};

inline constexpr int kMaxDetDimension = 10;

/// Cofactor expansion along the sparsest row; throws ShapeError for m > 10.
LaurentPoly lp_det(const LaurentMatrix& m);

/// Rewrites a polynomial invariant under every z_i -> 1/z_i as a polynomial in
/// zeta_i = z_i + 1/z_i (returned with the same nvars, exponents >= 0).
/// `leftover` receives the relative size of what could not be absorbed, which
/// is ~0 exactly when the input has the symmetry.
LaurentPoly to_zeta_variables(const LaurentPoly& p, double* leftover = nullptr);

/// Inverse of to_zeta_variables: substitutes zeta_i = z_i + 1/z_i.
LaurentPoly from_zeta_variables(const LaurentPoly& q);

/// Roots in the last variable of p(fixed..., z_last) = rhs.
std::vector<cplx> solve_last_variable(const LaurentPoly& p, const std::vector<cplx>& fixed,
                                      cplx rhs);

/// Roots of sum_k coeffs[k] x^k via the companion matrix; leading zeros trimmed.
std::vector<cplx> polynomial_roots(std::vector<cplx> coeffs);

}  // namespace qg
