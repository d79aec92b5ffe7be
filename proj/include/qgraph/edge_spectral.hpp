#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/potential.hpp"

namespace qg {

using cplx = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;

inline constexpr int kDefaultSlices = 1024;
inline constexpr double kDirichletGuard = 1e-8;

/// Endpoint spectral data of one edge at energy lambda.
/// c = c_q(L), s = s_q(L), c_prime = c_q'(L), s_prime = s_q'(L) = c~(lambda).
struct EdgeSpectral {
  cplx lambda;
  cplx c;
  cplx s;
  cplx c_prime;
  cplx s_prime;
  cplx a;  // (c - s_prime) / 2
  cplx b;  // (c + s_prime) / 2
};

/// Interior values on grid = slice nodes interleaved with slice midpoints
/// (2N + 1 points, endpoints 0 and L).
struct SolutionTrace {
  std::vector<double> grid;
  std::vector<cplx> c_values;
  std::vector<cplx> s_values;
  std::vector<cplx> c_tilde_values;
  std::vector<cplx> psi_values;  // empty unless requested
};

/// Closed rectangle in the complex plane.
struct Region {
  double re_min;
  double re_max;
  double im_min;
  double im_max;
};

/// A potential cut into slices; each slice is crossed by one fourth-order
/// Magnus step built from the potential at its two Gauss points.
///
/// `slices` is a density: each smooth piece of length l gets
/// max(1, round(slices * l)) equal slices, and jump points of q are always
/// slice boundaries. On a unit edge this is exactly `slices` slices.
class DiscretizedEdge {
 public:
  explicit DiscretizedEdge(const Potential& p, int slices = kDefaultSlices);

  const Potential& potential() const { return potential_; }
  double length() const { return potential_.length(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& q_mid() const { return q_mid_; }
  /// Potential at the two Gauss points of each slice, left one first.
  const std::vector<std::pair<double, double>>& q_gauss() const { return q_gauss_; }
  int slice_count() const { return static_cast<int>(q_mid_.size()); }

  /// Propagator [[c, s], [c', s']] from 0 to L.
  Matrix2 propagator(cplx lambda) const;
  EdgeSpectral spectral(cplx lambda) const;

  /// Columns (u, u') of the two fundamental solutions at nodes and midpoints.
  /// If psi_init is given, a third solution with that Cauchy data at 0 is traced.
  void trace(cplx lambda, std::vector<cplx>& c_vals, std::vector<cplx>& s_vals,
             const std::optional<std::pair<cplx, cplx>>& psi_init,
             std::vector<cplx>* psi_vals) const;

  /// Fine grid (nodes and midpoints, 2N + 1 points).
  std::vector<double> fine_grid() const;

  /// Discretization of the mirror image: nodes L - x reversed, samples reversed.
  DiscretizedEdge mirrored() const;

 private:
  DiscretizedEdge(Potential p, std::vector<double> nodes, std::vector<double> q_mid,
                  std::vector<std::pair<double, double>> q_gauss)
      : potential_(std::move(p)),
        nodes_(std::move(nodes)),
        q_mid_(std::move(q_mid)),
        q_gauss_(std::move(q_gauss)) {}

  std::pair<double, double> gauss_samples(double a, double b) const;

  Potential potential_;
  std::vector<double> nodes_;
  std::vector<double> q_mid_;
  std::vector<std::pair<double, double>> q_gauss_;
};

/// Exact propagator of -u'' + (qbar - lambda) u = 0 over a step of width h.
Matrix2 slice_propagator(cplx lambda, double qbar, double h);

/// Fourth-order Magnus step over width h from potential samples q1, q2 at the
/// two Gauss points. Equals slice_propagator(lambda, q1, h) when q1 == q2.
Matrix2 magnus_step(cplx lambda, double q1, double q2, double h);

std::pair<EdgeSpectral, SolutionTrace> fundamental_solutions(const Potential& p, cplx lambda,
                                                             int slices = kDefaultSlices);

/// T = [[c, s], [-c', -s']]; det T = -1.
Matrix2 transfer_matrix(const Potential& p, cplx lambda, int slices = kDefaultSlices);
Matrix2 transfer_matrix(const EdgeSpectral& e);

/// G = (1/s) [[-c, 1], [1, -s']]; throws PoleError when |s| <= guard.
Matrix2 dtn_matrix(const Potential& p, cplx lambda, int slices = kDefaultSlices,
                   double guard = kDirichletGuard);
Matrix2 dtn_matrix(const EdgeSpectral& e, double guard = kDirichletGuard);

cplx a_function(const Potential& p, cplx lambda, int slices = kDefaultSlices);
cplx b_function(const Potential& p, cplx lambda, int slices = kDefaultSlices);

/// Real roots of s in (-inf, lambda_max], ascending, refined to 1e-10.
std::vector<double> dirichlet_eigenvalues(const Potential& p, double lambda_max,
                                          int slices = kDefaultSlices);

bool same_asymmetry_class(const Potential& p1, const Potential& p2,
                          const std::vector<cplx>& lambda_grid, double tol,
                          int slices = kDefaultSlices);

/// Grid used when a class check has no explicit grid.
std::vector<cplx> default_class_grid();

struct CsResiduals {
  double s_vs_s_tilde;           // |s - s~|
  double c_prime_vs_tilde;       // |c' - c~'|
  double c_vs_s_tilde_prime;     // |c - s~'|
  double s_prime_vs_c_tilde;     // |s' - c~|
  double max() const;
};

CsResiduals check_csrelations(const Potential& p, cplx lambda, int slices = kDefaultSlices);

/// |c'(lambda) a(lambda) + int q_-(x) c(x) c~(x) dx|.
double check_intqcc(const Potential& p, cplx lambda, int slices = kDefaultSlices);

struct DerivativeCheck {
  cplx formula_value;
  cplx fd_value;
  double relative_error() const;
};

/// Throws NotBranchPointError unless |a(lambda0)^2 + 1| < 1e-8.
DerivativeCheck a_derivative_at_branch(const Potential& p, cplx lambda0,
                                       int slices = kDefaultSlices);

/// int_0^L psi^2 for the eigen-solution psi(0) = 1, psi'(0) = -b/s.
cplx psi_square_integral(const DiscretizedEdge& edge, cplx lambda0);

struct GenericityEntry {
  cplx lambda0;
  cplx psi_square_integral;
};

std::vector<GenericityEntry> genericity_check(const Potential& p, const Region& region,
                                              int slices = kDefaultSlices);

/// True when some entry has |int psi^2| > 1e-8.
bool genericity_holds(const std::vector<GenericityEntry>& entries);

}  // namespace qg
