#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/floquet.hpp"
#include "qgraph/graph_model.hpp"
#include "qgraph/laurent.hpp"

namespace qg {

// ---------------------------------------------------------------------------
// Same-class factorization D = d+ * d-

struct FactorReport {
  cplx lambda;
  cplx mu;
  LaurentPoly full{1};
  LaurentPoly d_plus{1};
  LaurentPoly d_minus{1};
  double product_residual = 0.0;
  bool components_distinct = false;
  std::pair<bool, bool> components_nonempty{false, false};
};

/// Bilayer whose connectors share one A-function. With a, mu taken from the
/// first connector, d+- = det(A_layer(z) + diag((-b_v +- mu) / s_v)).
class SameClassFactorizer {
 public:
  /// Throws NotSameClassError unless all connectors agree pairwise on
  /// `class_grid` (default_class_grid() when empty) within class_tol.
  explicit SameClassFactorizer(const BilayerSpec& spec, int slices = kDefaultSlices,
                               const std::vector<cplx>& class_grid = {},
                               double class_tol = 1e-8);

  /// branch = +1 uses the principal mu, -1 its negative.
  FactorReport operator()(cplx lambda, int branch = 1) const;

  const FloquetModel& layer() const { return layer_; }
  const FloquetModel& bilayer() const { return bilayer_; }

 private:
  BilayerSpec spec_;
  FloquetModel layer_;
  FloquetModel bilayer_;
  std::vector<DiscretizedEdge> connectors_;  // layer vertex order
};

FactorReport factor_same_class(const BilayerSpec& spec, cplx lambda, int slices = kDefaultSlices);

// ---------------------------------------------------------------------------
// Decorated-layer equivalence for symmetric connectors

struct DecoratedReport {
  cplx lambda;
  double neumann_residual;    // decorated (Neumann end) vs its matched factor
  double dirichlet_residual;  // decorated (Dirichlet end) vs the other factor
  bool neumann_matches_plus;  // matching that minimized the residual sum
};

DecoratedReport decorated_equivalence(const PeriodicGraph& layer, const Potential& connector,
                                      cplx lambda, int slices = kDefaultSlices);

// ---------------------------------------------------------------------------
// Bipartite two-vertex layers: D as a quadratic in zeta = w w'

struct GrapheneReport {
  cplx lambda;
  Matrix2 B1;
  Matrix2 B2;
  Matrix2 R;
  std::pair<cplx, cplx> zeta_eigs;
  double quad_residual = 0.0;
  /// For each eigenvalue zeta_k of R: columns span {[-B2 phi2, 0], [0, phi2]}
  /// in the order (v1#1, v1#2, v2#1, v2#2).
  std::array<Eigen::Matrix<cplx, 4, 2>, 2> mode_subspaces;
  std::array<Eigen::Vector2cd, 2> phi2;
  LaurentPoly full{1};     // det in the order (v1#1, v1#2, v2#1, v2#2)
  LaurentPoly w{1};        // layer entry (v2, v1)
  LaurentPoly w_prime{1};  // layer entry (v1, v2)
  LaurentPoly ww{1};       // w * w'
  LaurentPoly reduced{1};  // det(B1 B2 - ww I) expanded
};

class GrapheneReducer {
 public:
  /// Throws ShapeError unless every layer edge joins the two distinct vertices.
  explicit GrapheneReducer(const BilayerSpec& spec, int slices = kDefaultSlices);

  GrapheneReport operator()(cplx lambda) const;

  const std::vector<std::string>& vertex_order() const { return order_; }
  const FloquetModel& bilayer() const { return bilayer_; }

  /// [phi1, w phi2] for eigenvalue index k at a point z with w w'(z) = zeta_k;
  /// returns ||A(z) v|| / (||A(z)|| ||v||).
  double kernel_residual(const GrapheneReport& rep, int k, const std::vector<cplx>& z) const;

  /// Points z with w w'(z) = target: z1 given, z2 solved.
  std::vector<std::vector<cplx>> points_with_ww(const GrapheneReport& rep, cplx z1,
                                                cplx target) const;

 private:
  BilayerSpec spec_;
  FloquetModel layer_;
  FloquetModel bilayer_;
  std::vector<DiscretizedEdge> connectors_;
  std::vector<std::string> order_;
};

GrapheneReport graphene_reduction(const BilayerSpec& spec, cplx lambda,
                                  int slices = kDefaultSlices);

/// |p(z) - p(z')| / (sum over terms of |c| max(|z^e|, |z'^e|)).
double evaluation_difference(const LaurentPoly& p, const std::vector<cplx>& z,
                             const std::vector<cplx>& zp);

// ---------------------------------------------------------------------------
// F_zeta curves for equal edge data, w = 1 + z1 + z2

struct FZetaPoint {
  cplx z1;
  cplx z2;
  int component;  // 0 for generic zeta; for zeta = 0: 1 on w = 0, 2 on w' = 0
};

/// For zeta != 0 each sample is a value of w; for zeta = 0 each sample is a
/// value of z1 placed on both components. Degenerate samples are skipped.
std::vector<FZetaPoint> f_zeta_points(cplx zeta, const std::array<cplx, 3>& s_values,
                                      const std::vector<cplx>& w_samples,
                                      std::vector<std::string>* notes = nullptr);

/// Common points of 1 + z1 + z2 = 0 and 1 + 1/z1 + 1/z2 = 0, ordered by
/// decreasing arg z1.
std::vector<std::pair<cplx, cplx>> f0_intersection();

// ---------------------------------------------------------------------------
// Square-lattice bilayer criterion

struct Square7Report {
  cplx lambda;
  std::array<cplx, 4> omega;  // Omega_1^+, Omega_1^-, Omega_2^+, Omega_2^-
  cplx mu1;
  cplx nu2;
  cplx r_squared;
  cplx discriminant_d2;
  double scale = 0.0;  // (max pairwise |Omega_i - Omega_j| and |r|)^6
  bool reducible = false;

  // Independent route through the 4x4 determinant in zeta variables.
  double symmetry_residual = 0.0;  // z_i -> 1/z_i invariance at torus points
  double zeta_leftover = 0.0;
  cplx graph_d2;
  double graph_d2_relative = 0.0;  // |D2| / max(|b|^2, |4ac|) of D1
  bool graph_square = false;       // D1 is a perfect square
  double d2_relative_difference = 0.0;
};

class Square7Analyzer {
 public:
  /// Layer must have the double-square topology with one symmetric layer
  /// potential and a common Robin constant; otherwise ShapeError.
  explicit Square7Analyzer(const BilayerSpec& spec, int slices = kDefaultSlices,
                           double tol = 1e-8);

  Square7Report operator()(cplx lambda) const;
  const FloquetModel& bilayer() const { return bilayer_; }

 private:
  BilayerSpec spec_;
  double tol_;
  FloquetModel layer_;
  FloquetModel bilayer_;
  DiscretizedEdge layer_edge_;
  std::array<DiscretizedEdge, 2> connectors_;
};

Square7Report square7_discriminant(const BilayerSpec& spec, cplx lambda,
                                   int slices = kDefaultSlices, double tol = 1e-8);

/// 16 r^2 (O1+ - O1-)^2 (r^2 + (O1+ - O2-)(O2+ - O1-)).
cplx square7_d2_formula(const std::array<cplx, 4>& omega, cplx r_squared);

}  // namespace qg
