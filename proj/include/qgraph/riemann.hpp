#pragma once

#include <utility>
#include <vector>

#include "qgraph/edge_spectral.hpp"

namespace qg {

/// (mu, -mu) with mu the principal root of a^2 + 1; a purely imaginary mu
/// is taken with non-negative imaginary part.
std::pair<cplx, cplx> mu_branches(cplx a);

/// N = [[-a, 1], [1, a]]; eigenvalues +-mu.
Matrix2 n_matrix(cplx a);

/// P_mu = (1/2mu) [[mu - a, 1], [1, mu + a]]; throws RamificationError for |mu| <= 1e-12.
Matrix2 eigenprojection(cplx a, cplx mu);

struct BranchPoint {
  cplx lambda0;
  int sign;  // +1 when a(lambda0) = i, -1 when a(lambda0) = -i
  double newton_residual;
};

std::vector<BranchPoint> branch_points(const Potential& p, const Region& region,
                                       int slices = kDefaultSlices);

/// Continuous choice of mu along a path starting at start_sign * principal root.
/// Throws NumericalError when consecutive points are too far apart to decide.
std::vector<cplx> continue_mu(const Potential& p, const std::vector<cplx>& path, int start_sign,
                              int slices = kDefaultSlices);

/// Closed polygon approximating a circle, first point repeated at the end.
std::vector<cplx> circle_path(cplx center, double radius, int points);

}  // namespace qg
