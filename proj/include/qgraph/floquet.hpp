#pragma once

#include <string>
#include <vector>

#include "qgraph/edge_spectral.hpp"
#include "qgraph/graph_model.hpp"
#include "qgraph/laurent.hpp"

namespace qg {

struct FloquetMatrix {
  cplx lambda;
  std::vector<std::string> vertex_order;
  LaurentMatrix matrix;
};

/// A graph with its edge discretizations prepared once, for repeated
/// evaluation at many energies.
///
/// Row v of the reduced matrix is the Robin condition at v after eliminating
/// edge interiors: for a stored edge (v -> w, shift g) with data c, s, s',
///   (v, w) += z^g / s,  (w, v) += z^-g / s,  (v, v) -= c / s,  (w, w) -= s' / s,
/// every diagonal gets -alpha, and a dangling edge adds -c'/s' (Neumann free
/// end) or -c/s (Dirichlet free end) to its vertex.
class FloquetModel {
 public:
  explicit FloquetModel(PeriodicGraph g, int slices = kDefaultSlices,
                        double guard = kDirichletGuard);

  const PeriodicGraph& graph() const { return graph_; }

  /// Throws PoleError naming the first edge inside the guard.
  FloquetMatrix reduced_matrix(cplx lambda) const;
  FloquetMatrix reduced_matrix(cplx lambda, const std::vector<std::string>& vertex_order) const;
  LaurentPoly dispersion_poly(cplx lambda) const;
  bool guard_ok(cplx lambda) const;

  /// Spectral data of edge i at lambda (tail-to-head orientation).
  EdgeSpectral edge_spectral(std::size_t i, cplx lambda) const;

 private:
  PeriodicGraph graph_;
  double guard_;
  std::vector<DiscretizedEdge> edges_;
  std::vector<DiscretizedEdge> dangling_;
};

FloquetMatrix reduced_matrix(const PeriodicGraph& g, cplx lambda, int slices = kDefaultSlices);
LaurentPoly dispersion_poly(const PeriodicGraph& g, cplx lambda, int slices = kDefaultSlices);

struct FermiRow {
  double k1;
  double k2;
  double abs_d;
  double log10_abs_d;
};

/// |D(lambda, e^{ik})| on a grid x grid lattice over [-pi, pi]^2 (both ends
/// included), k1 outer, k2 inner.
std::vector<FermiRow> fermi_slice(const PeriodicGraph& g, double lambda, int grid,
                                  int slices = kDefaultSlices);

/// CSV with header k1,k2,absD,log10absD and 17 significant digits.
std::string fermi_csv(const std::vector<FermiRow>& rows);

}  // namespace qg
