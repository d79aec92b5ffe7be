#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "qgraph/edge_spectral.hpp"

namespace qg {

struct NewtonOptions {
  int grid = 20;              // starts per axis
  double dedupe = 1e-6;       // roots closer than this are merged
  double residual_tol = 1e-8; // accepted |f(root)| after polishing
  int max_iterations = 60;
  int polish_iterations = 8;
};

/// Damped Newton with a central-difference derivative.
/// Returns the final iterate; `converged` reports whether the step fell below
/// tolerance before the iteration limit.
cplx newton_solve(const std::function<cplx(cplx)>& f, cplx start, int max_iterations,
                  bool* converged);

/// Roots of f inside `region` from a grid of starts.
///
/// `explore` drives the multistart phase (typically a cheap discretization of
/// f); every candidate is then polished with `polish` and kept only if
/// |polish(root)| <= residual_tol. Starts are laid out symmetrically in the
/// imaginary part so conjugate-symmetric problems give conjugate pairs.
/// Output is sorted by (real, imag).
std::vector<cplx> multistart_roots(const std::function<cplx(cplx)>& explore,
                                   const std::function<cplx(cplx)>& polish,
                                   const Region& region, const NewtonOptions& options = {});

}  // namespace qg
