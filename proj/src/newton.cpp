#include "qgraph/newton.hpp"

#include <algorithm>
#include <cmath>

namespace qg {

namespace {

bool inside(const Region& r, cplx z, double margin) {
  return z.real() >= r.re_min - margin && z.real() <= r.re_max + margin &&
         z.imag() >= r.im_min - margin && z.imag() <= r.im_max + margin;
}

}  // namespace

cplx newton_solve(const std::function<cplx(cplx)>& f, cplx start, int max_iterations,
                  bool* converged) {
  cplx z = start;
  cplx fz = f(z);
  bool done = false;
  for (int it = 0; it < max_iterations && std::isfinite(std::abs(fz)); ++it) {
    const double h = 1e-6 * std::max(1.0, std::abs(z));
    const cplx df = (f(z + h) - f(z - h)) / (2.0 * h);
    if (df == 0.0 || !std::isfinite(std::abs(df))) break;
    cplx step = fz / df;
    // Cap wild steps; the function is entire but Newton can overshoot far.
    const double cap = 10.0 * std::max(1.0, std::abs(z));
    if (std::abs(step) > cap) step *= cap / std::abs(step);
    cplx trial = z - step;
    cplx ftrial = f(trial);
    for (int k = 0; k < 12 && !(std::abs(ftrial) < std::abs(fz)); ++k) {
      step *= 0.5;
      trial = z - step;
      ftrial = f(trial);
    }
    z = trial;
    fz = ftrial;
    if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(z))) {
      done = true;
      break;
    }
  }
  if (converged) *converged = done;
  return z;
}

std::vector<cplx> multistart_roots(const std::function<cplx(cplx)>& explore,
                                   const std::function<cplx(cplx)>& polish,
                                   const Region& region, const NewtonOptions& options) {
  std::vector<cplx> roots;
  const int n = std::max(2, options.grid);
  const double dx = (region.re_max - region.re_min) / (n - 1);
  const double dy = (region.im_max - region.im_min) / (n - 1);
  const double margin = 1e-9 * std::max(1.0, std::abs(cplx(region.re_max, region.im_max)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx start(region.re_min + dx * i, region.im_min + dy * j);
      bool ok = false;
      cplx z = newton_solve(explore, start, options.max_iterations, &ok);
      if (!std::isfinite(std::abs(z)) || !inside(region, z, 1.0)) continue;
      z = newton_solve(polish, z, options.polish_iterations, &ok);
      if (!std::isfinite(std::abs(z)) || !inside(region, z, margin)) continue;
      if (!(std::abs(polish(z)) <= options.residual_tol)) continue;
      const bool dup = std::any_of(roots.begin(), roots.end(),
                                   [&](cplx r) { return std::abs(r - z) < options.dedupe; });
      if (!dup) roots.push_back(z);
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

}  // namespace qg
