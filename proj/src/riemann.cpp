#include "qgraph/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/newton.hpp"

namespace qg {

std::pair<cplx, cplx> mu_branches(cplx a) {
  cplx mu = std::sqrt(a * a + 1.0);
  if (mu.real() == 0.0 && mu.imag() < 0.0) mu = -mu;
  return {mu, -mu};
}

Matrix2 n_matrix(cplx a) {
  Matrix2 n;
  n << -a, 1.0, 1.0, a;
  return n;
}

Matrix2 eigenprojection(cplx a, cplx mu) {
  if (!(std::abs(mu) > 1e-12))
    throw RamificationError(fmt::format("|mu| = {:.3e} at a ramification point", std::abs(mu)));
  if (std::abs(mu * mu - (a * a + 1.0)) > 1e-10 * std::max(1.0, std::abs(mu * mu)))
    throw DomainError("mu is not a square root of a^2 + 1");
  Matrix2 p;
  p << mu - a, 1.0, 1.0, mu + a;
  return p / (2.0 * mu);
}

std::vector<BranchPoint> branch_points(const Potential& p, const Region& region, int slices) {
  const DiscretizedEdge fine(p, slices);
  const DiscretizedEdge coarse(p, std::min(slices, 128));
  std::vector<BranchPoint> out;
  // a vanishes identically for symmetric q.
  const auto probe = default_class_grid();
  if (std::all_of(probe.begin(), probe.end(),
                  [&](cplx l) { return std::abs(fine.spectral(l).a) < 1e-12; }))
    return out;
  const cplx I(0.0, 1.0);
  for (int sign : {+1, -1}) {
    auto f_fine = [&](cplx l) { return fine.spectral(l).a - double(sign) * I; };
    auto f_coarse = [&](cplx l) { return coarse.spectral(l).a - double(sign) * I; };
    for (cplx root : multistart_roots(f_coarse, f_fine, region))
      out.push_back({root, sign, std::abs(f_fine(root))});
  }
  std::sort(out.begin(), out.end(), [](const BranchPoint& x, const BranchPoint& y) {
    if (x.lambda0.real() != y.lambda0.real()) return x.lambda0.real() < y.lambda0.real();
    return x.lambda0.imag() < y.lambda0.imag();
  });
  return out;
}

std::vector<cplx> continue_mu(const Potential& p, const std::vector<cplx>& path, int start_sign,
                              int slices) {
  if (start_sign != 1 && start_sign != -1) throw DomainError("start_sign must be +1 or -1");
  const DiscretizedEdge edge(p, slices);
  std::vector<cplx> mus;
  mus.reserve(path.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    const cplx mu = mu_branches(edge.spectral(path[i]).a).first;
    if (i == 0) {
      mus.push_back(double(start_sign) * mu);
      continue;
    }
    const cplx prev = mus.back();
    const double d_plus = std::abs(mu - prev);
    const double d_minus = std::abs(-mu - prev);
    // The two candidates are 2|mu| apart; demand a clear winner.
    if (std::min(d_plus, d_minus) > 0.25 * std::max(d_plus, d_minus))
      throw NumericalError(fmt::format("mu continuation ambiguous at path index {}", i));
    mus.push_back(d_plus <= d_minus ? mu : -mu);
  }
  return mus;
}

std::vector<cplx> circle_path(cplx center, double radius, int points) {
  std::vector<cplx> path;
  path.reserve(points + 1);
  for (int k = 0; k <= points; ++k) {
    const double t = 2.0 * std::numbers::pi * double(k % points) / double(points);
    path.push_back(center + radius * cplx(std::cos(t), std::sin(t)));
  }
  return path;
}

}  // namespace qg
