#include <doctest.h>

#include <random>

#include "qgraph/errors.hpp"
#include "qgraph/graph_model.hpp"
#include "qgraph/riemann.hpp"

using namespace qg;

namespace {

const std::vector<BranchPoint>& step_points() {
  static const std::vector<BranchPoint> pts =
      branch_points(builtin_potential("step"), Region{-50, 50, -50, 50});
  return pts;
}

}  // namespace

TEST_CASE("mu branches") {
  auto [m0, n0] = mu_branches(0.0);
  CHECK(m0 == cplx(1.0));
  CHECK(n0 == cplx(-1.0));
  auto [mi, ni] = mu_branches(cplx(0.0, 1.0));
  CHECK(std::abs(mi) < 1e-15);
  CHECK(std::abs(ni) < 1e-15);
  auto [m1, n1] = mu_branches(1.0);
  CHECK(std::abs(m1 - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(n1 + std::sqrt(2.0)) < 1e-15);
  // Purely imaginary mu takes the upper half plane.
  auto [mj, nj] = mu_branches(cplx(0.0, 2.0));
  CHECK(mj.imag() > 0.0);
  CHECK(mj.real() == 0.0);
}

TEST_CASE("eigenprojection examples") {
  const Matrix2 p = eigenprojection(0.0, 1.0);
  CHECK((p - 0.5 * Matrix2::Ones()).norm() < 1e-15);
  Matrix2 q_ref;
  q_ref << 0.5, -0.5, -0.5, 0.5;
  CHECK((eigenprojection(0.0, -1.0) - q_ref).norm() < 1e-15);
  const double r2 = std::sqrt(2.0);
  const Matrix2 p1 = eigenprojection(1.0, r2);
  Matrix2 ref;
  ref << r2 - 1.0, 1.0, 1.0, r2 + 1.0;
  ref /= 2.0 * r2;
  CHECK((p1 - ref).norm() < 1e-15);
  CHECK((p1 * p1 - p1).norm() < 1e-12);
  CHECK_THROWS_AS(eigenprojection(cplx(0.0, 1.0), 0.0), RamificationError);
}

TEST_CASE("property: projection identities") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const cplx a(u(rng), u(rng));
    auto [mu, nmu] = mu_branches(a);
    CHECK(std::abs(mu * mu - (a * a + 1.0)) < 1e-14 * std::max(1.0, std::abs(a * a + 1.0)));
    if (std::abs(mu) < 1e-6) continue;
    const Matrix2 p = eigenprojection(a, mu);
    const Matrix2 q = eigenprojection(a, nmu);
    CHECK((p * p - p).norm() < 1e-10);
    CHECK((p + q - Matrix2::Identity()).norm() < 1e-10);
    CHECK((n_matrix(a) * p - mu * p).norm() < 1e-10);
  }
}

TEST_CASE("branch points of symmetric potentials") {
  CHECK(branch_points(Potential::zero(), Region{-50, 50, -50, 50}).empty());
  CHECK(branch_points(builtin_potential("well"), Region{-20, 20, -20, 20}).empty());
}

TEST_CASE("branch points of the step potential") {
  const auto& pts = step_points();
  REQUIRE(pts.size() >= 2);
  const DiscretizedEdge edge(builtin_potential("step"));
  for (const auto& bp : pts) {
    const cplx a = edge.spectral(bp.lambda0).a;
    CHECK(std::abs(a - double(bp.sign) * cplx(0.0, 1.0)) < 1e-8);
    CHECK(bp.newton_residual < 1e-8);
    // Conjugate partner with opposite sign.
    bool paired = false;
    for (const auto& other : pts)
      if (std::abs(other.lambda0 - std::conj(bp.lambda0)) < 1e-6 && other.sign == -bp.sign) paired = true;
    CHECK(paired);
  }
}

TEST_CASE("continuation of mu") {
  const auto loop = circle_path(cplx(3.0, 2.0), 1.0, 64);
  CHECK(loop.front() == loop.back());
  for (cplx m : continue_mu(Potential::zero(), loop, 1)) CHECK(std::abs(m - 1.0) < 1e-14);

  const Potential step = builtin_potential("step");
  const auto& pts = step_points();
  REQUIRE(!pts.empty());
  for (const auto& bp : pts) {
    const auto mus = continue_mu(step, circle_path(bp.lambda0, 0.5, 256), 1);
    CHECK(std::abs(mus.back() + mus.front()) < 1e-6);
  }
  const auto empty = continue_mu(step, circle_path(cplx(5.0, 5.0), 0.5, 256), 1);
  CHECK(std::abs(empty.back() - empty.front()) < 1e-8);
  const auto neg = continue_mu(step, circle_path(cplx(5.0, 5.0), 0.5, 16), -1);
  CHECK(neg.front() == -mu_branches(DiscretizedEdge(step).spectral(cplx(5.5, 5.0)).a).first);
  CHECK_THROWS_AS(continue_mu(step, {cplx(1.0), cplx(2.0)}, 0), DomainError);
}

TEST_CASE("continuation refuses steps that jump across a branch point") {
  const Potential step = builtin_potential("step");
  const cplx c = step_points().front().lambda0;
  CHECK_THROWS_AS(continue_mu(step, circle_path(c, 8.0, 3), 1), NumericalError);
}
