// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "qgraph/errors.hpp"
#include "qgraph/reducibility.hpp"
#include "qgraph/riemann.hpp"

#ifndef QGRAPH_CLI_PATH
#error "QGRAPH_CLI_PATH must name the qgraph executable"
#endif

using namespace qg;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

BilayerSpec bilayer(const std::string& name, const std::vector<std::string>& connectors) {
  BilayerSpec spec = std::get<BilayerSpec>(builtin_graph(name));
  std::size_t i = 0;
  for (const auto& v : spec.layer.vertices)
    spec.connectors.insert_or_assign(v.id, builtin_potential(connectors[i++ % connectors.size()]));
  return spec;
}

/// `count` energies from a fixed stream, every third one real, all outside
/// the Dirichlet guard of `model`.
std::vector<cplx> guarded_lambdas(const FloquetModel& model, int count, std::uint64_t seed,
                                  double re_lo = -5.0, double re_hi = 40.0, double im_abs = 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(re_lo, re_hi);
  std::uniform_real_distribution<double> im(-im_abs, im_abs);
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < count) {
    const cplx l(re(rng), out.size() % 3 == 0 ? 0.0 : im(rng));
    if (model.guard_ok(l)) out.push_back(l);
  }
  return out;
}

Verdict criterion1() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  double det_res = 0.0, wr_res = 0.0, cs_res = 0.0;
  int tested = 0;
  for (const std::string name : {"constant", "step", "trig", "well", "table"}) {
    const Potential p = builtin_potential(name);
    const DiscretizedEdge edge(p);
    int n = 0;
    while (n < 20) {
      const cplx l(u(rng), u(rng));
      if (std::abs(l) > 30.0) continue;
      const EdgeSpectral e = edge.spectral(l);
      if (!(std::abs(e.s) > kDirichletGuard)) continue;
      det_res = std::max(det_res, std::abs(transfer_matrix(e).determinant() + 1.0));
      wr_res = std::max(wr_res, std::abs(e.c * e.s_prime - e.s * e.c_prime - 1.0));
      cs_res = std::max(cs_res, check_csrelations(p, l).max());
      ++n;
      ++tested;
    }
  }
  return {det_res < 1e-9 && wr_res < 1e-9 && cs_res < 1e-9,
          fmt::format("{} samples, max |det T + 1| = {:.2e}, max Wronskian residual = {:.2e}, max csrelations = {:.2e}",
                      tested, det_res, wr_res, cs_res)};
}

Verdict criterion2() {
  std::vector<cplx> grid = default_class_grid();
  for (int k = 0; k < 24; ++k) grid.emplace_back(-10.0 + 2.5 * k, 0.0);
  for (int k = 0; k < 12; ++k) grid.push_back(std::polar(5.0 + 3.0 * k, 0.4 * k));
  double sym_max = 0.0;
  for (const std::string name : {"zero", "constant", "well"}) {
    const DiscretizedEdge e(builtin_potential(name));
    for (cplx l : grid) sym_max = std::max(sym_max, std::abs(e.spectral(l).a));
  }
  double step_max = 0.0;
  const DiscretizedEdge step(builtin_potential("step"));
  for (cplx l : grid) step_max = std::max(step_max, std::abs(step.spectral(l).a));

  // Commutators at real energies away from every Dirichlet eigenvalue involved.
  std::vector<double> poles;
  for (const std::string name : {"zero", "well", "step"})
    for (double z : dirichlet_eigenvalues(builtin_potential(name), 60.0)) poles.push_back(z);
  double same_max = 0.0;
  double diff_min = 1e300;
  int tested = 0;
  for (int k = 0; k < 60; ++k) {
    const double l = -5.0 + k;
    bool near = false;
    for (double z : poles) near = near || std::abs(l - z) < 0.5;
    if (near) continue;
    const Matrix2 g0 = dtn_matrix(Potential::zero(), l);
    const Matrix2 gw = dtn_matrix(builtin_potential("well"), l);
    const Matrix2 gs = dtn_matrix(builtin_potential("step"), l);
    same_max = std::max(same_max, (g0 * gw - gw * g0).norm());
    diff_min = std::min(diff_min, (g0 * gs - gs * g0).norm());
    ++tested;
  }
  const bool pass = sym_max < 1e-10 && step_max > 1e-2 && same_max < 1e-8 && diff_min > 1e-3;
  return {pass, fmt::format("symmetric max |a| = {:.2e}, step max |a| = {:.3g}, commutator same class max = {:.2e}, "
                            "step vs zero min = {:.3g} over {} energies",
                            sym_max, step_max, same_max, diff_min, tested)};
}

Verdict criterion3() {
  const std::vector<cplx> lambdas{{0.5, 0.0}, {1.0, 0.0},  {1.5, 0.5}, {2.0, 0.0},  {3.0, -1.0},
                                  {4.0, 0.0}, {5.0, 2.0}, {6.0, 0.0}, {8.0, -0.5}, {10.0, 0.0}};
  double worst = 0.0;
  double worst_ratio = 1e300;
  for (const std::string name : {"step", "trig"}) {
    const Potential p = builtin_potential(name);
    for (cplx l : lambdas) {
      const double r1 = check_intqcc(p, l, 1024);
      const double r2 = check_intqcc(p, l, 2048);
      worst = std::max(worst, r1);
      worst_ratio = std::min(worst_ratio, r1 / r2);
    }
  }
  return {worst < 1e-6 && worst_ratio >= 2.0,
          fmt::format("max residual at 1024 slices = {:.2e}, min residual ratio 1024/2048 = {:.3f}", worst, worst_ratio)};
}

const std::vector<BranchPoint>& step_branch_points() {
  static const std::vector<BranchPoint> pts = branch_points(builtin_potential("step"), Region{-50, 50, -50, 50});
  return pts;
}

Verdict criterion4() {
  const auto& pts = step_branch_points();
  double worst = 0.0;
  std::string where;
  for (const auto& bp : pts) {
    const double e = a_derivative_at_branch(builtin_potential("step"), bp.lambda0).relative_error();
    worst = std::max(worst, e);
    where += fmt::format(" ({:.6f}{:+.6f}i)", bp.lambda0.real(), bp.lambda0.imag());
  }
  return {pts.size() >= 2 && worst < 1e-4,
          fmt::format("{} branch points{}; max relative error = {:.2e}", pts.size(), where, worst)};
}

Verdict criterion5() {
  const Potential step = builtin_potential("step");
  const auto& pts = step_branch_points();
  if (pts.empty()) return {false, "no branch point located"};
  const auto around = continue_mu(step, circle_path(pts.front().lambda0, 0.5, 256), 1);
  const double flip = std::abs(around.back() + around.front());
  const auto empty = continue_mu(step, circle_path(cplx(5.0, 5.0), 0.5, 256), 1);
  const double stay = std::abs(empty.back() - empty.front());
  return {flip < 1e-6 && stay < 1e-8,
          fmt::format("around branch point |final + initial| = {:.2e}; empty loop |final - initial| = {:.2e}", flip, stay)};
}

Verdict criterion6() {
  struct Case {
    std::string model;
    std::vector<std::string> connectors;
  };
  const std::vector<Case> cases{{"bilayer_square", {"step"}},
                                {"bilayer_square", {"well"}},
                                {"graphene_bilayer", {"step", "step"}},
                                {"graphene_bilayer", {"zero", "well"}}};
  double worst = 0.0;
  int total = 0;
  std::uint64_t seed = 6000;
  for (const auto& c : cases) {
    const SameClassFactorizer f(bilayer(c.model, c.connectors));
    for (cplx l : guarded_lambdas(f.bilayer(), 50, ++seed)) {
      worst = std::max(worst, f(l).product_residual);
      ++total;
    }
  }
  return {worst < 1e-7, fmt::format("{} factorizations over 4 configurations, max product residual = {:.2e}", total, worst)};
}

Verdict criterion7() {
  struct Case {
    std::string layer;
    std::string connector;
  };
  double worst = 0.0;
  int total = 0;
  std::uint64_t seed = 7000;
  for (const Case& c : {Case{"square_lattice", "well"}, Case{"graphene_layer", "constant"}}) {
    const PeriodicGraph layer = std::get<PeriodicGraph>(builtin_graph(c.layer));
    const Potential conn = builtin_potential(c.connector);
    const FloquetModel decorated_n(build_decorated_layer(layer, conn, EndCondition::neumann));
    const FloquetModel decorated_d(build_decorated_layer(layer, conn, EndCondition::dirichlet));
    BilayerSpec spec;
    spec.layer = layer;
    for (const auto& v : layer.vertices) spec.connectors.emplace(v.id, conn);
    const FloquetModel full(build_bilayer(spec));
    std::mt19937_64 rng(++seed);
    std::uniform_real_distribution<double> re(-5.0, 40.0), im(-3.0, 3.0);
    int n = 0;
    while (n < 20) {
      const cplx l(re(rng), n % 3 == 0 ? 0.0 : im(rng));
      if (!full.guard_ok(l) || !decorated_n.guard_ok(l) || !decorated_d.guard_ok(l)) continue;
      const DecoratedReport r = decorated_equivalence(layer, conn, l);
      worst = std::max({worst, r.neumann_residual, r.dirichlet_residual});
      ++n;
      ++total;
    }
  }
  return {worst < 1e-8, fmt::format("{} energies over 2 layers, max residual = {:.2e}", total, worst)};
}

Verdict criterion8() {
  const GrapheneReducer red(bilayer("graphene_bilayer", {"step", "zero"}));
  std::mt19937_64 rng(8000);
  std::uniform_real_distribution<double> angle(-pi, pi);
  std::uniform_real_distribution<double> radius(0.7, 1.4);
  double quad = 0.0, collapse = 0.0, kernel = 0.0;
  int pairs = 0;
  for (cplx l : guarded_lambdas(red.bilayer(), 50, 8001)) {
    const GrapheneReport rep = red(l);
    quad = std::max(quad, rep.quad_residual);
    int matched = 0;
    while (matched < 20) {
      const std::vector<cplx> z{std::polar(1.0, angle(rng)), std::polar(1.0, angle(rng))};
      const auto others = red.points_with_ww(rep, std::polar(radius(rng), angle(rng)), rep.ww.evaluate(z));
      if (others.empty()) continue;
      collapse = std::max(collapse, evaluation_difference(rep.full, z, others.front()));
      ++matched;
      ++pairs;
    }
    for (int k = 0; k < 2; ++k) {
      const cplx zeta = k == 0 ? rep.zeta_eigs.first : rep.zeta_eigs.second;
      for (const auto& z : red.points_with_ww(rep, std::polar(1.0, angle(rng)), zeta))
        kernel = std::max(kernel, red.kernel_residual(rep, k, z));
    }
  }
  return {quad < 1e-7 && collapse < 1e-8 && kernel < 1e-7,
          fmt::format("50 energies: max quad residual = {:.2e}, collapse over {} pairs = {:.2e}, kernel residual = {:.2e}",
                      quad, pairs, collapse, kernel)};
}

Verdict criterion9() {
  const auto pts = f0_intersection();
  const cplx e = std::polar(1.0, pi / 3.0);
  const std::vector<std::pair<cplx, cplx>> expected{{e, std::conj(e)}, {std::conj(e), e}};
  double worst = 0.0;
  for (const auto& [ez1, ez2] : expected) {
    double best = 1e300;
    for (const auto& [z1, z2] : pts) best = std::min(best, std::max(std::abs(z1 - ez1), std::abs(z2 - ez2)));
    worst = std::max(worst, best);
  }
  std::string found;
  for (const auto& [z1, z2] : pts)
    found += fmt::format(" (e^{{{:+.6f}i}}, e^{{{:+.6f}i}})", std::arg(z1), std::arg(z2));
  const bool pass = pts.size() == expected.size() && worst < 1e-10;
  return {pass, fmt::format("computed intersection:{}; distance to the e^(+-i pi/3) pair = {:.3g}; "
                            "residual of 1 + z1 + z2 at e^(i pi/3) pair = {:.3g}",
                            found, worst, std::abs(1.0 + e + std::conj(e)))};
}

Verdict criterion10() {
  const Square7Analyzer same(bilayer("bilayer_double_square_7", {"step", "step"}));
  const Square7Analyzer diff(bilayer("bilayer_double_square_7", {"step", "zero"}));
  double same_worst = 0.0;
  int same_agree = 0;
  const auto same_l = guarded_lambdas(same.bilayer(), 50, 10001, 0.2, 30.0, 2.0);
  for (cplx l : same_l) {
    const Square7Report r = same(l);
    same_worst = std::max(same_worst, std::abs(r.discriminant_d2) / r.scale);
    same_agree += r.reducible == r.graph_square;
  }
  int irreducible = 0;
  int diff_agree = 0;
  double diff_min = 1e300;
  const auto diff_l = guarded_lambdas(diff.bilayer(), 50, 10002, 0.2, 30.0, 2.0);
  for (cplx l : diff_l) {
    const Square7Report r = diff(l);
    const double ratio = std::abs(r.discriminant_d2) / r.scale;
    diff_min = std::min(diff_min, ratio);
    irreducible += ratio > 1e-4;
    diff_agree += r.reducible == r.graph_square;
  }
  const bool pass = same_worst < 1e-8 && irreducible >= 45 && same_agree == 50 && diff_agree == 50;
  return {pass, fmt::format("identical: max |D2|/scale = {:.2e}; step vs zero: {}/50 above 1e-4 (min {:.2e}); "
                            "square-test agreement {}/50 and {}/50",
                            same_worst, irreducible, diff_min, same_agree, diff_agree)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Verdict criterion11() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / fmt::format("qgraph_acceptance_{}", static_cast<long>(std::time(nullptr)));
  fs::create_directories(dir);
  std::array<std::string, 2> outputs;
  for (int i = 0; i < 2; ++i) {
    const fs::path out = dir / fmt::format("suite{}.json", i);
    const std::string cmd = fmt::format("\"{}\" suite --out \"{}\"", QGRAPH_CLI_PATH, out.string());
    if (std::system(cmd.c_str()) != 0) {
      fs::remove_all(dir);
      return {false, fmt::format("suite run {} failed", i + 1)};
    }
    outputs[i] = read_file(out);
  }
  fs::remove_all(dir);
  const bool same = !outputs[0].empty() && outputs[0] == outputs[1];
  return {same, fmt::format("two suite runs, {} bytes each, {}", outputs[0].size(), same ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Verdict()> run;
    double time_limit;  // seconds; 0 when unbounded
  };
  const std::vector<Criterion> criteria{
      {1, "edge identities", criterion1, 5.0},
      {2, "A-function characterization", criterion2, 5.0},
      {3, "odd-part integral identity", criterion3, 0.0},
      {4, "branch-point derivative", criterion4, 0.0},
      {5, "monodromy of mu", criterion5, 0.0},
      {6, "same-class factorization", criterion6, 60.0},
      {7, "decorated-layer equivalence", criterion7, 0.0},
      {8, "bipartite composite-variable reduction", criterion8, 0.0},
      {9, "F_0 component intersection points", criterion9, 0.0},
      {10, "double-square irreducibility criterion", criterion10, 60.0},
      {11, "CLI determinism", criterion11, 0.0},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, fmt::format("exception: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      v.pass = false;
      v.detail += fmt::format("; exceeded {:.0f} s limit", c.time_limit);
    }
    failures += !v.pass;
    std::cout << fmt::format("{} criterion {:>2} ({}): {} [{:.2f} s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name,
                             v.detail, secs)
              << std::flush;
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
