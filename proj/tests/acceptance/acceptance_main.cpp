// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion.  Returns the number of failures.
//
// The wall-clock comparison of criterion 10 is expensive and disabled by
// default; set MLSWE_RUN_SLOW=1 to include it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "core/cases.hpp"
#include "core/moving_solver.hpp"
#include "core/runner.hpp"
#include "core/wave_speed.hpp"
#include "../test_util.hpp"

using namespace mlswe;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void record(const std::string &name, bool pass, const std::string &detail) {
  std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass)
    ++g_failures;
}

void record_skip(const std::string &name, const std::string &why) {
  std::printf("SKIP  %-28s %s\n", name.c_str(), why.c_str());
  std::fflush(stdout);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

fs::path outdir(const std::string &tag) {
  fs::path p = fs::temp_directory_path() / "mlswe_acceptance" / tag;
  fs::remove_all(p);
  return p;
}

RunResult run_case(const std::string &name, int layers, int n1, int n2,
                   bool moving, const std::string &tag,
                   const std::string &dt_policy = "standard") {
  RunConfig cfg;
  cfg.case_name = name;
  cfg.layers = layers;
  cfg.n1 = n1;
  cfg.n2 = n2;
  cfg.moving = moving;
  cfg.dt_policy = dt_policy;
  cfg.outdir = outdir(tag).string();
  return run(cfg);
}

// --- criteria 1 and 2: well-balance on fixed and moving meshes -------------

void criterion_wb(bool moving) {
  const double tol = moving ? 1e-11 : 1e-12;
  double worst_surf = 0.0, worst_vel = 0.0;
  bool ok = true;
  for (const char *name :
       {"wb-1d-smooth", "wb-1d-step", "wb-2d-smooth", "wb-2d-step"}) {
    const bool two_dim = std::string(name).find("2d") != std::string::npos;
    for (int M : {2, 3}) {
      const RunResult r =
          run_case(name, M, two_dim ? 100 : 50, two_dim ? 100 : 0, moving,
                   std::string("wb_") + (moving ? "mm_" : "um_") + name +
                       "_" + std::to_string(M));
      worst_surf = std::max(worst_surf, r.metrics.at("max_surface_err"));
      worst_vel = std::max(worst_vel, r.metrics.at("max_velocity"));
      ok = ok && r.metrics.at("max_surface_err") <= tol &&
           r.metrics.at("max_velocity") <= 1e-12;
    }
  }
  record(moving ? "02-wb-moving-mesh" : "01-wb-fixed-mesh", ok,
         "max surface err " + fmt(worst_surf) + " (tol " + fmt(tol) +
             "), max |u| " + fmt(worst_vel));
}

// --- criteria 3 and 4: convergence ------------------------------------------

void criterion_convergence_1d() {
  bool ok = true;
  std::string detail;
  for (int M : {2, 3}) {
    std::vector<int> ns = {25, 50, 100, 200};
    std::vector<double> errs;
    for (int n : ns) {
      const RunResult r = run_case("accuracy-1d", M, n, 0, false,
                                   "conv1d_" + std::to_string(M) + "_" +
                                       std::to_string(n),
                                   "accuracy");
      errs.push_back(r.metrics.at("l1_err_u2"));
    }
    const auto orders = convergence_orders(ns, errs);
    const double final_order = orders.back();
    ok = ok && final_order >= 4.5;
    detail += (M == 2 ? "2L order " : "; 3L order ") + fmt(final_order);
  }
  record("03-convergence-1d", ok, detail + " (need >= 4.5)");
}

void criterion_convergence_2d() {
  std::vector<int> ns = {20, 40, 80};
  std::vector<double> errs;
  for (int n : ns) {
    const RunResult r = run_case("accuracy-2d", 2, n, n, false,
                                 "conv2d_" + std::to_string(n), "accuracy");
    errs.push_back(r.metrics.at("l1_err_u2"));
  }
  const double final_order = convergence_orders(ns, errs).back();
  record("04-convergence-2d", final_order >= 4.3,
         "finest-pair order " + fmt(final_order) + " (need >= 4.3)");
}

// --- criterion 5: energy decay ----------------------------------------------

void criterion_energy_decay() {
  bool ok = true;
  double worst = -1.0;
  for (const char *name : {"dambreak-1d", "perturb-1d"}) {
    for (bool moving : {false, true}) {
      const RunResult r =
          run_case(name, 2, 400, 0, moving,
                   std::string("energy_") + name + (moving ? "_mm" : "_um"));
      ok = ok && r.metrics.at("energy_monotone") == 1.0;
      worst = std::max(worst, r.metrics.at("energy_worst_growth"));
    }
  }
  record("05-energy-decay", ok,
         "worst step growth " + fmt(worst) + " (slack 1e-08)");
}

// --- criteria 6-9: structural oracles ----------------------------------------

struct Rng {
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  double next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return static_cast<double>(s >> 11) / 9007199254740992.0;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * next(); }
};

LayerSystem random_system(Rng &rng, int M) {
  std::vector<double> rho(M);
  double r = rng.uniform(0.5, 1.0);
  for (int m = 0; m < M; ++m) {
    rho[m] = r;
    r += rng.uniform(0.1, 0.5);
  }
  return LayerSystem(rho, 9.812);
}

NodeState random_node(Rng &rng, int M) {
  NodeState n(M);
  for (int m = 0; m < M; ++m) {
    n.h[m] = rng.uniform(0.1, 10.0);
    n.u[m] = rng.uniform(-5.0, 5.0);
    n.v[m] = rng.uniform(-5.0, 5.0);
  }
  n.b = rng.uniform(-2.0, 2.0);
  return n;
}

void criterion_ec_oracle() {
  Rng rng;
  double worst = 0.0, worst_split = 0.0;
  for (int M : {2, 3}) {
    for (int dir : {1, 2}) {
      for (int it = 0; it < 1000; ++it) {
        LayerSystem sys = random_system(rng, M);
        NodeState a = random_node(rng, M), b = random_node(rng, M);
        std::vector<double> F(3 * M), Va(3 * M), Vb(3 * M);
        ec_two_point_flux(sys, dir, a, b, F.data());
        entropy_variables(sys, a, Va.data());
        entropy_variables(sys, b, Vb.data());
        double scale = 1.0;
        for (int c = 0; c < 3 * M; ++c)
          scale += std::abs((Vb[c] - Va[c]) * F[c]);
        const double res = ec_condition_residual(sys, dir, a, b, F.data());
        worst = std::max(worst, res / scale);
        double split = 0.0;
        for (int m = 1; m <= M; ++m)
          split += ec_condition_residual_layer(sys, dir, a, b, F.data(), m);
        worst_split = std::max(worst_split,
                               std::abs(std::abs(split) - res) / scale);
      }
    }
  }
  record("06-ec-condition-oracle", worst <= 1e-12 && worst_split <= 1e-13,
         "residual " + fmt(worst) + " (tol 1e-12), split gap " +
             fmt(worst_split));
}

void criterion_energy_algebra() {
  Rng rng;
  bool ok = true;
  double worst_det = 0.0, worst_quad = 0.0, worst_chol = 0.0,
         worst_grad = 0.0;
  for (int it = 0; it < 400; ++it) {
    const int M = 1 + it % 5;
    LayerSystem sys = random_system(rng, M);
    NodeState n = random_node(rng, M);
    const Eigen::MatrixXd H = hessian(sys, n.h.data(), n.u.data(), n.v.data());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    ok = ok && es.eigenvalues().minCoeff() > 1e-10 * H.trace();
    const double det = H.determinant();
    const double formula = hessian_determinant_formula(sys, n.h.data());
    worst_det = std::max(worst_det, std::abs(det - formula) /
                                        std::abs(formula));
    Eigen::VectorXd beta(3 * M);
    for (int c = 0; c < 3 * M; ++c)
      beta[c] = rng.uniform(-2.0, 2.0);
    const double closed = quadratic_form(sys, n.h.data(), n.u.data(),
                                         n.v.data(), beta.data());
    worst_quad = std::max(worst_quad,
                          std::abs(closed - beta.dot(H * beta)) /
                              (beta.squaredNorm() * H.cwiseAbs().maxCoeff()));
    if (M == 2 || M == 3) {
      const Eigen::MatrixXd R =
          scaling_r_dense(sys, n.h.data(), n.u.data(), n.v.data());
      worst_chol =
          std::max(worst_chol, (R * R.transpose() * H -
                                Eigen::MatrixXd::Identity(3 * M, 3 * M))
                                   .cwiseAbs()
                                   .maxCoeff());
    }
    if (it % 10 == 0) {
      std::vector<double> V(3 * M);
      entropy_variables(sys, n, V.data());
      auto U = mlswe::testing::conserved_of(n);
      const auto G = mlswe::testing::fd_gradient(
          U, n.b,
          [&](const NodeState &q) { return energy_density(sys, q); });
      for (int c = 0; c < 3 * M; ++c)
        worst_grad = std::max(worst_grad, std::abs(V[c] - G[c]) /
                                              (std::abs(V[c]) + 1.0));
    }
  }
  ok = ok && worst_det <= 1e-9 && worst_quad <= 1e-11 && worst_chol <= 1e-9 &&
       worst_grad <= 1e-5;
  record("07-energy-algebra", ok,
         "det " + fmt(worst_det) + ", quad " + fmt(worst_quad) + ", chol " +
             fmt(worst_chol) + ", grad " + fmt(worst_grad));
}

void criterion_wave_speed() {
  Rng rng;
  double worst = -1e30;
  int checked = 0;
  for (int M : {2, 3}) {
    for (int it = 0; it < 4000 && checked < 2000; ++it) {
      LayerSystem sys = random_system(rng, M);
      NodeState n = random_node(rng, M);
      const Eigen::MatrixXd A =
          quasilinear_matrix(sys, n.h.data(), n.u.data(), n.v.data(), 1);
      Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
      double scale = 0.0;
      bool complex = false;
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        scale = std::max(scale, std::abs(es.eigenvalues()[i]));
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()[i].imag()) >
            1e-7 * std::max(1.0, scale))
          complex = true;
      if (complex)
        continue;
      ++checked;
      double need = 0.0;
      for (int i = 0; i < es.eigenvalues().size(); ++i)
        need = std::max(need, std::abs(es.eigenvalues()[i].real()));
      const double a =
          max_wave_speed(sys, 1, n.h.data(), n.u.data(), n.v.data());
      worst = std::max(worst, need - a);
    }
  }
  // closed two-layer case: bound sqrt(2) vs exact root 1 at rest, r = 0
  LayerSystem degen({1e-12, 1.0}, 1.0);
  NodeState rest(2);
  rest.h = {1.0, 1.0};
  const double a0 =
      max_wave_speed(degen, 1, rest.h.data(), rest.u.data(), rest.v.data());
  const bool closed_ok = std::abs(a0 - std::sqrt(2.0)) <= 1e-9 && a0 >= 1.0;
  record("08-wave-speed-dominance",
         worst <= 1e-9 && checked >= 1500 && closed_ok,
         "worst (maxEig - alpha) " + fmt(worst) + " over " +
             std::to_string(checked) + " hyperbolic states; rest bound " +
             fmt(a0));
}

void criterion_moving_structure() {
  // free stream on a smooth prescribed motion, SCL residuals, and the
  // identity-mesh reduction against the fixed solver
  LayerSystem sys({0.7, 1.0}, 1.0);
  Grid g(20, 16, 0.0, 2.0, 0.0, 2.0, Boundary::periodic, Boundary::periodic);
  SchemeConfig sc;
  MovingSolver ms(sys, g, sc, default_gamma(sys));
  const Grid &wg = ms.mesh().coord_grid();
  for (int j = 0; j < g.n2(); ++j) {
    for (int i = 0; i < g.n1(); ++i) {
      const double s1 = std::sin(M_PI * g.x1(i));
      const double s2 = std::sin(M_PI * g.x2(j));
      ms.mesh().x1(wg, i, j) = g.x1(i) + 0.05 * s1 * s2;
      ms.mesh().x2(wg, i, j) = g.x2(j) + 0.04 * s1 * s2;
      ms.mesh().xdot1(wg, i, j) = 0.12 * s1 * std::cos(0.5 * M_PI * s2);
      ms.mesh().xdot2(wg, i, j) = -0.1 * std::cos(0.5 * M_PI * s1) * s2;
      ms.phys().h[0](g, i, j) = 1.25;
      ms.phys().hu[0](g, i, j) = 1.25 * 0.375;
      ms.phys().hv[0](g, i, j) = -1.25 * 0.125;
      ms.phys().h[1](g, i, j) = 2.5;
      ms.phys().hu[1](g, i, j) = 2.5 * 0.0625;
      ms.phys().hv[1](g, i, j) = 2.5 * 0.5;
      ms.phys().b(g, i, j) = 0.75;
    }
  }
  ms.sync_from_phys();
  const double scl = ms.scl_residual();
  for (int s = 0; s < 100; ++s)
    ms.step(0.003);
  double drift = 0.0;
  for (int j = 0; j < g.n2(); ++j)
    for (int i = 0; i < g.n1(); ++i) {
      drift = std::max(drift, std::abs(ms.phys().h[0](g, i, j) - 1.25));
      drift = std::max(drift, std::abs(ms.phys().hv[1](g, i, j) - 2.5 * 0.5));
      drift = std::max(drift, std::abs(ms.phys().b(g, i, j) - 0.75));
    }

  // identity-mesh reduction on smooth data
  CaseSetup cs = make_case("accuracy-1d", 2);
  Grid g1(60, 1, cs.x1lo, cs.x1hi, 0.0, 1.0, cs.bc1, Boundary::outflow);
  FixedSolver fixed(cs.sys, g1, sc);
  MovingSolver moving(cs.sys, g1, sc, default_gamma(cs.sys));
  fixed.set_source(cs.source);
  moving.set_source(cs.source);
  NodeState n(2);
  for (int i = 0; i < g1.n1(); ++i) {
    cs.initial(g1.x1(i), 0.0, n);
    fixed.state().set_node(g1, i, 0, n);
    moving.phys().set_node(g1, i, 0, n);
  }
  fixed.state().fill_ghosts(g1);
  moving.sync_from_phys();
  double reduction = 0.0;
  for (int s = 0; s < 5; ++s) {
    const double dt = fixed.suggest_dt();
    fixed.step(dt);
    moving.step(dt);
    for (int i = 0; i < g1.n1(); ++i)
      for (int m = 0; m < 2; ++m)
        reduction = std::max(reduction,
                             std::abs(moving.phys().hu[m](g1, i, 0) -
                                      fixed.state().hu[m](g1, i, 0)));
  }
  record("09-moving-mesh-structure",
         drift <= 1e-12 && scl <= 1e-13 && reduction <= 1e-13,
         "free-stream drift " + fmt(drift) + ", SCL " + fmt(scl) +
             ", identity reduction " + fmt(reduction));
}

void criterion_efficiency_proxy() {
  if (!std::getenv("MLSWE_RUN_SLOW")) {
    record_skip("10-efficiency-proxy",
                "wall-clock comparison disabled; set MLSWE_RUN_SLOW=1");
    return;
  }
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  run_case("interface-2d", 2, 200, 200, true, "eff_mm200");
  const auto t1 = clock::now();
  run_case("interface-2d", 2, 600, 600, false, "eff_um600");
  const auto t2 = clock::now();
  const double mm = std::chrono::duration<double>(t1 - t0).count();
  const double um = std::chrono::duration<double>(t2 - t1).count();
  record("10-efficiency-proxy", mm < um,
         "moving 200^2: " + fmt(mm) + " s vs fixed 600^2: " + fmt(um) + " s");
}

void criterion_reference_distance() {
  // Desk-scale substitute for the paper-scale references: the l1 distance to
  // a self-generated fine-grid reference must shrink with resolution.
  const fs::path dir = outdir("refdist");
  std::vector<double> dist;
  for (int n : {100, 200, 400}) {
    RunConfig cfg;
    cfg.case_name = "dambreak-1d";
    cfg.n1 = n;
    cfg.compare_reference = true;
    cfg.reference_n = 3000;
    cfg.outdir = dir.string();
    const RunResult r = run(cfg);
    dist.push_back(r.metrics.at("ref_l1_dist_surface"));
  }
  const bool ok = dist[0] > dist[1] && dist[1] > dist[2];
  record("11-reference-distance", ok,
         "l1 distances " + fmt(dist[0]) + " > " + fmt(dist[1]) + " > " +
             fmt(dist[2]));
}

} // namespace

int main() {
  std::printf("acceptance suite (tolerances pinned in code)\n");
  criterion_wb(false);
  criterion_wb(true);
  criterion_convergence_1d();
  criterion_convergence_2d();
  criterion_energy_decay();
  criterion_ec_oracle();
  criterion_energy_algebra();
  criterion_wave_speed();
  criterion_moving_structure();
  criterion_efficiency_proxy();
  criterion_reference_distance();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
