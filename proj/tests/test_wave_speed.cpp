#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>

#include "core/energy.hpp"
#include "core/wave_speed.hpp"
#include "test_util.hpp"

using namespace mlswe;
using mlswe::testing::RandomStates;

namespace {

std::complex<double> eval_poly(const CharPolyCoeffs &cp,
                               std::complex<double> x) {
  std::complex<double> r = 1.0;
  for (int j = 0; j < cp.degree; ++j)
    r = r * x + cp.c[j];
  return r;
}

// Eigenvalues of the quasi-linear matrix with the reduced polynomial's roots
// isolated (the transverse speeds u_m are excluded).
struct EigenOracle {
  std::vector<std::complex<double>> all;
  double scale = 0.0;
  bool complex = false;
};

EigenOracle eigen_oracle(const LayerSystem &sys, const NodeState &n, int dir) {
  const Eigen::MatrixXd A =
      quasilinear_matrix(sys, n.h.data(), n.u.data(), n.v.data(), dir);
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
  EigenOracle out;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    out.all.push_back(es.eigenvalues()[i]);
    out.scale = std::max(out.scale, std::abs(es.eigenvalues()[i]));
  }
  for (auto z : out.all)
    if (std::abs(z.imag()) > 1e-7 * std::max(1.0, out.scale))
      out.complex = true;
  return out;
}

} // namespace

TEST_SUITE_BEGIN("wavespeed");

TEST_CASE("two-layer coefficients at rest") {
  CharPolyCoeffs cp = charpoly_m2(1.0, 1.0, 0.0, 0.0, 0.0, 1.0);
  CHECK(cp.degree == 4);
  CHECK(cp.c[0] == 0.0);
  CHECK(cp.c[1] == doctest::Approx(-2.0));
  CHECK(cp.c[2] == 0.0);
  CHECK(cp.c[3] == doctest::Approx(1.0));
  cp = charpoly_m2(1.0, 1.0, 0.0, 0.0, 0.5, 1.0);
  CHECK(cp.c[3] == doctest::Approx(0.5));
  CHECK(cp.c[1] == doctest::Approx(-2.0));
}

TEST_CASE("three-layer coefficients: rest and the symmetric closed case") {
  double h[3] = {1.0, 1.0, 1.0}, u[3] = {0.0, 0.0, 0.0};
  CharPolyCoeffs cp = charpoly_m3(h, u, 0.8, 0.64, 0.8, 1.0);
  CHECK(cp.degree == 6);
  CHECK(cp.c[0] == 0.0);
  CHECK(cp.c[2] == 0.0);
  CHECK(cp.c[4] == 0.0);
  CHECK(cp.c[1] == doctest::Approx(-3.0)); // -g(h1+h2+h3)
  CHECK(cp.c[5] == doctest::Approx(-0.04).epsilon(1e-13));
}

TEST_CASE("polynomial roots coincide with the quasi-linear eigenvalues") {
  RandomStates rs(81);
  for (int M : {2, 3}) {
    double worst = 0.0;
    for (int it = 0; it < 400; ++it) {
      LayerSystem s = rs.system(M);
      NodeState n = rs.node(M);
      for (int dir : {1, 2}) {
        const double *un = dir == 1 ? n.u.data() : n.v.data();
        const CharPolyCoeffs cp =
            (M == 2) ? charpoly_m2(n.h[0], n.h[1], un[0], un[1],
                                   s.density_ratio(1, 2), s.g())
                     : charpoly_m3(n.h.data(), un, s.density_ratio(1, 2),
                                   s.density_ratio(1, 3),
                                   s.density_ratio(2, 3), s.g());
        const EigenOracle eo = eigen_oracle(s, n, dir);
        const double pscale = std::pow(eo.scale, cp.degree) + 1.0;
        for (auto z : eo.all) {
          bool transverse = false;
          for (int m = 0; m < M; ++m)
            if (std::abs(z - std::complex<double>(un[m], 0.0)) <=
                1e-6 * std::max(1.0, eo.scale))
              transverse = true;
          if (transverse)
            continue;
          worst = std::max(worst, std::abs(eval_poly(cp, z)) / pscale);
        }
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("Lagrange bounds: closed cases") {
  CharPolyCoeffs cp;
  cp.degree = 4;
  cp.c[0] = 0.0;
  cp.c[1] = -2.0;
  cp.c[2] = 0.0;
  cp.c[3] = 1.0;
  const RootBounds b = lagrange_bounds(cp);
  // (lambda^2 - 1)^2: largest root 1, bound sqrt(2)
  CHECK(b.upper == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b.upper >= 1.0);
  // symmetric coefficients: lower = -upper
  CHECK(b.lower == doctest::Approx(-b.upper).epsilon(1e-14));

  CharPolyCoeffs pos;
  pos.degree = 4;
  pos.c[0] = 1.0;
  pos.c[1] = 2.0;
  pos.c[2] = 0.5;
  pos.c[3] = 0.25;
  CHECK(lagrange_bounds(pos).upper == 0.0);

  CharPolyCoeffs bad = cp;
  bad.c[1] = std::nan("");
  CHECK_THROWS_AS(lagrange_bounds(bad), std::runtime_error);
}

TEST_CASE("max wave speed: closed two-layer case and single layer") {
  // at rest, r = 0, g = 1, h = (1,1): Lagrange bound sqrt(2), exact root 1
  LayerSystem sys({1e-12, 1.0}, 1.0); // r12 ~ 0
  NodeState n(2);
  n.h = {1.0, 1.0};
  const double a =
      max_wave_speed(sys, 1, n.h.data(), n.u.data(), n.v.data());
  CHECK(a == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(a >= 1.0);

  LayerSystem one({1.0}, 9.812);
  NodeState m(1);
  m.h = {2.0};
  m.u = {-1.5};
  const double a1 = max_wave_speed(one, 1, m.h.data(), m.u.data(), m.v.data());
  CHECK(a1 == doctest::Approx(1.5 + std::sqrt(9.812 * 2.0)).epsilon(1e-15));
  const double a1n = max_wave_speed(one, 1, m.h.data(), m.u.data(),
                                    m.v.data(), WaveSpeedMode::numeric);
  CHECK(std::abs(a1 - a1n) <= 1e-12 * a1);
}

TEST_CASE("dominance over the eigen-oracle on hyperbolic states") {
  RandomStates rs(83);
  for (int M : {2, 3}) {
    int checked = 0;
    for (int it = 0; it < 2000 && checked < 1000; ++it) {
      LayerSystem s = rs.system(M);
      NodeState n = rs.node(M);
      const EigenOracle eo = eigen_oracle(s, n, 1);
      if (eo.complex)
        continue;
      ++checked;
      double maxlam = 0.0;
      for (auto z : eo.all)
        maxlam = std::max(maxlam, std::abs(z.real()));
      const double a =
          max_wave_speed(s, 1, n.h.data(), n.u.data(), n.v.data());
      CHECK(a >= maxlam - 1e-9);
    }
    CHECK(checked >= 500); // most random states are hyperbolic
  }
}

TEST_CASE("direction symmetry and rest-state scale covariance") {
  RandomStates rs(89);
  for (int it = 0; it < 50; ++it) {
    LayerSystem s = rs.system(2);
    NodeState n = rs.node(2);
    const double a1 = max_wave_speed(s, 1, n.h.data(), n.u.data(), n.v.data());
    NodeState sw = n;
    std::swap(sw.u, sw.v);
    const double a2 =
        max_wave_speed(s, 2, sw.h.data(), sw.u.data(), sw.v.data());
    CHECK(a1 == a2);
  }
  // at rest the only negative coefficient is c2 = -g(h1+h2)
  LayerSystem s({0.5, 1.0}, 3.0);
  NodeState n(2);
  n.h = {1.7, 0.4};
  const double a = max_wave_speed(s, 1, n.h.data(), n.u.data(), n.v.data());
  CHECK(std::abs(a - std::sqrt(3.0 * (1.7 + 0.4))) <= 1e-12 * a);
}

TEST_CASE("numeric fallback flags complex speeds and stays conservative") {
  // Strong shear with nearly equal densities loses hyperbolicity.
  LayerSystem s({0.999, 1.0}, 9.812);
  NodeState n(2);
  n.h = {1.0, 1.0};
  n.u = {3.0, -3.0};
  bool flag = false;
  const double a = max_wave_speed(s, 1, n.h.data(), n.u.data(), n.v.data(),
                                  WaveSpeedMode::numeric, &flag);
  const EigenOracle eo = eigen_oracle(s, n, 1);
  CHECK(eo.complex);
  CHECK(flag);
  double need = 0.0;
  for (auto z : eo.all)
    need = std::max(need, std::abs(z.real()));
  CHECK(a >= need);
  // General M uses the fallback automatically.
  RandomStates rs(97);
  LayerSystem s4 = rs.system(4);
  NodeState n4 = rs.node(4);
  const EigenOracle eo4 = eigen_oracle(s4, n4, 1);
  if (!eo4.complex) {
    double maxlam = 0.0;
    for (auto z : eo4.all)
      maxlam = std::max(maxlam, std::abs(z.real()));
    const double a4 =
        max_wave_speed(s4, 1, n4.h.data(), n4.u.data(), n4.v.data());
    CHECK(a4 == doctest::Approx(maxlam).epsilon(1e-10));
  }
}

TEST_SUITE_END();
