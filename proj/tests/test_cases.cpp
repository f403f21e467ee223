#include <doctest.h>

#include <cmath>

#include "core/cases.hpp"
#include "test_util.hpp"

using namespace mlswe;

TEST_SUITE_BEGIN("cases");

TEST_CASE("catalogue constructs every case in its supported layer counts") {
  for (const auto &name : case_names()) {
    CaseSetup c = make_case(name);
    CHECK(c.sys.layers() >= 1);
    CHECK(c.t_end > 0.0);
    CHECK(bool(c.initial));
    try {
      CaseSetup c3 = make_case(name, 3);
      CHECK(c3.sys.layers() == 3);
    } catch (const std::invalid_argument &) {
      // two-layer-only cases
    }
  }
  CHECK_THROWS_AS(make_case("no-such-case"), std::invalid_argument);
  try {
    make_case("no-such-case");
  } catch (const std::invalid_argument &e) {
    CHECK(std::string(e.what()).find("wb-1d-smooth") != std::string::npos);
  }
  // layer-suffixed aliases
  CHECK(make_case("accuracy-1d-3layer").sys.layers() == 3);
  CHECK(make_case("accuracy-1d-2layer").sys.layers() == 2);
}

TEST_CASE("printed parameter spot checks") {
  CaseSetup wb = make_case("wb-1d-smooth", 2);
  CHECK(wb.bathymetry(9.0, 0.0) ==
        doctest::Approx(2.0 + 3.0 * std::exp(-6.25)).epsilon(1e-15));
  CHECK(wb.sys.density_ratio(1, 2) == doctest::Approx(0.8));
  CHECK(wb.t_end == 0.2);
  CHECK(wb.default_n1 == 50);

  CaseSetup db = make_case("dambreak-1d", 2);
  NodeState n(2);
  db.initial(4.0, 0.0, n);
  CHECK(n.h[1] == 0.6);
  CHECK(n.h[0] == doctest::Approx(0.4));
  db.initial(6.0, 0.0, n);
  CHECK(n.h[1] == 0.4);
  CHECK(n.h[0] == doctest::Approx(0.6));
  CHECK(db.sys.g() == 9.812);

  CaseSetup vx = make_case("vortex-2d");
  NodeState v(2);
  vx.initial(0.0, 0.0, v);
  CHECK(v.h[1] == doctest::Approx(1.0 - 0.04 * std::exp(1.0) / 2.0)
                      .epsilon(1e-12)); // ~0.945634
  CHECK(v.h[0] == 5.0);

  CaseSetup p3 = make_case("perturb-1d", 3);
  CHECK(p3.sys.density_ratio(2, 3) == doctest::Approx(0.98));
  CHECK(p3.sys.density_ratio(1, 3) == doctest::Approx(0.97));
  CHECK(p3.t_end == doctest::Approx(0.1));
}

TEST_CASE("well-balanced cases start exactly at rest") {
  for (const char *name :
       {"wb-1d-smooth", "wb-1d-step", "wb-2d-smooth", "wb-2d-step"}) {
    for (int M : {2, 3}) {
      CaseSetup c = make_case(name, M);
      REQUIRE(c.wb_case);
      NodeState n(M);
      mlswe::testing::RandomStates rs(7 + M);
      for (int it = 0; it < 50; ++it) {
        const double x1 = rs.uniform(c.x1lo, c.x1hi);
        const double x2 = c.dim == 2 ? rs.uniform(c.x2lo, c.x2hi) : 0.0;
        c.initial(x1, x2, n);
        for (int m = 1; m <= M; ++m) {
          double S = n.b;
          for (int k = m; k <= M; ++k)
            S += n.h[k - 1];
          CHECK(std::abs(S - c.surface_levels[m - 1]) <= 1e-14 * 8.0);
          CHECK(n.h[m - 1] > 0.0);
          CHECK(n.u[m - 1] == 0.0);
        }
      }
    }
  }
}

TEST_CASE("printed 1D two-layer sources match the residual oracle") {
  // Guards the transcription of the long closed-form expressions; the
  // oracle differentiates the exact solution by complex step.
  CaseSetup c = make_case("accuracy-1d", 2);
  REQUIRE(bool(c.source));
  mlswe::testing::RandomStates rs(11);
  double S[6], So[6];
  for (int it = 0; it < 200; ++it) {
    const double x = rs.uniform(0.0, 2.0);
    const double t = rs.uniform(0.0, 0.2);
    c.source(x, 0.0, t, S);
    manufactured_source(c.sys, *c.exact, false, x, 0.0, t, So);
    for (int k = 0; k < 6; ++k)
      CHECK(std::abs(S[k] - So[k]) <= 1e-10 * (std::abs(So[k]) + 1.0));
  }
  // sin(pi t) factors vanish at t = 0: the kinetic tail terms drop out.
  const double x = 0.5;
  c.source(x, 0.0, 0.0, S);
  const double h1 = std::cos(M_PI * x) + 6.0;
  const double expect_s2 = M_PI * std::cos(M_PI * x) * h1 +
                           M_PI * std::sin(M_PI * x) -
                           1.5 * M_PI * std::sin(M_PI * x) * h1 -
                           M_PI * std::sin(M_PI * x) *
                               (0.5 * std::cos(M_PI * x) + 3.0);
  CHECK(S[1] == doctest::Approx(expect_s2).epsilon(1e-13));
}

TEST_CASE("generated sources leave no PDE residual on sampled cases") {
  // For oracle-generated sources the defining property is that adding them
  // to the PDE residual gives zero; equivalently two independent oracle
  // evaluations agree.  Exercise the vortex (whose layer-2 block must be an
  // exact solution with zero source).
  CaseSetup vx = make_case("vortex-2d");
  double S[6];
  mlswe::testing::RandomStates rs(13);
  for (int it = 0; it < 100; ++it) {
    const double x = rs.uniform(-2.0, 2.0), y = rs.uniform(-2.0, 2.0);
    const double t = rs.uniform(0.0, 0.5);
    vx.source(x, y, t, S);
    CHECK(std::abs(S[0]) <= 1e-11);
    CHECK(std::abs(S[3]) <= 1e-11);
    CHECK(std::abs(S[4]) <= 1e-11);
    CHECK(std::abs(S[5]) <= 1e-11);
    // layer-1 momentum source g h1 d(h2)/dx with h1 = 5
    const double e = std::exp(1.0 - (x - t) * (x - t) - (y - t) * (y - t));
    const double ref1 = 5.0 * 0.02 * e * 2.0 * (x - t);
    const double ref2 = 5.0 * 0.02 * e * 2.0 * (y - t);
    CHECK(S[1] == doctest::Approx(ref1).epsilon(1e-10));
    CHECK(S[2] == doctest::Approx(ref2).epsilon(1e-10));
  }
}

TEST_CASE("three-layer accuracy case wiring") {
  CaseSetup c = make_case("accuracy-1d", 3);
  CHECK(c.sys.density_ratio(1, 2) == doctest::Approx(0.7));
  CHECK(c.sys.density_ratio(1, 3) == doctest::Approx(7.0 / 13.0));
  CHECK(c.sys.density_ratio(2, 3) == doctest::Approx(10.0 / 13.0));
  NodeState n(3);
  c.initial(0.25, 0.0, n);
  CHECK(n.h[0] ==
        doctest::Approx(std::cos(M_PI * 0.25) + 8.0).epsilon(1e-14));
  CHECK(n.h[2] ==
        doctest::Approx(std::cos(M_PI * 0.25) + 4.0).epsilon(1e-14));
  // oracle-generated source is attached
  REQUIRE(bool(c.source));
  double S[9];
  c.source(0.3, 0.0, 0.05, S);
  CHECK(std::isfinite(S[1]));
}

TEST_SUITE_END();
