#include <cmath>

#include "doctest.h"
#include "nlc/mms.hpp"
#include "test_util.hpp"

using namespace nlc;

namespace {

// g_u (2 components) and g_d (3 components) of the decaying_tg case with
// eps = 0.1, alpha0 = 0.5 on the [0, 2 pi]^2 box at t = 0.37, computed by a
// symbolic-differentiation oracle from the definition of the forcings.
struct OraclePoint {
  double x, y, gu0, gu1, gd0, gd1, gd2;
};
const OraclePoint kOracle[3] = {
    {0.3, 1.1, -0.0028438486026778746858, 0.060980100616927992241,
     0.0080031092742391655094, 0.0, -0.00083028545814328913141},
    {2.0, 4.4, 0.013398524954301586318, -0.0051143812118839237470,
     0.00089561837763480728464, 0.0, -0.000027334144241776497386},
    {5.2, 0.7, -0.031562906452471509074, -0.0034200809878123021948,
     -0.0041446122345538113838, 0.0, 0.00035516697389196044666},
};

}  // namespace

TEST_CASE("manufactured cases: constraint and consistency") {
  const GridSpec g = test::square_grid(16);
  SUBCASE("the angle parameterization keeps |d*| = 1 identically") {
    const ManufacturedCase mc =
        make_manufactured_case("decaying_tg", g, 0.1, 0.5, PhysicsParams{});
    for (double x : {0.1, 2.7, 5.9})
      for (double t : {0.0, 0.3}) {
        const auto d = mc.d_exact(x, 1.3, t);
        CHECK(d[0] * d[0] + d[1] * d[1] + d[2] * d[2] ==
              doctest::Approx(1.0).epsilon(1e-15));
      }
  }
  SUBCASE("the steady twist equilibrium has identically zero forcings") {
    const ManufacturedCase mc =
        make_manufactured_case("steady_twist", g, 0.1, 0.5, PhysicsParams{});
    const MacVectorField gu = sample_forcing_u(mc, g, 0.2);
    const DirectorField gd = sample_forcing_d(mc, g, 0.2);
    CHECK(field_linf(gu) == 0.0);
    for (int c = 0; c < 3; ++c) CHECK(test::max_abs(gd.comp(c)) == 0.0);
  }
  SUBCASE("the exact velocity is analytically divergence-free on the grid") {
    const ManufacturedCase mc =
        make_manufactured_case("decaying_tg", g, 0.1, 0.5, PhysicsParams{});
    const State s = sample_exact_state(mc, g, 0.15);
    CHECK(field_linf(ops::divergence(s.u)) <= 1e-13);
  }
}

TEST_CASE("decaying_tg forcings match the symbolic oracle at spot points") {
  const GridSpec g = test::square_grid(16);
  const ManufacturedCase mc =
      make_manufactured_case("decaying_tg", g, 0.1, 0.5, PhysicsParams{});
  const double t = 0.37;
  for (const auto& p : kOracle) {
    CHECK(mc.g_u(0, p.x, p.y, t) == doctest::Approx(p.gu0).epsilon(1e-12));
    CHECK(mc.g_u(1, p.x, p.y, t) == doctest::Approx(p.gu1).epsilon(1e-12));
    const auto gd = mc.g_d(p.x, p.y, t);
    CHECK(gd[0] == doctest::Approx(p.gd0).epsilon(1e-12));
    CHECK(gd[1] == 0.0);
    CHECK(gd[2] == doctest::Approx(p.gd2).epsilon(1e-12));
  }
}

TEST_CASE("run_mms rejects too few resolutions") {
  RunConfig cfg;
  cfg.mms_resolutions = {16};
  CHECK_THROWS_AS(run_mms(cfg), std::invalid_argument);
}

TEST_CASE("a cheap three-point ladder shows second-order behavior") {
  RunConfig cfg;
  cfg.mms_case = "decaying_tg";
  cfg.mms_resolutions = {8, 16, 24};
  cfg.mms_t_end = 0.02;
  cfg.mms_dt0 = 4e-3;
  cfg.eps = 0.1;
  cfg.solver_tol = 1e-11;
  const MmsResult res = run_mms(cfg);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].err_u > res.rows[1].err_u);
  CHECK(res.rows[1].err_u > res.rows[2].err_u);
  CHECK(res.fitted_order_u > 1.5);
  CHECK(res.fitted_order_u < 2.6);
  CHECK(res.fitted_order_d > 1.5);
  CHECK(res.fitted_order_d < 2.6);
}

TEST_CASE("the steady twist case sits at the discretization floor") {
  RunConfig cfg;
  cfg.mms_case = "steady_twist";
  cfg.mms_resolutions = {8, 16, 24};
  cfg.mms_t_end = 0.02;
  cfg.mms_dt0 = 4e-3;
  cfg.twist_k = 1;
  const MmsResult res = run_mms(cfg);
  // the twist is an equilibrium: the error is scheme noise around it
  for (const auto& row : res.rows) {
    CHECK(row.err_u <= 1e-6);
    CHECK(row.err_d <= 2e-2);
  }
  CHECK(res.rows[2].err_d < res.rows[0].err_d);
}
