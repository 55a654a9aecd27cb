#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "resim/driver.hpp"
#include "resim/nonlinear.hpp"

using namespace resim;

namespace {

ReservoirModel one_cell_model(double bhp) {
  Grid g(1, 1, 1, 100.0, 100.0, 10.0, 5000.0);
  RockFields r = uniform_fields(g, 100, 100, 100, 0.2);
  PvtModel pvt = default_two_phase();
  pvt.c_w = 3e-6;
  pvt.c_o = 1e-5;
  pvt.c_r = 1e-6;
  std::vector<Well> wells{make_vertical_well("P", WellType::producer, g, r, 0, 0, 0, 0, 0.25, 0.0,
                                             {ConstraintKind::bhp, bhp})};
  return ReservoirModel(g, r, pvt, wells);
}

ReservoirState one_cell_state(double p, double s_w, double bhp) {
  ReservoirState s;
  s.cells = {CellState{p, s_w, 0.0, true}};
  s.bhp = Eigen::VectorXd::Constant(1, bhp);
  return s;
}

}  // namespace

TEST_CASE("forcing rules") {
  NewtonConfig cfg;
  cfg.gamma = 1.0;
  cfg.beta = 2.0;
  ForcingHistory h{0.1, 1.0, 0.3, 0.5};
  CHECK(forcing_term(ForcingRule::c, h, cfg) == doctest::Approx(0.01));
  CHECK(forcing_term(ForcingRule::a, h, cfg) == doctest::Approx(0.5));
  CHECK(forcing_term(ForcingRule::b, h, cfg) == doctest::Approx(0.2));

  h.r_prev_norm = 0.0;
  CHECK(forcing_term(ForcingRule::b, h, cfg) == doctest::Approx(0.1));

  h.b_norm = 1e-3;
  CHECK(forcing_term(ForcingRule::c, h, cfg) == cfg.theta_min);
  h.b_norm = 5.0;
  CHECK(forcing_term(ForcingRule::c, h, cfg) == cfg.theta_max);

  cfg.fixed_theta = 1e-8;
  CHECK(forcing_term(ForcingRule::fixed, h, cfg) == 1e-8);
}

TEST_CASE("config validation") {
  NewtonConfig n;
  n.theta_min = 0.5;
  n.theta_max = 0.4;
  CHECK_THROWS_AS(n.validate(), ConfigError);
  n = NewtonConfig{};
  n.beta = 2.5;
  CHECK_THROWS_AS(n.validate(), ConfigError);
  StepController s;
  s.growth = 1.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = StepController{};
  s.dt_init = 200.0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("damped update and clamps") {
  const ReservoirModel m = one_cell_model(3000.0);
  NewtonConfig cfg;

  ReservoirState s = one_cell_state(4000.0, 0.9, 3000.0);
  Eigen::VectorXd dx(3);
  dx << 10.0, 0.15, 0.0;
  apply_update(m, dx, cfg, s);
  CHECK(s.cells[0].s_w == 1.0);

  s = one_cell_state(4000.0, 0.3, 3000.0);
  dx << -800.0, 0.5, 7.0;
  apply_update(m, dx, cfg, s);
  CHECK(s.cells[0].p_o == doctest::Approx(3500.0));
  CHECK(s.cells[0].s_w == doctest::Approx(0.5));
  CHECK(s.bhp(0) == doctest::Approx(3007.0));
}

TEST_CASE("black-oil variable switching") {
  const ReservoirModel m = fixtures::small_model(FluidKind::black_oil, 2, 1, 1, false);
  ReservoirState s;
  s.cells = {CellState{3000.0, 0.2, -0.01, true}, CellState{3000.0, 0.2, 3100.0, false}};
  switch_variables(m, s);
  CHECK(!s.cells[0].saturated);
  CHECK(s.cells[0].p_b() == 3000.0);
  CHECK(s.cells[1].saturated);
  CHECK(s.cells[1].s_g() == doctest::Approx(1e-8));

  // the three-unknown update scales s_w and s_g together
  NewtonConfig cfg;
  s.cells = {CellState{3000.0, 0.3, 0.1, true}, CellState{3000.0, 0.3, 2500.0, false}};
  Eigen::VectorXd dx = Eigen::VectorXd::Zero(6);
  dx << 0.0, 0.1, 0.4, 0.0, 0.0, 900.0;
  apply_update(m, dx, cfg, s);
  CHECK(s.cells[0].s_w == doctest::Approx(0.35));
  CHECK(s.cells[0].s_g() == doctest::Approx(0.3));
  CHECK(s.cells[1].p_b() == doctest::Approx(3000.0));
  CHECK(!s.cells[1].saturated);
}

TEST_CASE("Newton converges quadratically on a one-cell step") {
  // high-precision root from tests/oracles/expected_values.py
  const double p_star = 3056.020677860509799612728;
  const double s_star = 0.2988284134682452496181149;
  const ReservoirModel m = one_cell_model(3000.0);
  const ReservoirState old = one_cell_state(4000.0, 0.3, 3000.0);
  ReservoirState s = old;
  NewtonConfig cfg;
  cfg.max_pressure_change = 1e6;
  LinearConfig lin;
  lin.preconditioner = PreconditionerKind::ilu0;
  const Partition part = partition_cells(m.grid(), 1);

  std::vector<double> err;
  for (int l = 0; l < 12; ++l) {
    const BlockMatrix a = m.assemble_jacobian(s, old, 1.0, part);
    const LinearOutcome out = solve_newton_system(a, 1e-10, lin, part);
    REQUIRE(out.contract_met);
    apply_update(m, out.dx, cfg, s);
    err.push_back(std::abs(s.cells[0].p_o - p_star) / p_star + std::abs(s.cells[0].s_w - s_star));
    if (err.back() < 1e-13) break;
  }
  REQUIRE(err.back() < 1e-12);
  int checked = 0;
  for (std::size_t l = 0; l + 1 < err.size(); ++l) {
    if (err[l] > 1e-2 || err[l + 1] < 1e-13) continue;
    CHECK(err[l + 1] / (err[l] * err[l]) < 50.0);
    ++checked;
  }
  CHECK(checked >= 2);
}

TEST_CASE("equilibrium without wells converges in one iteration") {
  Grid g(3, 2, 4, 50.0, 50.0, 10.0, 6000.0);
  RockFields r = uniform_fields(g, 100, 100, 10, 0.25);
  PvtModel pvt = default_two_phase();
  pvt.c_w = 3e-6;
  pvt.c_o = 1e-5;
  pvt.c_r = 1e-6;
  ReservoirModel m(g, r, pvt);
  const ReservoirState init = initial_state(m, InitSpec{});
  Simulator sim(m, SimulatorConfig{}, 1);
  ReservoirState out;
  const AttemptResult res = sim.attempt(init, 1.0, out);
  CHECK(res.converged);
  CHECK(res.newton == 1);
  for (Index c = 0; c < g.cell_count(); ++c)
    CHECK(out.cells[c].p_o == doctest::Approx(init.cells[c].p_o).epsilon(1e-10));
}

TEST_CASE("a step that fails is cut and retried") {
  ReservoirModel m = fixtures::small_model(FluidKind::two_phase, 6, 5, 2, true);
  ReservoirState s = fixtures::random_state(m, 3);
  SimulatorConfig cfg;
  cfg.newton.max_newton = 1;
  cfg.newton.tolerance = 0.3;
  cfg.newton.mb_tolerance = 1e-3;
  cfg.control.dt_init = 50.0;
  cfg.control.max_cuts = 20;
  Simulator sim(m, cfg, 1);
  RunReport rep;
  sim.run(s, {{0.0, "INJ", {ConstraintKind::water_rate, 500.0}}}, 50.0, rep);
  REQUIRE(rep.step_count() >= 1);
  CHECK(rep.steps[0].cuts >= 1);
  CHECK(rep.steps[0].dt < 50.0);
  CHECK(rep.cut_count() >= 1);
  // failed attempts count toward the totals
  CHECK(rep.steps[0].newton == rep.steps[0].cuts + 1);
  CHECK(s.time == doctest::Approx(50.0));
}

TEST_CASE("run totals equal the per-step and per-iteration records") {
  ReservoirModel m = fixtures::small_model(FluidKind::black_oil, 5, 4, 3, true);
  ReservoirState s = fixtures::random_state(m, 11);
  SimulatorConfig cfg;
  cfg.linear.decoupling = Decoupling::abf;
  Simulator sim(m, cfg, 2);
  const Schedule sched{{0.0, "INJ", {ConstraintKind::gas_rate, 500.0}},
                       {0.0, "PROD", {ConstraintKind::bhp, 3000.0}},
                       {0.0, "PROD2", {ConstraintKind::liquid_rate, -200.0}},
                       {5.0, "PROD", {ConstraintKind::bhp, 2800.0}}};
  RunReport rep;
  sim.run(s, sched, 12.0, rep);
  int newton = 0, linear = 0;
  double t = 0.0;
  for (const StepRecord& st : rep.steps) {
    newton += st.newton;
    linear += st.linear;
    CHECK(st.t_start == doctest::Approx(t));
    t += st.dt;
    CHECK(st.mass_balance.maxCoeff() <= cfg.newton.mb_tolerance);
  }
  CHECK(t == doctest::Approx(12.0));
  CHECK(rep.newton_count() == newton);
  CHECK(rep.solver_count() == linear);
  CHECK(static_cast<int>(rep.iterations.size()) == newton);
  int logged = 0;
  for (const IterationRecord& r : rep.iterations) {
    logged += r.linear_iterations;
    CHECK(r.contract_met);
    CHECK(r.r_norm <= r.theta * r.b_norm * (1.0 + 1e-12));
  }
  CHECK(logged == linear);
  // the schedule event at t = 5 is hit exactly
  bool hit = false;
  for (const StepRecord& st : rep.steps) hit |= std::abs(st.t_start - 5.0) < 1e-9;
  CHECK(hit);
  CHECK(m.wells()[1].constraint.value == 2800.0);
}
