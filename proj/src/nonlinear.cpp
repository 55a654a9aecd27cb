#include "resim/nonlinear.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace resim {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr double kSwitchSaturation = 1e-8;

}  // namespace

void NewtonConfig::validate() const {
  if (!(tolerance > 0.0)) throw ConfigError("newton: tolerance must be positive");
  if (max_newton < 1) throw ConfigError("newton: max_newton must be at least 1");
  if (!(theta_min > 0.0) || theta_min > theta_max || !(theta_max < 1.0))
    throw ConfigError("newton: require 0 < theta_min <= theta_max < 1");
  if (!(gamma > 0.0) || gamma > 1.0) throw ConfigError("newton: gamma must lie in (0, 1]");
  if (!(beta > 1.0) || beta > 2.0) throw ConfigError("newton: beta must lie in (1, 2]");
  if (!(theta_initial > 0.0) || !(theta_initial < 1.0))
    throw ConfigError("newton: theta_initial must lie in (0, 1)");
  if (!(fixed_theta > 0.0) || !(fixed_theta < 1.0))
    throw ConfigError("newton: fixed theta must lie in (0, 1)");
  if (!(max_saturation_change > 0.0) || !(max_pressure_change > 0.0))
    throw ConfigError("newton: damping limits must be positive");
  if (!(mb_tolerance > 0.0)) throw ConfigError("newton: mb_tolerance must be positive");
}

double forcing_term(ForcingRule rule, const ForcingHistory& h, const NewtonConfig& config) {
  if (rule == ForcingRule::fixed) return config.fixed_theta;
  double theta = config.theta_max;
  if (h.b_prev_norm > 0.0) {
    switch (rule) {
      case ForcingRule::a: theta = h.b_minus_r_prev_norm / h.b_prev_norm; break;
      case ForcingRule::b: theta = std::abs(h.b_norm - h.r_prev_norm) / h.b_prev_norm; break;
      case ForcingRule::c:
        theta = config.gamma * std::pow(h.b_norm / h.b_prev_norm, config.beta);
        break;
      case ForcingRule::fixed: break;
    }
  }
  if (!std::isfinite(theta)) theta = config.theta_max;
  return std::clamp(theta, config.theta_min, config.theta_max);
}

void StepController::validate() const {
  if (!(dt_min > 0.0) || dt_min > dt_init || dt_init > dt_max)
    throw ConfigError("time: require 0 < dt_min <= dt_init <= dt_max");
  if (!(growth > 1.0)) throw ConfigError("time: growth must exceed 1");
  if (!(cut > 0.0) || !(cut < 1.0)) throw ConfigError("time: cut must lie in (0, 1)");
  if (max_cuts < 0) throw ConfigError("time: max_cuts must be nonnegative");
}

int RunReport::cut_count() const {
  int n = 0;
  for (const auto& s : steps) n += s.cuts;
  return n;
}

int RunReport::newton_count() const {
  int n = 0;
  for (const auto& s : steps) n += s.newton;
  return n;
}

int RunReport::solver_count() const {
  int n = 0;
  for (const auto& s : steps) n += s.linear;
  return n;
}

double RunReport::time_seconds() const {
  double t = 0.0;
  for (const auto& s : steps) t += s.wall_seconds;
  return t;
}

double RunReport::assembly_seconds() const {
  double t = 0.0;
  for (const auto& s : steps) t += s.assembly_seconds;
  return t;
}

double RunReport::solve_seconds() const {
  double t = 0.0;
  for (const auto& s : steps) t += s.solve_seconds;
  return t;
}

double RunReport::avg_solver() const {
  const int n = newton_count();
  return n > 0 ? static_cast<double>(solver_count()) / n : 0.0;
}

double RunReport::avg_time() const {
  const int n = newton_count();
  return n > 0 ? time_seconds() / n : 0.0;
}

void switch_variables(const ReservoirModel& model, ReservoirState& state) {
  if (model.unknowns_per_cell() < 3) return;
  for (CellState& c : state.cells) {
    if (c.saturated && c.third < 0.0) {
      c.saturated = false;
      c.third = c.p_o;
    } else if (!c.saturated && c.third > c.p_o) {
      c.saturated = true;
      c.third = kSwitchSaturation;
    }
  }
}

void apply_update(const ReservoirModel& model, const Eigen::VectorXd& dx,
                  const NewtonConfig& config, ReservoirState& state) {
  const int m = model.unknowns_per_cell();
  const Index ncell = model.grid().cell_count();
  const double ds_max = config.max_saturation_change;
  const double dp_max = config.max_pressure_change;
  for (Index c = 0; c < ncell; ++c) {
    CellState& cs = state.cells[c];
    const double dp = std::clamp(dx(c * m + kPressure), -dp_max, dp_max);
    double dsw = dx(c * m + kWaterSaturation);
    double dthird = m == 3 ? dx(c * m + kThird) : 0.0;
    double largest = std::abs(dsw);
    if (m == 3 && cs.saturated) largest = std::max(largest, std::abs(dthird));
    if (largest > ds_max) {
      const double scale = ds_max / largest;
      dsw *= scale;
      if (cs.saturated) dthird *= scale;
    }
    if (m == 3 && !cs.saturated) dthird = std::clamp(dthird, -dp_max, dp_max);
    cs.p_o += dp;
    cs.s_w += dsw;
    if (m == 3) cs.third += dthird;
  }
  for (Index w = 0; w < state.bhp.size(); ++w) state.bhp(w) += dx(ncell * m + w);

  switch_variables(model, state);
  for (CellState& cs : state.cells) {
    cs.s_w = std::clamp(cs.s_w, 0.0, 1.0);
    if (m == 3 && cs.saturated) cs.third = std::clamp(cs.third, 0.0, 1.0 - cs.s_w);
  }
}

Eigen::VectorXd mass_balance_error(const ReservoirModel& model, const Eigen::VectorXd& residual,
                                   const ReservoirState& state, double dt) {
  const int m = model.unknowns_per_cell();
  const Index ncell = model.grid().cell_count();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(m);
  for (Index c = 0; c < ncell; ++c) sum += residual.segment(c * m, m);
  const Eigen::VectorXd mass = model.component_mass(state);
  Eigen::VectorXd out(m);
  for (int e = 0; e < m; ++e) {
    const double denom = std::max(std::abs(mass(e)), 1e-300);
    out(e) = std::abs(sum(e)) * dt / denom;
  }
  return out;
}

Simulator::Simulator(ReservoirModel& model, SimulatorConfig config, int workers)
    : model_(model), config_(std::move(config)), part_(partition_cells(model.grid(), workers)) {
  config_.newton.validate();
  config_.linear.validate();
  config_.control.validate();
}

AttemptResult Simulator::attempt(const ReservoirState& old, double dt, ReservoirState& state,
                                 std::vector<IterationRecord>* log, int step, int attempt_index) {
  const NewtonConfig& nc = config_.newton;
  const int w = part_.workers;
  AttemptResult res;
  state = old;
  state.time = old.time + dt;

  Eigen::VectorXd residual;
  double f0 = 0.0;
  try {
    const auto t0 = Clock::now();
    residual = model_.assemble_residual(state, old, dt, part_);
    res.assembly_seconds += seconds_since(t0);
  } catch (const AssemblyError& e) {
    res.failure = e.what();
    return res;
  }
  f0 = norm2(residual, w);

  Eigen::VectorXd b_prev, r_prev;
  double b_prev_norm = 0.0, r_prev_norm = 0.0;
  for (int l = 0; l < nc.max_newton; ++l) {
    BlockMatrix jac;
    try {
      const auto t0 = Clock::now();
      jac = model_.assemble_jacobian(state, old, dt, part_);
      res.assembly_seconds += seconds_since(t0);
    } catch (const AssemblyError& e) {
      res.failure = e.what();
      return res;
    }
    const Eigen::VectorXd& b = jac.rhs();
    const double b_norm = norm2(b, w);

    double theta = nc.rule == ForcingRule::fixed ? nc.fixed_theta : nc.theta_initial;
    if (l > 0) {
      ForcingHistory h;
      h.b_norm = b_norm;
      h.b_prev_norm = b_prev_norm;
      h.r_prev_norm = r_prev_norm;
      if (nc.rule == ForcingRule::a) h.b_minus_r_prev_norm = norm2(b - r_prev, w);
      theta = forcing_term(nc.rule, h, nc);
    }
    if (system_hook_) system_hook_(jac, step, attempt_index, l);

    const LinearOutcome lin = solve_newton_system(jac, theta, config_.linear, part_);
    res.solve_seconds += lin.setup_seconds + lin.solve_seconds;
    ++res.newton;
    res.linear += lin.iterations;
    if (log) {
      IterationRecord rec;
      rec.step = step;
      rec.attempt = attempt_index;
      rec.newton = l;
      rec.dt = dt;
      rec.theta = theta;
      rec.b_norm = lin.b_norm;
      rec.r_norm = lin.r_norm;
      rec.linear_iterations = lin.iterations;
      rec.status = lin.status;
      rec.contract_met = lin.contract_met;
      log->push_back(rec);
    }
    if (!lin.contract_met) {
      std::ostringstream msg;
      msg << "linear solve " << to_string(lin.status) << " after " << lin.iterations
          << " iterations (relative residual " << lin.r_norm / lin.b_norm << ", theta " << theta
          << ")";
      res.failure = msg.str();
      return res;
    }

    apply_update(model_, lin.dx, nc, state);
    try {
      const auto t0 = Clock::now();
      residual = model_.assemble_residual(state, old, dt, part_);
      res.assembly_seconds += seconds_since(t0);
    } catch (const AssemblyError& e) {
      res.failure = e.what();
      return res;
    }
    const double f_norm = norm2(residual, w);
    res.mass_balance = mass_balance_error(model_, residual, state, dt);
    // Residuals at roundoff level relative to the mass in place count as converged.
    const bool at_roundoff = f_norm * dt <= 1e-13 * model_.component_mass(state).cwiseAbs().sum();
    if ((f_norm <= nc.tolerance * f0 || at_roundoff) &&
        res.mass_balance.maxCoeff() <= nc.mb_tolerance) {
      res.converged = true;
      return res;
    }
    b_prev = b;
    b_prev_norm = b_norm;
    r_prev = lin.residual;
    r_prev_norm = lin.r_norm;
  }
  std::ostringstream msg;
  msg << "no convergence in " << nc.max_newton << " Newton iterations";
  res.failure = msg.str();
  return res;
}

void Simulator::run(ReservoirState& state, const Schedule& schedule, double t_end,
                    RunReport& report) {
  const StepController& ctl = config_.control;
  report.workers = part_.workers;
  validate_schedule(schedule, model_.wells());
  std::vector<double> events;
  for (const ScheduleEntry& e : schedule) events.push_back(e.start);
  std::sort(events.begin(), events.end());

  const double eps = 1e-9 * std::max(1.0, std::abs(t_end));
  double dt_next = ctl.dt_init;
  while (state.time < t_end - eps) {
    const auto wall0 = Clock::now();
    const double t = state.time;
    apply_schedule(schedule, t + eps, model_.wells());

    double dt = std::min({dt_next, ctl.dt_max, t_end - t});
    bool clipped = dt < dt_next;
    for (double e : events) {
      if (e > t + eps && e < t + dt - eps) {
        dt = e - t;
        clipped = true;
        break;
      }
    }

    StepRecord rec;
    rec.index = static_cast<int>(report.steps.size());
    rec.t_start = t;
    ReservoirState trial;
    while (true) {
      const AttemptResult a = attempt(state, dt, trial, &report.iterations, rec.index, rec.cuts);
      rec.newton += a.newton;
      rec.linear += a.linear;
      rec.assembly_seconds += a.assembly_seconds;
      rec.solve_seconds += a.solve_seconds;
      if (a.converged) {
        rec.mass_balance = a.mass_balance;
        break;
      }
      if (rec.cuts >= ctl.max_cuts || dt * ctl.cut < ctl.dt_min) {
        std::ostringstream msg;
        msg << "step " << rec.index << " at t = " << t << " days failed after " << rec.cuts
            << " cuts (dt = " << dt << "): " << a.failure;
        throw SimulationAbort(msg.str());
      }
      ++rec.cuts;
      dt *= ctl.cut;
      clipped = false;
    }
    rec.dt = dt;
    state = std::move(trial);
    state.time = t + dt;
    if (!clipped) dt_next = std::min(dt * ctl.growth, ctl.dt_max);
    rec.wall_seconds = seconds_since(wall0);
    report.steps.push_back(rec);
    if (step_hook_) step_hook_(state, report.steps.back());
  }
}

}  // namespace resim
