#ifndef RESIM_NONLINEAR_HPP
#define RESIM_NONLINEAR_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "resim/linear_solver.hpp"
#include "resim/model.hpp"

namespace resim {

/// Forcing-term rules; `a`, `b` and `c` are the Eisenstat-Walker choices.
enum class ForcingRule { a, b, c, fixed };

struct NewtonConfig {
  double tolerance = 1e-2;  // on ||F|| / ||F_0||, F_0 the residual at the start of the step
  int max_newton = 20;
  ForcingRule rule = ForcingRule::c;
  double fixed_theta = 1e-4;
  double gamma = 0.9;
  double beta = 2.0;
  double theta_initial = 0.1;
  double theta_min = 1e-4;
  double theta_max = 0.9;
  double mb_tolerance = 1e-9;  // per component, |sum of cell residuals| * dt / mass in place
  double max_saturation_change = 0.2;
  double max_pressure_change = 500.0;  // psi

  void validate() const;
};

/// Norms (and, for rule a, vectors) of the current and previous iteration.
struct ForcingHistory {
  double b_norm = 0.0;       // ||b^l||
  double b_prev_norm = 0.0;  // ||b^{l-1}||
  double r_prev_norm = 0.0;  // ||r^{l-1}||
  double b_minus_r_prev_norm = 0.0;  // ||b^l - r^{l-1}||
};

/// theta_l for l >= 1, clamped to [theta_min, theta_max]; the fixed rule
/// returns fixed_theta unclamped.
double forcing_term(ForcingRule rule, const ForcingHistory& h, const NewtonConfig& config);

struct StepController {
  double dt_init = 1.0;   // days
  double dt_max = 100.0;
  double dt_min = 1e-6;
  double growth = 2.0;
  double cut = 0.5;
  int max_cuts = 10;

  void validate() const;
};

struct IterationRecord {
  int step = 0;
  int attempt = 0;
  int newton = 0;  // 0-based within the attempt
  double dt = 0.0;
  double theta = 0.0;
  double b_norm = 0.0;
  double r_norm = 0.0;
  int linear_iterations = 0;
  SolveStatus status = SolveStatus::converged;
  bool contract_met = false;
};

struct StepRecord {
  int index = 0;
  double t_start = 0.0;
  double dt = 0.0;       // accepted step size
  int newton = 0;        // over all attempts of this step
  int linear = 0;
  int cuts = 0;
  double wall_seconds = 0.0;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
  Eigen::VectorXd mass_balance;  // per component, relative to mass in place
};

struct RunReport {
  int workers = 1;
  std::vector<StepRecord> steps;
  std::vector<IterationRecord> iterations;

  int step_count() const { return static_cast<int>(steps.size()); }
  int cut_count() const;
  int newton_count() const;
  int solver_count() const;
  double time_seconds() const;
  double assembly_seconds() const;
  double solve_seconds() const;
  double avg_solver() const;  // solver_count / newton_count
  double avg_time() const;    // time_seconds / newton_count
};

struct SimulatorConfig {
  NewtonConfig newton;
  LinearConfig linear;
  StepController control;
};

/// Outcome of one backward-Euler step attempt.
struct AttemptResult {
  bool converged = false;
  int newton = 0;
  int linear = 0;
  double assembly_seconds = 0.0;
  double solve_seconds = 0.0;
  Eigen::VectorXd mass_balance;
  std::string failure;
};

/// Applies the damped Newton update dx to `state` (cells then wells): per cell
/// the saturation changes are scaled so none exceeds max_saturation_change,
/// pressure-like changes are clipped to max_pressure_change, then the
/// saturated/undersaturated switch is applied and saturations are clamped.
void apply_update(const ReservoirModel& model, const Eigen::VectorXd& dx,
                  const NewtonConfig& config, ReservoirState& state);

/// Black-oil phase switch: a saturated cell with s_g < 0 becomes undersaturated
/// with p_b = p_o; an undersaturated cell with p_b > p_o becomes saturated.
/// Two-phase states are left untouched.
void switch_variables(const ReservoirModel& model, ReservoirState& state);

/// Per-component |sum of cell residuals| * dt / mass in place.
Eigen::VectorXd mass_balance_error(const ReservoirModel& model, const Eigen::VectorXd& residual,
                                   const ReservoirState& state, double dt);

class Simulator {
 public:
  using SystemHook = std::function<void(const BlockMatrix&, int step, int attempt, int newton)>;
  using StepHook = std::function<void(const ReservoirState&, const StepRecord&)>;

  Simulator(ReservoirModel& model, SimulatorConfig config, int workers);

  const Partition& partition() const { return part_; }
  const SimulatorConfig& config() const { return config_; }
  void on_system(SystemHook hook) { system_hook_ = std::move(hook); }
  void on_step(StepHook hook) { step_hook_ = std::move(hook); }

  /// One Newton solve of the step from `old` over dt, writing into `state`.
  AttemptResult attempt(const ReservoirState& old, double dt, ReservoirState& state,
                        std::vector<IterationRecord>* log = nullptr, int step = 0,
                        int attempt_index = 0);

  /// Marches `state` to t_end, applying the schedule at the start of every step.
  /// Throws SimulationAbort when a step cannot be completed; `report` then holds
  /// the steps done so far.
  void run(ReservoirState& state, const Schedule& schedule, double t_end, RunReport& report);

 private:
  ReservoirModel& model_;
  SimulatorConfig config_;
  Partition part_;
  SystemHook system_hook_;
  StepHook step_hook_;
};

}  // namespace resim

#endif  // RESIM_NONLINEAR_HPP
