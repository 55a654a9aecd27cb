#ifndef RESIM_LINEAR_SOLVER_HPP
#define RESIM_LINEAR_SOLVER_HPP

#include <Eigen/Core>

#include "resim/bicgstab.hpp"
#include "resim/block_matrix.hpp"
#include "resim/cpr.hpp"
#include "resim/decoupling.hpp"

namespace resim {

enum class PreconditionerKind { none, ilu0, cpr_fpf };

struct LinearConfig {
  int max_iterations = 50;
  PreconditionerKind preconditioner = PreconditionerKind::cpr_fpf;
  Decoupling decoupling = Decoupling::quasi_impes;
  CprConfig cpr;
  /// Correct dx by per-unknown uniform shifts so the residual sums over cells
  /// vanish per component (global conservation of the linearized step).
  bool conservation_correction = true;

  /// Throws ConfigError on a nonpositive iteration cap.
  void validate() const;
};

struct LinearOutcome {
  Eigen::VectorXd dx;
  int iterations = 0;
  SolveStatus status = SolveStatus::converged;
  double theta = 0.0;
  double b_norm = 0.0;  // ||b|| of the undecoupled system
  double r_norm = 0.0;  // ||b - A dx|| of the undecoupled system
  bool contract_met = false;
  Eigen::VectorXd residual;  // b - A dx
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;
};

/// Solves the Newton system `a` (rhs stored in the matrix) so that
/// ||b - A dx|| <= theta ||b|| holds in the original, undecoupled system.
/// The Krylov solve runs on the decoupled system; if the tolerance reached
/// there does not carry over, iteration resumes from the current iterate with
/// a tighter tolerance until the contract holds or the cap is spent. The
/// conservation correction is kept only if it does not break the contract
/// and does not increase ||b - A dx|| beyond theta ||b||.
LinearOutcome solve_newton_system(const BlockMatrix& a, double theta, const LinearConfig& config,
                                  const Partition& part);

}  // namespace resim

#endif  // RESIM_LINEAR_SOLVER_HPP
