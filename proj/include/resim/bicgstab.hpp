#ifndef RESIM_BICGSTAB_HPP
#define RESIM_BICGSTAB_HPP

#include "resim/block_matrix.hpp"
#include "resim/cpr.hpp"

namespace resim {

enum class SolveStatus { converged, max_iterations, breakdown };

const char* to_string(SolveStatus s);

struct SolveResult {
  Eigen::VectorXd x;
  int iterations = 0;
  SolveStatus status = SolveStatus::converged;
  double relative_residual = 0.0;  // true ||b - A x|| / ||b||
};

/// Right-preconditioned BiCGSTAB. Convergence is declared on the true
/// residual: when the recursive residual meets `tol` the true residual is
/// recomputed, and iteration restarts from it if it does not. Dot products
/// use the partition's deterministic reduction.
SolveResult bicgstab(const BlockMatrix& a, const Preconditioner& m, const Eigen::VectorXd& b,
                     double tol, int max_iterations, const Partition& part,
                     const Eigen::VectorXd* x0 = nullptr);

}  // namespace resim

#endif  // RESIM_BICGSTAB_HPP
