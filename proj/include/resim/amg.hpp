#ifndef RESIM_AMG_HPP
#define RESIM_AMG_HPP

#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "resim/block_matrix.hpp"

namespace resim {

struct AmgConfig {
  double strength = 0.12;     // |a_ij| >= strength * sqrt(|a_ii a_jj|)
  Index coarse_size = 100;    // direct solve at or below this size
  int max_levels = 20;
  double jacobi_weight = 0.8;
};

/// Smoothed-aggregation hierarchy: greedy three-pass aggregation on the
/// symmetrized strength graph, piecewise-constant tentative prolongator with
/// one damped-Jacobi smoothing step on the filtered matrix, R = P^T and
/// Galerkin coarse operators.
class AmgHierarchy {
 public:
  struct Level {
    RowSparse a;
    RowSparse p;  // to the next coarser level
    RowSparse r;
    Eigen::VectorXd inv_diag;
  };

  AmgHierarchy() = default;
  explicit AmgHierarchy(const RowSparse& a, const AmgConfig& config = {}) { setup(a, config); }

  void setup(const RowSparse& a, const AmgConfig& config = {});

  /// One V(1,1) cycle from a zero initial guess: z ~= A^-1 r.
  void vcycle(const Eigen::VectorXd& r, Eigen::VectorXd& z, int workers = 1) const;

  std::size_t level_count() const { return levels_.size(); }
  Index level_size(std::size_t l) const { return levels_[l].a.rows(); }
  const Level& level(std::size_t l) const { return levels_[l]; }

 private:
  void cycle(std::size_t l, const Eigen::VectorXd& r, Eigen::VectorXd& z, int workers) const;

  AmgConfig config_;
  std::vector<Level> levels_;  // last level is solved directly
  static constexpr Index kDenseCoarseLimit = 1000;
  bool sparse_coarse_ = false;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> coarse_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> coarse_lu_;
};

/// Aggregate id per row (ids are 0..count-1) from the strength graph of `a`;
/// rows without strong connections get -1 and are left to the smoother.
std::vector<Index> aggregate(const RowSparse& a, double strength, Index& count);

}  // namespace resim

#endif  // RESIM_AMG_HPP
