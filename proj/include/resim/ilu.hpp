#ifndef RESIM_ILU_HPP
#define RESIM_ILU_HPP

#include <vector>

#include "resim/block_matrix.hpp"

namespace resim {

/// Block ILU(0) of the cell blocks, restricted to `subdomains` contiguous cell
/// ranges (blocks coupling different ranges are dropped). The subdomain count
/// is fixed by configuration, not by the worker count, so results do not
/// depend on how many threads apply it.
///
/// Wells are eliminated first: each perforated diagonal block receives the
/// diagonal part of the Schur complement -A_cw A_ww^-1 A_wc, and apply()
/// performs the matching block forward/back substitution on the well rows.
class BlockIlu0 {
 public:
  BlockIlu0() = default;
  BlockIlu0(const BlockMatrix& a, int subdomains, int workers = 1) { setup(a, subdomains, workers); }

  void setup(const BlockMatrix& a, int subdomains, int workers = 1);
  /// z ~= A^-1 r over the full system (cells then wells).
  void apply(const Eigen::VectorXd& r, Eigen::VectorXd& z, int workers = 1) const;

  Index shifted_pivots() const { return shifted_; }
  int subdomains() const { return static_cast<int>(sub_starts_.size()) - 1; }

 private:
  Index factor_range(Index begin, Index end, std::vector<Index>& marker);
  void solve_range(Index begin, Index end, const Eigen::VectorXd& r, Eigen::VectorXd& z) const;

  int m_ = 1;
  Index ncell_ = 0;
  Index nwell_ = 0;
  std::vector<Index> sub_starts_;
  std::vector<Index> row_ptr_;
  std::vector<Index> cols_;
  std::vector<Index> diag_;
  std::vector<double> values_;  // L (strict lower, unit diagonal implied) and U
  std::vector<double> inv_diag_;
  // well elimination data
  std::vector<BlockMatrix::Coupling> couplings_;
  std::vector<Index> cell_coupling_ptr_;
  std::vector<std::vector<Index>> well_couplings_;
  std::vector<double> cw_, wc_;
  Eigen::VectorXd ww_inv_;
  Index shifted_ = 0;
};

}  // namespace resim

#endif  // RESIM_ILU_HPP
