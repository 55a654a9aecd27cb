#ifndef RESIM_BLOCK_MATRIX_HPP
#define RESIM_BLOCK_MATRIX_HPP

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "resim/common.hpp"
#include "resim/parallel.hpp"

namespace resim {

/// Small dense types for m x m cell blocks (m <= 3); no heap allocation.
using SmallMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor, 3, 3>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 3, 1>;
using BlockMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstBlockMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Bordered block system
///
///     [ A_cc  A_cw ] [x_c]   [b_c]
///     [ A_wc  A_ww ] [x_w] = [b_w]
///
/// A_cc is block CSR with m x m blocks over cells (unknown c*m + u), the well
/// unknowns follow all cell unknowns. Wells couple only through perforations,
/// so A_ww is diagonal. Pressure is unknown 0 of every cell block.
class BlockMatrix {
 public:
  struct Coupling {
    Index cell;
    Index well;
  };

  BlockMatrix() = default;
  /// `cols` must be sorted within each row and contain the diagonal.
  BlockMatrix(int block_size, Index ncell, std::vector<Index> row_ptr, std::vector<Index> cols,
              Index nwell = 0, std::vector<Coupling> couplings = {});

  /// Block size 1, no wells.
  static BlockMatrix from_scalar(const RowSparse& a);

  int block_size() const { return m_; }
  Index cell_count() const { return ncell_; }
  Index well_count() const { return nwell_; }
  Index size() const { return ncell_ * m_ + nwell_; }
  Index nonzero_blocks() const { return static_cast<Index>(cols_.size()); }

  const std::vector<Index>& row_ptr() const { return row_ptr_; }
  const std::vector<Index>& cols() const { return cols_; }
  Index diag_position(Index row) const { return diag_[static_cast<std::size_t>(row)]; }
  /// Position of block (row, col), or -1.
  Index find(Index row, Index col) const;

  BlockMap block(Index pos) { return {values_.data() + pos * m_ * m_, m_, m_}; }
  ConstBlockMap block(Index pos) const { return {values_.data() + pos * m_ * m_, m_, m_}; }

  const std::vector<Coupling>& couplings() const { return couplings_; }
  /// couplings_[coupling_ptr[c] .. coupling_ptr[c+1]) perforate cell c.
  const std::vector<Index>& cell_coupling_ptr() const { return cell_coupling_ptr_; }
  /// Coupling ids of well w.
  const std::vector<Index>& well_couplings(Index w) const { return well_couplings_[w]; }
  /// Column of A_cw for coupling p (the cell's m rows, one well column).
  Eigen::Map<Eigen::VectorXd> cell_to_well(Index p) { return {cw_.data() + p * m_, m_}; }
  Eigen::Map<const Eigen::VectorXd> cell_to_well(Index p) const { return {cw_.data() + p * m_, m_}; }
  /// Row of A_wc for coupling p (one well row, the cell's m columns).
  Eigen::Map<Eigen::VectorXd> well_to_cell(Index p) { return {wc_.data() + p * m_, m_}; }
  Eigen::Map<const Eigen::VectorXd> well_to_cell(Index p) const { return {wc_.data() + p * m_, m_}; }
  double& well_diag(Index w) { return ww_(w); }
  double well_diag(Index w) const { return ww_(w); }

  Eigen::VectorXd& rhs() { return rhs_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }

  void set_zero();

  /// y = A x, cell rows split over the partition's ranges.
  void multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y, const Partition& part) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;

  /// Scalar matrix of the pressure-pressure entries, same pattern as A_cc.
  RowSparse pressure_block() const;
  RowSparse to_sparse() const;
  Eigen::MatrixXd to_dense() const;

 private:
  int m_ = 1;
  Index ncell_ = 0;
  Index nwell_ = 0;
  std::vector<Index> row_ptr_{0};
  std::vector<Index> cols_;
  std::vector<Index> diag_;
  std::vector<double> values_;
  std::vector<Coupling> couplings_;
  std::vector<Index> cell_coupling_ptr_{0};
  std::vector<std::vector<Index>> well_couplings_;
  std::vector<double> cw_;
  std::vector<double> wc_;
  Eigen::VectorXd ww_;
  Eigen::VectorXd rhs_;
};

/// Sparse matrix-vector product over row ranges of a compressed row-major matrix.
void spmv(const RowSparse& a, const Eigen::VectorXd& x, Eigen::VectorXd& y, const Partition& part);

}  // namespace resim

#endif  // RESIM_BLOCK_MATRIX_HPP
