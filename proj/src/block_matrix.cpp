#include "resim/block_matrix.hpp"

#include <algorithm>

namespace resim {

BlockMatrix::BlockMatrix(int block_size, Index ncell, std::vector<Index> row_ptr,
                         std::vector<Index> cols, Index nwell, std::vector<Coupling> couplings)
    : m_(block_size),
      ncell_(ncell),
      nwell_(nwell),
      row_ptr_(std::move(row_ptr)),
      cols_(std::move(cols)),
      couplings_(std::move(couplings)) {
  if (m_ < 1 || m_ > 3) throw std::invalid_argument("BlockMatrix: block size must be 1..3");
  if (static_cast<Index>(row_ptr_.size()) != ncell_ + 1)
    throw std::invalid_argument("BlockMatrix: row_ptr size mismatch");
  diag_.assign(static_cast<std::size_t>(ncell_), -1);
  for (Index r = 0; r < ncell_; ++r) {
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
      if (p > row_ptr_[r] && cols_[p] <= cols_[p - 1])
        throw std::invalid_argument("BlockMatrix: columns must be sorted and unique");
      if (cols_[p] == r) diag_[r] = p;
    }
    if (diag_[r] < 0) throw std::invalid_argument("BlockMatrix: missing diagonal block");
  }
  values_.assign(cols_.size() * static_cast<std::size_t>(m_ * m_), 0.0);

  std::stable_sort(couplings_.begin(), couplings_.end(),
                   [](const Coupling& a, const Coupling& b) { return a.cell < b.cell; });
  cell_coupling_ptr_.assign(static_cast<std::size_t>(ncell_) + 1, 0);
  well_couplings_.assign(static_cast<std::size_t>(nwell_), {});
  for (std::size_t p = 0; p < couplings_.size(); ++p) {
    ++cell_coupling_ptr_[couplings_[p].cell + 1];
    well_couplings_[couplings_[p].well].push_back(static_cast<Index>(p));
  }
  for (Index c = 0; c < ncell_; ++c) cell_coupling_ptr_[c + 1] += cell_coupling_ptr_[c];
  cw_.assign(couplings_.size() * m_, 0.0);
  wc_.assign(couplings_.size() * m_, 0.0);
  ww_ = Eigen::VectorXd::Zero(nwell_);
  rhs_ = Eigen::VectorXd::Zero(size());
}

BlockMatrix BlockMatrix::from_scalar(const RowSparse& a) {
  RowSparse s = a;
  s.makeCompressed();
  const Index n = s.rows();
  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index r = 0; r < n; ++r) {
    bool has_diag = false;
    std::vector<std::pair<Index, double>> row;
    for (RowSparse::InnerIterator it(s, r); it; ++it) {
      row.emplace_back(it.col(), it.value());
      has_diag |= it.col() == r;
    }
    if (!has_diag) row.emplace_back(r, 0.0);
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      cols.push_back(c);
      vals.push_back(v);
    }
    row_ptr[r + 1] = static_cast<Index>(cols.size());
  }
  BlockMatrix out(1, n, std::move(row_ptr), std::move(cols));
  std::copy(vals.begin(), vals.end(), out.values_.begin());
  return out;
}

Index BlockMatrix::find(Index row, Index col) const {
  const auto first = cols_.begin() + row_ptr_[row];
  const auto last = cols_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(first, last, col);
  return (it != last && *it == col) ? static_cast<Index>(it - cols_.begin()) : -1;
}

void BlockMatrix::set_zero() {
  std::fill(values_.begin(), values_.end(), 0.0);
  std::fill(cw_.begin(), cw_.end(), 0.0);
  std::fill(wc_.begin(), wc_.end(), 0.0);
  ww_.setZero();
  rhs_.setZero();
}

void BlockMatrix::multiply(const Eigen::VectorXd& x, Eigen::VectorXd& y,
                           const Partition& part) const {
  y.resize(size());
  const Index m = m_;
  auto rows = [&](int, Index begin, Index end) {
    for (Index r = begin; r < end; ++r) {
      double acc[3] = {0.0, 0.0, 0.0};
      for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) {
        const double* b = values_.data() + p * m * m;
        const double* xv = x.data() + cols_[p] * m;
        for (Index i = 0; i < m; ++i)
          for (Index j = 0; j < m; ++j) acc[i] += b[i * m + j] * xv[j];
      }
      for (Index p = cell_coupling_ptr_[r]; p < cell_coupling_ptr_[r + 1]; ++p) {
        const double xw = x(ncell_ * m + couplings_[p].well);
        for (Index i = 0; i < m; ++i) acc[i] += cw_[p * m + i] * xw;
      }
      for (Index i = 0; i < m; ++i) y(r * m + i) = acc[i];
    }
  };
  if (part.size() == ncell_ && part.workers > 1)
    for_each_range(part, rows);
  else
    rows(0, 0, ncell_);
  for (Index w = 0; w < nwell_; ++w) {
    double acc = ww_(w) * x(ncell_ * m + w);
    for (Index p : well_couplings_[w])
      for (Index j = 0; j < m; ++j) acc += wc_[p * m + j] * x(couplings_[p].cell * m + j);
    y(ncell_ * m + w) = acc;
  }
}

Eigen::VectorXd BlockMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y;
  multiply(x, y, partition_rows(ncell_, 1));
  return y;
}

RowSparse BlockMatrix::pressure_block() const {
  RowSparse a(ncell_, ncell_);
  a.reserve(Eigen::VectorXi::Constant(ncell_, 8));
  for (Index r = 0; r < ncell_; ++r)
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      a.insert(r, cols_[p]) = values_[static_cast<std::size_t>(p * m_ * m_)];
  a.makeCompressed();
  return a;
}

RowSparse BlockMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(values_.size() + 2 * cw_.size() + nwell_);
  for (Index r = 0; r < ncell_; ++r)
    for (Index p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p)
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
          t.emplace_back(r * m_ + i, cols_[p] * m_ + j, values_[(p * m_ + i) * m_ + j]);
  for (std::size_t p = 0; p < couplings_.size(); ++p) {
    const Index cell = couplings_[p].cell;
    const Index wrow = ncell_ * m_ + couplings_[p].well;
    for (int i = 0; i < m_; ++i) {
      t.emplace_back(cell * m_ + i, wrow, cw_[p * m_ + i]);
      t.emplace_back(wrow, cell * m_ + i, wc_[p * m_ + i]);
    }
  }
  for (Index w = 0; w < nwell_; ++w) t.emplace_back(ncell_ * m_ + w, ncell_ * m_ + w, ww_(w));
  RowSparse a(size(), size());
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Eigen::MatrixXd BlockMatrix::to_dense() const { return Eigen::MatrixXd(to_sparse()); }

void spmv(const RowSparse& a, const Eigen::VectorXd& x, Eigen::VectorXd& y, const Partition& part) {
  y.resize(a.rows());
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const double* vals = a.valuePtr();
  auto rows = [&](int, Index begin, Index end) {
    for (Index r = begin; r < end; ++r) {
      double acc = 0.0;
      for (auto p = outer[r]; p < outer[r + 1]; ++p) acc += vals[p] * x(inner[p]);
      y(r) = acc;
    }
  };
  if (part.size() == a.rows() && part.workers > 1)
    for_each_range(part, rows);
  else
    rows(0, 0, a.rows());
}

}  // namespace resim
