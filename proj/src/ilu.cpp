#include "resim/ilu.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>

#include <Eigen/LU>

namespace resim {

namespace {

bool invertible(const SmallMatrix& d) {
  const double scale = d.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return false;
  return std::abs(d.determinant()) > 1e-14 * std::pow(scale, static_cast<double>(d.rows()));
}

}  // namespace

void BlockIlu0::setup(const BlockMatrix& a, int subdomains, int workers) {
  m_ = a.block_size();
  ncell_ = a.cell_count();
  nwell_ = a.well_count();
  const int m2 = m_ * m_;
  sub_starts_ = partition_rows(ncell_, std::max(1, subdomains)).starts;

  row_ptr_.assign(static_cast<std::size_t>(ncell_) + 1, 0);
  cols_.clear();
  values_.clear();
  diag_.assign(static_cast<std::size_t>(ncell_), -1);
  std::size_t s = 0;
  for (Index r = 0; r < ncell_; ++r) {
    while (r >= sub_starts_[s + 1]) ++s;
    const Index lo = sub_starts_[s];
    const Index hi = sub_starts_[s + 1];
    for (Index p = a.row_ptr()[r]; p < a.row_ptr()[r + 1]; ++p) {
      const Index c = a.cols()[p];
      if (c < lo || c >= hi) continue;
      if (c == r) diag_[r] = static_cast<Index>(cols_.size());
      cols_.push_back(c);
      const auto b = a.block(p);
      for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) values_.push_back(b(i, j));
    }
    row_ptr_[r + 1] = static_cast<Index>(cols_.size());
  }

  couplings_ = a.couplings();
  cell_coupling_ptr_ = a.cell_coupling_ptr();
  well_couplings_.assign(static_cast<std::size_t>(nwell_), {});
  cw_.resize(couplings_.size() * m_);
  wc_.resize(couplings_.size() * m_);
  ww_inv_ = Eigen::VectorXd::Zero(nwell_);
  for (Index w = 0; w < nwell_; ++w) {
    well_couplings_[w] = a.well_couplings(w);
    const double d = a.well_diag(w);
    if (std::abs(d) > 0.0 && std::isfinite(1.0 / d)) ww_inv_(w) = 1.0 / d;
  }
  for (std::size_t p = 0; p < couplings_.size(); ++p) {
    const auto cw = a.cell_to_well(static_cast<Index>(p));
    const auto wc = a.well_to_cell(static_cast<Index>(p));
    for (int i = 0; i < m_; ++i) {
      cw_[p * m_ + i] = cw(i);
      wc_[p * m_ + i] = wc(i);
    }
    const double winv = ww_inv_(couplings_[p].well);
    if (winv == 0.0) continue;
    BlockMap d(values_.data() + diag_[couplings_[p].cell] * m2, m_, m_);
    d.noalias() -= winv * (cw * wc.transpose());
  }

  inv_diag_.assign(static_cast<std::size_t>(ncell_) * m2, 0.0);
  std::atomic<Index> shifted{0};
  const int nsub = static_cast<int>(sub_starts_.size()) - 1;
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(static, 1)
  for (int sd = 0; sd < nsub; ++sd) {
    std::vector<Index> marker(static_cast<std::size_t>(sub_starts_[sd + 1] - sub_starts_[sd]), -1);
    shifted.fetch_add(factor_range(sub_starts_[sd], sub_starts_[sd + 1], marker));
  }
  shifted_ = shifted.load();
}

Index BlockIlu0::factor_range(Index begin, Index end, std::vector<Index>& marker) {
  const int m2 = m_ * m_;
  Index shifted = 0;
  auto blk = [&](Index p) { return BlockMap(values_.data() + p * m2, m_, m_); };
  SmallMatrix l(m_, m_);
  for (Index i = begin; i < end; ++i) {
    for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) marker[cols_[p] - begin] = p;
    for (Index p = row_ptr_[i]; p < diag_[i]; ++p) {
      const Index k = cols_[p];
      const ConstBlockMap inv_k(inv_diag_.data() + k * m2, m_, m_);
      l.noalias() = blk(p) * inv_k;
      blk(p) = l;
      for (Index q = diag_[k] + 1; q < row_ptr_[k + 1]; ++q) {
        const Index pos = marker[cols_[q] - begin];
        if (pos >= 0) blk(pos).noalias() -= l * blk(q);
      }
    }
    SmallMatrix d = blk(diag_[i]);
    if (!invertible(d)) {
      const double boost = 1e-12 * std::max(1.0, d.cwiseAbs().maxCoeff());
      d += boost * SmallMatrix::Identity(m_, m_);
      blk(diag_[i]) = d;
      ++shifted;
      std::clog << "warning: ILU(0) zero pivot at cell " << i << ", diagonal shifted\n";
      if (!invertible(d)) d = SmallMatrix::Identity(m_, m_);
    }
    BlockMap(inv_diag_.data() + i * m2, m_, m_) = d.inverse();
    for (Index p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) marker[cols_[p] - begin] = -1;
  }
  return shifted;
}

void BlockIlu0::solve_range(Index begin, Index end, const Eigen::VectorXd& r,
                            Eigen::VectorXd& z) const {
  const int m2 = m_ * m_;
  SmallVector y(m_);
  for (Index i = begin; i < end; ++i) {
    y = r.segment(i * m_, m_);
    for (Index p = row_ptr_[i]; p < diag_[i]; ++p)
      y.noalias() -= ConstBlockMap(values_.data() + p * m2, m_, m_) * z.segment(cols_[p] * m_, m_);
    z.segment(i * m_, m_) = y;
  }
  for (Index i = end - 1; i >= begin; --i) {
    y = z.segment(i * m_, m_);
    for (Index p = diag_[i] + 1; p < row_ptr_[i + 1]; ++p)
      y.noalias() -= ConstBlockMap(values_.data() + p * m2, m_, m_) * z.segment(cols_[p] * m_, m_);
    z.segment(i * m_, m_).noalias() = ConstBlockMap(inv_diag_.data() + i * m2, m_, m_) * y;
  }
}

void BlockIlu0::apply(const Eigen::VectorXd& r, Eigen::VectorXd& z, int workers) const {
  const Index nc = ncell_ * m_;
  z.resize(nc + nwell_);
  Eigen::VectorXd rc = r.head(nc);
  for (std::size_t p = 0; p < couplings_.size(); ++p) {
    const Index w = couplings_[p].well;
    if (ww_inv_(w) == 0.0) continue;
    const double t = ww_inv_(w) * r(nc + w);
    for (int i = 0; i < m_; ++i) rc(couplings_[p].cell * m_ + i) -= cw_[p * m_ + i] * t;
  }
  const int nsub = static_cast<int>(sub_starts_.size()) - 1;
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(static, 1)
  for (int sd = 0; sd < nsub; ++sd) solve_range(sub_starts_[sd], sub_starts_[sd + 1], rc, z);
  for (Index w = 0; w < nwell_; ++w) {
    if (ww_inv_(w) == 0.0) {
      z(nc + w) = 0.0;
      continue;
    }
    double acc = r(nc + w);
    for (Index p : well_couplings_[w])
      for (int j = 0; j < m_; ++j) acc -= wc_[p * m_ + j] * z(couplings_[p].cell * m_ + j);
    z(nc + w) = ww_inv_(w) * acc;
  }
}

}  // namespace resim
