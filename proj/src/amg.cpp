#include "resim/amg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace resim {

namespace {

/// Strong-neighbor lists from the symmetrized magnitude |a_ij| + |a_ji|.
std::vector<std::vector<Index>> strength_graph(const RowSparse& a, double theta) {
  const Index n = a.rows();
  RowSparse mag = a.cwiseAbs();
  RowSparse sym = RowSparse(mag.transpose());
  sym = 0.5 * (sym + mag);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < n; ++i) diag(i) = std::abs(a.coeff(i, i));
  std::vector<std::vector<Index>> strong(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    for (RowSparse::InnerIterator it(sym, i); it; ++it) {
      const Index j = it.col();
      if (j == i) continue;
      if (it.value() >= theta * std::sqrt(diag(i) * diag(j)) && it.value() > 0.0)
        strong[i].push_back(j);
    }
  return strong;
}

}  // namespace

std::vector<Index> aggregate(const RowSparse& a, double strength, Index& count) {
  const Index n = a.rows();
  const auto strong = strength_graph(a, strength);
  std::vector<Index> agg(static_cast<std::size_t>(n), -1);
  count = 0;
  // Pass 1: roots whose strong neighborhood is entirely free.
  for (Index i = 0; i < n; ++i) {
    if (agg[i] >= 0 || strong[i].empty()) continue;
    bool free = true;
    for (Index j : strong[i]) free &= agg[j] < 0;
    if (!free) continue;
    agg[i] = count;
    for (Index j : strong[i]) agg[j] = count;
    ++count;
  }
  // Pass 2: attach leftovers to a neighboring pass-1 aggregate.
  std::vector<Index> first = agg;
  for (Index i = 0; i < n; ++i) {
    if (agg[i] >= 0) continue;
    for (Index j : strong[i])
      if (first[j] >= 0) {
        agg[i] = first[j];
        break;
      }
  }
  // Pass 3: whatever remains forms new aggregates with its free neighbors.
  for (Index i = 0; i < n; ++i) {
    if (agg[i] >= 0 || strong[i].empty()) continue;
    agg[i] = count;
    for (Index j : strong[i])
      if (agg[j] < 0) agg[j] = count;
    ++count;
  }
  return agg;
}

void AmgHierarchy::setup(const RowSparse& a, const AmgConfig& config) {
  config_ = config;
  levels_.clear();
  RowSparse current = a;
  current.makeCompressed();
  while (true) {
    Level lev;
    lev.a = current;
    const Index n = current.rows();
    lev.inv_diag = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) {
      const double d = current.coeff(i, i);
      if (d != 0.0) lev.inv_diag(i) = 1.0 / d;
    }
    if (n <= config.coarse_size || static_cast<int>(levels_.size()) + 1 >= config.max_levels) {
      levels_.push_back(std::move(lev));
      break;
    }
    Index nagg = 0;
    const std::vector<Index> agg = aggregate(current, config.strength, nagg);
    if (nagg == 0 || 10 * nagg > 8 * n) {
      levels_.push_back(std::move(lev));
      break;
    }
    RowSparse tentative(n, nagg);
    {
      std::vector<Eigen::Triplet<double>> t;
      t.reserve(static_cast<std::size_t>(n));
      for (Index i = 0; i < n; ++i)
        if (agg[i] >= 0) t.emplace_back(i, agg[i], 1.0);
      tentative.setFromTriplets(t.begin(), t.end());
    }
    // Filtered operator: weak off-diagonal entries lumped into the diagonal.
    const auto strong = strength_graph(current, config.strength);
    std::vector<Eigen::Triplet<double>> ft;
    Eigen::VectorXd fdiag = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) {
      for (RowSparse::InnerIterator it(current, i); it; ++it) {
        const Index j = it.col();
        if (j == i) {
          fdiag(i) += it.value();
        } else if (std::binary_search(strong[i].begin(), strong[i].end(), j)) {
          ft.emplace_back(i, j, it.value());
        } else {
          fdiag(i) += it.value();
        }
      }
    }
    for (Index i = 0; i < n; ++i) ft.emplace_back(i, i, fdiag(i));
    RowSparse filtered(n, n);
    filtered.setFromTriplets(ft.begin(), ft.end());
    double rho = 0.0;
    Eigen::VectorXd finv = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) {
      if (fdiag(i) == 0.0) continue;
      finv(i) = 1.0 / fdiag(i);
      double row = 0.0;
      for (RowSparse::InnerIterator it(filtered, i); it; ++it) row += std::abs(it.value());
      rho = std::max(rho, row * std::abs(finv(i)));
    }
    const double omega = rho > 0.0 ? (4.0 / 3.0) / rho : 0.0;
    RowSparse smoother = finv.asDiagonal() * filtered;
    RowSparse p = tentative - omega * RowSparse(smoother * tentative);
    p.prune(0.0);
    p.makeCompressed();
    lev.p = p;
    lev.r = RowSparse(p.transpose());
    lev.r.makeCompressed();
    RowSparse coarse = RowSparse(lev.r * RowSparse(current * lev.p));
    coarse.makeCompressed();
    levels_.push_back(std::move(lev));
    current = std::move(coarse);
  }
  const RowSparse& last = levels_.back().a;
  sparse_coarse_ = last.rows() > kDenseCoarseLimit;
  if (sparse_coarse_) {
    Eigen::SparseMatrix<double> col = last;
    coarse_lu_.analyzePattern(col);
    coarse_lu_.factorize(col);
    if (coarse_lu_.info() != Eigen::Success)
      throw Error("amg: singular coarsest level of size " + std::to_string(last.rows()));
  } else {
    coarse_.compute(Eigen::MatrixXd(last));
  }
}

void AmgHierarchy::vcycle(const Eigen::VectorXd& r, Eigen::VectorXd& z, int workers) const {
  cycle(0, r, z, workers);
}

void AmgHierarchy::cycle(std::size_t l, const Eigen::VectorXd& r, Eigen::VectorXd& z,
                         int workers) const {
  const Level& lev = levels_[l];
  if (l + 1 == levels_.size()) {
    z = sparse_coarse_ ? Eigen::VectorXd(coarse_lu_.solve(r)) : Eigen::VectorXd(coarse_.solve(r));
    return;
  }
  const Partition part = partition_rows(lev.a.rows(), workers);
  const double w = config_.jacobi_weight;
  z = w * lev.inv_diag.cwiseProduct(r);
  Eigen::VectorXd az;
  spmv(lev.a, z, az, part);
  const Eigen::VectorXd rc = lev.r * (r - az);
  Eigen::VectorXd zc;
  cycle(l + 1, rc, zc, workers);
  z += lev.p * zc;
  spmv(lev.a, z, az, part);
  z += w * lev.inv_diag.cwiseProduct(r - az);
}

}  // namespace resim
