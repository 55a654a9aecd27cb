#include "resim/decoupling.hpp"

#include <atomic>
#include <cmath>

#include <Eigen/LU>

namespace resim {

namespace {

void scale_cell_row(BlockMatrix& a, Index c, const SmallMatrix& l) {
  const int m = a.block_size();
  SmallMatrix tmp(m, m);
  for (Index p = a.row_ptr()[c]; p < a.row_ptr()[c + 1]; ++p) {
    auto b = a.block(p);
    tmp.noalias() = l * b;
    b = tmp;
  }
  SmallVector v(m);
  for (Index p = a.cell_coupling_ptr()[c]; p < a.cell_coupling_ptr()[c + 1]; ++p) {
    auto cw = a.cell_to_well(p);
    v.noalias() = l * cw;
    cw = v;
  }
  auto rhs = a.rhs().segment(c * m, m);
  v.noalias() = l * rhs;
  rhs = v;
}

template <class MakeScaling>
BlockMatrix transform(BlockMatrix a, Index* fallbacks, const Partition* part, MakeScaling make) {
  std::atomic<Index> failed{0};
  auto rows = [&](int, Index begin, Index end) {
    for (Index c = begin; c < end; ++c) {
      bool ok = true;
      const SmallMatrix l = make(SmallMatrix(a.block(a.diag_position(c))), ok);
      if (!ok) failed.fetch_add(1, std::memory_order_relaxed);
      scale_cell_row(a, c, l);
    }
  };
  if (part && part->size() == a.cell_count() && part->workers > 1)
    for_each_range(*part, rows);
  else
    rows(0, 0, a.cell_count());
  if (fallbacks) *fallbacks = failed.load();
  return a;
}

bool nearly_singular(const SmallMatrix& d) {
  const double scale = d.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) return true;
  return !(std::abs(d.determinant()) > 1e-14 * std::pow(scale, static_cast<double>(d.rows())));
}

}  // namespace

BlockMatrix quasi_impes_decouple(BlockMatrix a, Index* fallbacks, const Partition* part) {
  const int m = a.block_size();
  return transform(std::move(a), fallbacks, part, [m](const SmallMatrix& d, bool& ok) {
    SmallMatrix l = SmallMatrix::Identity(m, m);
    if (m == 1) return l;
    const SmallMatrix dss = d.bottomRightCorner(m - 1, m - 1);
    if (nearly_singular(dss)) {
      ok = false;
      return l;
    }
    l.topRightCorner(1, m - 1) = -d.topRightCorner(1, m - 1) * dss.inverse();
    return l;
  });
}

BlockMatrix abf_decouple(BlockMatrix a, Index* fallbacks, const Partition* part) {
  const int m = a.block_size();
  return transform(std::move(a), fallbacks, part, [m](const SmallMatrix& d, bool& ok) {
    if (!nearly_singular(d)) return SmallMatrix(d.inverse());
    ok = false;
    SmallMatrix l = SmallMatrix::Identity(m, m);
    for (int i = 0; i < m; ++i)
      if (d(i, i) != 0.0) l(i, i) = 1.0 / d(i, i);
    return l;
  });
}

BlockMatrix decouple(BlockMatrix a, Decoupling kind, Index* fallbacks, const Partition* part) {
  switch (kind) {
    case Decoupling::quasi_impes: return quasi_impes_decouple(std::move(a), fallbacks, part);
    case Decoupling::abf: return abf_decouple(std::move(a), fallbacks, part);
    case Decoupling::none: break;
  }
  if (fallbacks) *fallbacks = 0;
  return a;
}

}  // namespace resim
