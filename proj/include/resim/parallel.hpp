#ifndef RESIM_PARALLEL_HPP
#define RESIM_PARALLEL_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "resim/common.hpp"

namespace resim {

class Grid;

struct Face {
  Index lower;  // min cell id
  Index upper;
  int axis;
};

/// Contiguous cell ranges, one per worker.
struct Partition {
  int workers = 1;
  std::vector<Index> starts{0, 0};  // size workers + 1
  std::vector<Face> boundary_faces;

  Index begin(int w) const { return starts[static_cast<std::size_t>(w)]; }
  Index end(int w) const { return starts[static_cast<std::size_t>(w) + 1]; }
  Index size() const { return starts.back(); }
};

/// Near-equal split of [0, ncell) into `workers` ranges; the first
/// ncell % workers ranges hold one extra cell. Workers beyond ncell are dropped.
Partition partition_cells(Index ncell, int workers);

/// As above, and lists each face whose cells fall in different ranges once.
Partition partition_cells(const Grid& grid, int workers);

/// Same split rule on an arbitrary row count (used for coarse AMG levels).
Partition partition_rows(Index nrows, int workers);

/// Runs f(worker, begin, end) for every range, one thread per range.
template <class F>
void for_each_range(const Partition& part, F&& f) {
#pragma omp parallel for num_threads(part.workers) schedule(static, 1)
  for (int w = 0; w < part.workers; ++w) f(w, part.begin(w), part.end(w));
}

/// Reductions are summed over fixed 1024-entry chunks in chunk order, so the
/// result is bitwise independent of the worker count.
double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int workers);
double norm2(const Eigen::VectorXd& a, int workers);

}  // namespace resim

#endif  // RESIM_PARALLEL_HPP
