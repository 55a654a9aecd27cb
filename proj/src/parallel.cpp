#include "resim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "resim/grid.hpp"

namespace resim {

Partition partition_rows(Index nrows, int workers) {
  Partition part;
  workers = std::max(1, workers);
  if (nrows > 0 && workers > nrows) workers = static_cast<int>(nrows);
  part.workers = workers;
  part.starts.assign(static_cast<std::size_t>(workers) + 1, 0);
  const Index base = nrows / workers;
  const Index extra = nrows % workers;
  for (int w = 0; w < workers; ++w)
    part.starts[static_cast<std::size_t>(w) + 1] = part.starts[w] + base + (w < extra ? 1 : 0);
  return part;
}

Partition partition_cells(Index ncell, int workers) {
  if (workers > ncell)
    std::clog << "warning: " << workers << " workers for " << ncell << " cells; using " << ncell
              << "\n";
  return partition_rows(ncell, workers);
}

Partition partition_cells(const Grid& grid, int workers) {
  Partition part = partition_cells(grid.cell_count(), workers);
  auto owner = [&](Index c) {
    return static_cast<int>(std::upper_bound(part.starts.begin(), part.starts.end(), c) -
                            part.starts.begin()) - 1;
  };
  for (Index c = 0; c < grid.cell_count(); ++c) {
    for (int a = 0; a < 3; ++a) {
      const auto n = grid.neighbor(c, static_cast<Axis>(a), +1);
      if (n && owner(*n) != owner(c)) part.boundary_faces.push_back({c, *n, a});
    }
  }
  return part;
}

namespace {
constexpr Index kChunk = 1024;
}

double dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int workers) {
  const Index n = a.size();
  const Index nchunks = (n + kChunk - 1) / kChunk;
  if (nchunks <= 1) return a.dot(b);
  std::vector<double> partial(static_cast<std::size_t>(nchunks));
#pragma omp parallel for num_threads(std::max(1, workers)) schedule(static)
  for (Index c = 0; c < nchunks; ++c) {
    const Index s = c * kChunk;
    const Index len = std::min(kChunk, n - s);
    partial[static_cast<std::size_t>(c)] = a.segment(s, len).dot(b.segment(s, len));
  }
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum;
}

double norm2(const Eigen::VectorXd& a, int workers) { return std::sqrt(dot(a, a, workers)); }

}  // namespace resim
