#ifndef RESIM_GRID_HPP
#define RESIM_GRID_HPP

#include <array>
#include <iosfwd>
#include <optional>

#include <Eigen/Core>

#include "resim/common.hpp"

namespace resim {

enum class Axis : int { x = 0, y = 1, z = 2 };

struct CellIjk {
  Index i = 0;
  Index j = 0;
  Index k = 0;
  bool operator==(const CellIjk&) const = default;
};

/// Uniform structured Cartesian grid, natural (i-fastest) ordering.
/// Depth is measured positive downward from `depth_top` at the top face.
class Grid {
 public:
  Grid(Index nx, Index ny, Index nz, double dx, double dy, double dz, double depth_top = 0.0);

  Index nx() const { return dims_[0]; }
  Index ny() const { return dims_[1]; }
  Index nz() const { return dims_[2]; }
  Index dim(Axis a) const { return dims_[static_cast<int>(a)]; }
  double spacing(Axis a) const { return spacing_[static_cast<int>(a)]; }
  double dx() const { return spacing_[0]; }
  double dy() const { return spacing_[1]; }
  double dz() const { return spacing_[2]; }
  double depth_top() const { return depth_top_; }
  Index cell_count() const { return dims_[0] * dims_[1] * dims_[2]; }

  /// Throws std::out_of_range for indices outside the grid.
  Index cell_index(Index i, Index j, Index k) const;
  CellIjk ijk(Index cell) const;

  double cell_volume() const { return spacing_[0] * spacing_[1] * spacing_[2]; }
  double face_area(Axis a) const;
  double cell_depth(Index cell) const;

  /// Neighbor along `a` in direction +1 or -1, if inside the grid.
  std::optional<Index> neighbor(Index cell, Axis a, int direction) const;

  /// Returns the axis along which a and b are adjacent, if they are.
  std::optional<Axis> adjacency(Index a, Index b) const;

 private:
  std::array<Index, 3> dims_;
  std::array<double, 3> spacing_;
  double depth_top_;
};

struct RockFields {
  Eigen::VectorXd kx, ky, kz;  // md
  Eigen::VectorXd poro;        // fraction

  const Eigen::VectorXd& perm(Axis a) const;
};

inline constexpr double kMinPermeability = 1e-8;  // md
inline constexpr double kMinPorosity = 1e-6;

RockFields uniform_fields(const Grid& grid, double kx, double ky, double kz, double poro);

/// Clamps permeability below at kMinPermeability and porosity to [kMinPorosity, 1].
void clamp_fields(RockFields& rock);

/// 2 / (1/T_a + 1/T_b) with T = K * area / spacing.
double harmonic_transmissibility(double k_a, double k_b, double area, double spacing);

/// Geometric half-face factor K*A/dd between axis neighbors (md*ft).
/// Throws std::invalid_argument if the cells are not adjacent along `axis`.
double geometric_transmissibility(const Grid& grid, const RockFields& rock, Index a, Index b,
                                  Axis axis);

/// Reads the standard SPE10 ASCII layout: the permeability stream holds kx, ky
/// and kz blocks of ncell values each, the porosity stream ncell values, all
/// i-fastest. Clamping per clamp_fields is applied.
RockFields load_spe10_fields(std::istream& perm, std::istream& poro, const Grid& grid);

/// Layers [k_first, k_last] (0-based) of fields defined on `full`.
RockFields extract_layers(const RockFields& fields, const Grid& full, Index k_first, Index k_last);

}  // namespace resim

#endif  // RESIM_GRID_HPP
