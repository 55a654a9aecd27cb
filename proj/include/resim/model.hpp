#ifndef RESIM_MODEL_HPP
#define RESIM_MODEL_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "resim/block_matrix.hpp"
#include "resim/grid.hpp"
#include "resim/parallel.hpp"
#include "resim/pvt.hpp"
#include "resim/wells.hpp"

namespace resim {

/// Equation (component) order within a cell block.
enum Component : int { kOil = 0, kWater = 1, kGas = 2 };
/// Unknown order within a cell block.
enum CellUnknown : int { kPressure = 0, kWaterSaturation = 1, kThird = 2 };

/// Per-cell unknowns. `third` is s_g when saturated and p_b otherwise; it is
/// unused by the two-phase model.
struct CellState {
  double p_o = 0.0;
  double s_w = 0.0;
  double third = 0.0;
  bool saturated = false;

  double s_g() const { return saturated ? third : 0.0; }
  double p_b() const { return saturated ? p_o : third; }
};

struct ReservoirState {
  std::vector<CellState> cells;
  Eigen::VectorXd bhp;  // one per well
  double time = 0.0;    // days
};

template <class Scalar>
struct CellProps {
  FluidProps<Scalar> fluid;
  Scalar porosity;
};

/// Fully implicit discretization: backward Euler accumulation, two-point
/// fluxes with per-phase potential upwinding, Peaceman wells and one
/// constraint row per well. Components are masses (lbm), rates lbm/day.
///
/// Unknown vector: cell c's block at [c*m, c*m + m), then one bottom hole
/// pressure per well.
class ReservoirModel {
 public:
  ReservoirModel(Grid grid, RockFields rock, PvtModel pvt, std::vector<Well> wells = {});

  const Grid& grid() const { return grid_; }
  const RockFields& rock() const { return rock_; }
  const PvtModel& pvt() const { return pvt_; }
  const std::vector<Well>& wells() const { return wells_; }
  std::vector<Well>& wells() { return wells_; }

  double gravity() const { return gravity_; }
  void set_gravity(double g) { gravity_ = g; }

  int unknowns_per_cell() const { return pvt_.components(); }
  Index unknown_count() const;

  double porosity(Index cell, double p_o) const;
  CellProps<double> cell_props(Index cell, const CellState& s) const;

  /// Component masses in place of one cell.
  Eigen::VectorXd cell_mass(Index cell, const CellState& s) const;
  /// [mass(now) - mass(old)] / dt per component.
  Eigen::VectorXd accumulation(Index cell, const ReservoirState& now, const ReservoirState& old,
                               double dt) const;
  /// Mass rate per component flowing from a to b.
  Eigen::VectorXd face_flux(Index a, Index b, Axis axis, const ReservoirState& state) const;

  PerforationRates<double> perforation_rates(Index well, Index perf,
                                             const ReservoirState& state) const;
  /// Phase mass rate at one perforation, injection positive.
  double perforation_rate(Index well, Index perf, Phase phase, const ReservoirState& state) const;
  /// Summed surface rate of a well (STB/day or Mscf/day) for the given quantity.
  double well_surface_rate(Index well, ConstraintKind kind, const ReservoirState& state) const;
  double constraint_residual(Index well, const ReservoirState& state) const;

  /// F(x): accumulation + outflow - well sources per cell, then constraint rows.
  /// Throws AssemblyError naming the first cell with a non-finite entry.
  Eigen::VectorXd assemble_residual(const ReservoirState& now, const ReservoirState& old,
                                    double dt, const Partition& part) const;
  /// Analytic Jacobian dF/dx with rhs() = -F(x).
  BlockMatrix assemble_jacobian(const ReservoirState& now, const ReservoirState& old, double dt,
                                const Partition& part) const;

  Eigen::VectorXd component_mass(const ReservoirState& state) const;
  /// Net mass rate injected by all wells, per component.
  Eigen::VectorXd well_mass_rates(const ReservoirState& state) const;

  Eigen::VectorXd unknowns(const ReservoirState& state) const;
  double unknown(const ReservoirState& state, Index i) const;
  void set_unknown(ReservoirState& state, Index i, double value) const;

 private:
  template <class Scalar, class Sink>
  void cell_equations(Index c, const std::vector<CellProps<Scalar>>& props,
                      const std::vector<Scalar>& bhp, const Eigen::VectorXd& old_mass, double dt,
                      Sink&& sink) const;
  template <class Scalar>
  std::vector<CellProps<Scalar>> all_props(const ReservoirState& s, const Partition& part) const;
  Eigen::VectorXd old_masses(const ReservoirState& old, const Partition& part) const;

  Grid grid_;
  RockFields rock_;
  PvtModel pvt_;
  std::vector<Well> wells_;
  double gravity_ = units::gravity;

  // Per cell, 6 faces (-x, +x, -y, +y, -z, +z).
  std::vector<Index> face_nbr_;
  std::vector<double> face_trans_;
  std::vector<Index> face_block_;
  std::vector<Index> diag_block_;
  // Perforations per cell: (well, perf index, coupling id).
  struct CellPerf {
    Index well;
    Index perf;
    Index coupling;
  };
  std::vector<Index> cell_perf_ptr_;
  std::vector<CellPerf> cell_perfs_;
  BlockMatrix pattern_;
};

}  // namespace resim

#endif  // RESIM_MODEL_HPP
