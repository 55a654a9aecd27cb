#ifndef RESIM_WELLS_HPP
#define RESIM_WELLS_HPP

#include <string>
#include <vector>

#include "resim/common.hpp"
#include "resim/grid.hpp"
#include "resim/pvt.hpp"

namespace resim {

enum class ConstraintKind { bhp, water_rate, oil_rate, liquid_rate, gas_rate };

/// Rates are surface volumetric (STB/day, gas Mscf/day), injection positive.
struct Constraint {
  ConstraintKind kind = ConstraintKind::bhp;
  double value = 0.0;

  bool operator==(const Constraint&) const = default;
};

enum class WellType { producer, water_injector, gas_injector };

struct Perforation {
  Index cell = 0;
  double well_index = 0.0;  // md*ft
  double depth = 0.0;       // ft
};

struct Well {
  std::string name;
  WellType type = WellType::producer;
  std::vector<Perforation> perforations;
  double ref_depth = 0.0;  // depth of the bottom hole pressure
  double radius = 0.25;
  double skin = 0.0;
  Constraint constraint;

  bool is_injector() const { return type != WellType::producer; }
};

struct ScheduleEntry {
  double start = 0.0;  // days
  std::string well;
  Constraint constraint;
};

using Schedule = std::vector<ScheduleEntry>;

/// Peaceman index of a vertical well through a cell of the given geometry.
/// Throws ConfigError if the equivalent radius does not exceed r_w.
double peaceman_wi(double dx, double dy, double dz, double kx, double ky, double r_w, double skin);

/// Peaceman equivalent radius r_e.
double peaceman_radius(double dx, double dy, double kx, double ky);

/// Vertical well perforating layers [k_top, k_bottom] (0-based) of column (i, j);
/// the reference depth is the center of the top perforation.
Well make_vertical_well(std::string name, WellType type, const Grid& grid, const RockFields& rock,
                        Index i, Index j, Index k_top, Index k_bottom, double r_w, double skin,
                        Constraint constraint);

/// Throws ConfigError if an entry names an undeclared well or times decrease for a well.
void validate_schedule(const Schedule& schedule, const std::vector<Well>& wells);

/// Activates, for every well, the latest entry with start <= t.
/// Returns true if any active constraint changed (callers restart Newton).
bool apply_schedule(const Schedule& schedule, double t, std::vector<Well>& wells);

/// Mass rates (lbm/day) into the reservoir at one perforation, per phase and per component.
template <class Scalar>
struct PerforationRates {
  Scalar water, oil, gas;               // phase mass rates
  Scalar oil_component, gas_component;  // gas_component includes dissolved gas
};

/// q = WI * rho * kr / mu * (p_h - p - rho * g * (z_h - z)), per phase. Producers
/// use the perforated cell's mobilities; injectors move only the injected phase
/// at endpoint mobility (kr = 1) with in-cell density and viscosity.
template <class Scalar>
PerforationRates<Scalar> perforation_rates(const Well& well, const Perforation& perf,
                                           const Scalar& p_h, const FluidProps<Scalar>& cell,
                                           double gravity = units::gravity) {
  const double c = units::darcy * perf.well_index;
  const double dz = well.ref_depth - perf.depth;
  PerforationRates<Scalar> q{Scalar(0.0), Scalar(0.0), Scalar(0.0), Scalar(0.0), Scalar(0.0)};
  auto drawdown = [&](const Scalar& p, const Scalar& rho) { return p_h - p - rho * gravity * dz; };
  switch (well.type) {
    case WellType::water_injector:
      q.water = c * cell.rho_w / cell.mu_w * drawdown(cell.p_w, cell.rho_w);
      break;
    case WellType::gas_injector:
      q.gas = c * cell.rho_g / cell.mu_g * drawdown(cell.p_g, cell.rho_g);
      q.gas_component = q.gas;
      break;
    case WellType::producer: {
      q.water = c * cell.rho_w * cell.kr_w / cell.mu_w * drawdown(cell.p_w, cell.rho_w);
      const Scalar oil_volume = c * cell.kr_o / cell.mu_o * drawdown(cell.p_o, cell.rho_o);
      q.oil = oil_volume * cell.rho_o;
      q.oil_component = oil_volume * cell.rho_oo;
      if (value_of(cell.rho_g) > 0.0)
        q.gas = c * cell.rho_g * cell.kr_g / cell.mu_g * drawdown(cell.p_g, cell.rho_g);
      q.gas_component = q.gas + oil_volume * cell.rho_og;
      break;
    }
  }
  return q;
}

/// Surface rate of the quantity a rate constraint controls.
template <class Scalar>
Scalar surface_rate(const PerforationRates<Scalar>& q, ConstraintKind kind, const PvtModel& m) {
  const double stb = units::ft3_per_bbl;
  switch (kind) {
    case ConstraintKind::water_rate: return q.water / (m.rho_w_ref * stb);
    case ConstraintKind::oil_rate: return q.oil_component / (m.rho_o_ref * stb);
    case ConstraintKind::liquid_rate:
      return q.water / (m.rho_w_ref * stb) + q.oil_component / (m.rho_o_ref * stb);
    case ConstraintKind::gas_rate: return q.gas_component / (m.rho_g_ref * units::ft3_per_mscf);
    case ConstraintKind::bhp: return Scalar(0.0);
  }
  return Scalar(0.0);
}

/// p_h - c for pressure control, otherwise (summed surface rate) - target.
template <class Scalar>
Scalar constraint_residual(const Constraint& con, const Scalar& p_h, const Scalar& rate_sum) {
  if (con.kind == ConstraintKind::bhp) return p_h - con.value;
  return rate_sum - con.value;
}

}  // namespace resim

#endif  // RESIM_WELLS_HPP
