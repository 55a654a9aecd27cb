#ifndef RESIM_TESTS_FIXTURES_HPP
#define RESIM_TESTS_FIXTURES_HPP

#include <random>

#include "resim/model.hpp"

namespace fixtures {

using namespace resim;

inline ReservoirModel small_model(FluidKind kind, Index nx, Index ny, Index nz, bool with_wells,
                                  std::uint64_t seed = 1) {
  Grid g(nx, ny, nz, 50.0, 40.0, 10.0, 8000.0);
  RockFields r = uniform_fields(g, 1, 1, 1, 0.2);
  std::mt19937_64 rng(seed);
  std::lognormal_distribution<double> perm(4.0, 1.0);
  std::uniform_real_distribution<double> poro(0.1, 0.3);
  for (Index c = 0; c < g.cell_count(); ++c) {
    r.kx(c) = perm(rng);
    r.ky(c) = perm(rng);
    r.kz(c) = 0.1 * perm(rng);
    r.poro(c) = poro(rng);
  }
  PvtModel pvt = kind == FluidKind::two_phase ? default_two_phase() : default_black_oil();
  if (kind == FluidKind::two_phase) {
    pvt.c_w = 3e-6;
    pvt.c_o = 1e-5;
    pvt.c_r = 1e-6;
  }
  std::vector<Well> wells;
  if (with_wells) {
    const WellType inj = kind == FluidKind::two_phase ? WellType::water_injector
                                                      : WellType::gas_injector;
    const ConstraintKind inj_rate =
        kind == FluidKind::two_phase ? ConstraintKind::water_rate : ConstraintKind::gas_rate;
    wells.push_back(make_vertical_well("INJ", inj, g, r, 0, 0, 0, nz - 1, 0.25, 0.0,
                                       {inj_rate, 500.0}));
    wells.push_back(make_vertical_well("PROD", WellType::producer, g, r, nx - 1, ny - 1, 0, nz - 1,
                                       0.25, 0.0, {ConstraintKind::bhp, 3000.0}));
    wells.push_back(make_vertical_well("PROD2", WellType::producer, g, r, nx - 1, 0, 0, 0, 0.25,
                                       1.0, {ConstraintKind::liquid_rate, -200.0}));
  }
  return ReservoirModel(g, r, pvt, wells);
}

/// Random state; black-oil cells alternate between saturated and undersaturated.
inline ReservoirState random_state(const ReservoirModel& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> p(3600.0, 4400.0), sw(0.25, 0.6), sg(0.02, 0.2);
  ReservoirState s;
  const Index n = m.grid().cell_count();
  s.cells.resize(static_cast<std::size_t>(n));
  for (Index c = 0; c < n; ++c) {
    CellState& cs = s.cells[c];
    cs.p_o = p(rng);
    cs.s_w = sw(rng);
    if (m.unknowns_per_cell() == 3) {
      cs.saturated = (c % 2) == 0;
      cs.third = cs.saturated ? sg(rng) : cs.p_o - 200.0 * (1.0 + (c % 3));
    }
  }
  s.bhp = Eigen::VectorXd::Constant(static_cast<Index>(m.wells().size()), 3500.0);
  for (std::size_t w = 0; w < m.wells().size(); ++w)
    if (m.wells()[w].is_injector()) s.bhp(static_cast<Index>(w)) = 4800.0;
  return s;
}

}  // namespace fixtures

#endif  // RESIM_TESTS_FIXTURES_HPP
