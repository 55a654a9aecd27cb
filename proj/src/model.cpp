#include "resim/model.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

namespace resim {

namespace {

template <class S>
using Terms = std::array<S, 3>;

ADScalar shifted(const ADScalar& x, int m) { return shift_slots(x, m, m); }

CellProps<double> shift_props(const CellProps<double>& p, int) { return p; }

CellProps<ADScalar> shift_props(const CellProps<ADScalar>& p, int m) {
  CellProps<ADScalar> out;
  const auto& f = p.fluid;
  auto& g = out.fluid;
  g.s_w = shifted(f.s_w, m);
  g.s_o = shifted(f.s_o, m);
  g.s_g = shifted(f.s_g, m);
  g.p_o = shifted(f.p_o, m);
  g.p_w = shifted(f.p_w, m);
  g.p_g = shifted(f.p_g, m);
  g.rho_w = shifted(f.rho_w, m);
  g.rho_oo = shifted(f.rho_oo, m);
  g.rho_og = shifted(f.rho_og, m);
  g.rho_o = shifted(f.rho_o, m);
  g.rho_g = shifted(f.rho_g, m);
  g.mu_w = shifted(f.mu_w, m);
  g.mu_o = shifted(f.mu_o, m);
  g.mu_g = shifted(f.mu_g, m);
  g.kr_w = shifted(f.kr_w, m);
  g.kr_o = shifted(f.kr_o, m);
  g.kr_g = shifted(f.kr_g, m);
  g.pcow = shifted(f.pcow, m);
  g.pcog = shifted(f.pcog, m);
  out.porosity = shifted(p.porosity, m);
  return out;
}

template <class S>
Terms<S> mass_terms(const CellProps<S>& p, double volume) {
  const auto& f = p.fluid;
  const S pv = volume * p.porosity;
  return {pv * f.s_o * f.rho_oo, pv * f.s_w * f.rho_w, pv * (f.s_o * f.rho_og + f.s_g * f.rho_g)};
}

/// Mass flux per component from a to b; the upstream side of each phase is
/// chosen by the sign of its potential difference, ties go to a.
template <class S>
Terms<S> flux_terms(const CellProps<S>& pa, const CellProps<S>& pb, double depth_a,
                    double depth_b, double trans, double g, bool gas) {
  const auto& a = pa.fluid;
  const auto& b = pb.fluid;
  const double t = units::darcy * trans;
  const double dd = g * (depth_a - depth_b);

  const S dphi_w = (a.p_w - b.p_w) - 0.5 * (a.rho_w + b.rho_w) * dd;
  const auto& wu = value_of(dphi_w) >= 0.0 ? a : b;
  const S water = t * wu.rho_w * wu.kr_w / wu.mu_w * dphi_w;

  const S dphi_o = (a.p_o - b.p_o) - 0.5 * (a.rho_o + b.rho_o) * dd;
  const auto& ou = value_of(dphi_o) >= 0.0 ? a : b;
  const S oil_volume = t * ou.kr_o / ou.mu_o * dphi_o;

  Terms<S> out{oil_volume * ou.rho_oo, water, S(0.0)};
  if (gas) {
    const S dphi_g = (a.p_g - b.p_g) - 0.5 * (a.rho_g + b.rho_g) * dd;
    const auto& gu = value_of(dphi_g) >= 0.0 ? a : b;
    out[2] = oil_volume * ou.rho_og + t * gu.rho_g * gu.kr_g / gu.mu_g * dphi_g;
  }
  return out;
}

template <class S>
Terms<S> perforation_terms(const PerforationRates<S>& q) {
  return {q.oil_component, q.water, q.gas_component};
}

bool finite(double x) { return std::isfinite(x); }

std::string nonfinite_message(const char* what, Index cell) {
  std::ostringstream msg;
  msg << what << ": non-finite value at cell " << cell;
  return msg.str();
}

}  // namespace

ReservoirModel::ReservoirModel(Grid grid, RockFields rock, PvtModel pvt, std::vector<Well> wells)
    : grid_(std::move(grid)), rock_(std::move(rock)), pvt_(std::move(pvt)), wells_(std::move(wells)) {
  const Index n = grid_.cell_count();
  if (rock_.poro.size() != n || rock_.kx.size() != n || rock_.ky.size() != n ||
      rock_.kz.size() != n)
    throw ConfigError("rock fields do not match the grid cell count");
  pvt_.validate();

  // Faces in increasing neighbor-id order: -z, -y, -x, +x, +y, +z.
  static constexpr std::array<std::pair<Axis, int>, 6> kFaces{{{Axis::z, -1},
                                                               {Axis::y, -1},
                                                               {Axis::x, -1},
                                                               {Axis::x, 1},
                                                               {Axis::y, 1},
                                                               {Axis::z, 1}}};
  face_nbr_.assign(static_cast<std::size_t>(n) * 6, -1);
  face_trans_.assign(static_cast<std::size_t>(n) * 6, 0.0);
  face_block_.assign(static_cast<std::size_t>(n) * 6, -1);
  diag_block_.assign(static_cast<std::size_t>(n), -1);

  std::vector<Index> row_ptr(static_cast<std::size_t>(n) + 1, 0);
  std::vector<Index> cols;
  cols.reserve(static_cast<std::size_t>(n) * 7);
  for (Index c = 0; c < n; ++c) {
    for (int f = 0; f < 6; ++f) {
      if (f == 3) cols.push_back(c);
      const auto nb = grid_.neighbor(c, kFaces[f].first, kFaces[f].second);
      if (!nb) continue;
      face_nbr_[c * 6 + f] = *nb;
      face_trans_[c * 6 + f] = geometric_transmissibility(grid_, rock_, c, *nb, kFaces[f].first);
      cols.push_back(*nb);
    }
    row_ptr[c + 1] = static_cast<Index>(cols.size());
  }

  struct Triple {
    Index cell, well, perf;
  };
  std::vector<Triple> perfs;
  for (std::size_t w = 0; w < wells_.size(); ++w) {
    if (wells_[w].perforations.empty())
      throw ConfigError("well " + wells_[w].name + " has no perforations");
    for (std::size_t k = 0; k < wells_[w].perforations.size(); ++k) {
      const Index cell = wells_[w].perforations[k].cell;
      if (cell < 0 || cell >= n)
        throw ConfigError("well " + wells_[w].name + " perforates a cell outside the grid");
      perfs.push_back({cell, static_cast<Index>(w), static_cast<Index>(k)});
    }
  }
  std::sort(perfs.begin(), perfs.end(), [](const Triple& a, const Triple& b) {
    return a.cell != b.cell ? a.cell < b.cell : a.well < b.well;
  });
  std::vector<BlockMatrix::Coupling> couplings;
  cell_perf_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t p = 0; p < perfs.size(); ++p) {
    if (p > 0 && perfs[p].cell == perfs[p - 1].cell && perfs[p].well == perfs[p - 1].well)
      throw ConfigError("well " + wells_[perfs[p].well].name + " perforates a cell twice");
    couplings.push_back({perfs[p].cell, perfs[p].well});
    cell_perfs_.push_back({perfs[p].well, perfs[p].perf, static_cast<Index>(p)});
    ++cell_perf_ptr_[perfs[p].cell + 1];
  }
  for (Index c = 0; c < n; ++c) cell_perf_ptr_[c + 1] += cell_perf_ptr_[c];

  pattern_ = BlockMatrix(unknowns_per_cell(), n, std::move(row_ptr), std::move(cols),
                         static_cast<Index>(wells_.size()), std::move(couplings));
  for (Index c = 0; c < n; ++c) {
    diag_block_[c] = pattern_.diag_position(c);
    for (int f = 0; f < 6; ++f)
      if (face_nbr_[c * 6 + f] >= 0) face_block_[c * 6 + f] = pattern_.find(c, face_nbr_[c * 6 + f]);
  }
}

Index ReservoirModel::unknown_count() const {
  return grid_.cell_count() * unknowns_per_cell() + static_cast<Index>(wells_.size());
}

double ReservoirModel::porosity(Index cell, double p_o) const {
  return rock_.poro(cell) * (1.0 + pvt_.c_r * (p_o - pvt_.p_ref));
}

CellProps<double> ReservoirModel::cell_props(Index cell, const CellState& s) const {
  return {evaluate_cell_fluid(pvt_, s.p_o, s.s_w, s.third, s.saturated), porosity(cell, s.p_o)};
}

template <class S>
std::vector<CellProps<S>> ReservoirModel::all_props(const ReservoirState& s,
                                                    const Partition& part) const {
  std::vector<CellProps<S>> props(s.cells.size());
  const bool three = unknowns_per_cell() == 3;
  for_each_range(part, [&](int, Index begin, Index end) {
    for (Index c = begin; c < end; ++c) {
      const CellState& cs = s.cells[c];
      if constexpr (std::is_same_v<S, double>) {
        props[c] = cell_props(c, cs);
      } else {
        const ADScalar p = make_variable(cs.p_o, kPressure);
        const ADScalar sw = make_variable(cs.s_w, kWaterSaturation);
        const ADScalar third = three ? make_variable(cs.third, kThird) : ADScalar(cs.third);
        props[c].fluid = evaluate_cell_fluid(pvt_, p, sw, third, cs.saturated);
        props[c].porosity = rock_.poro(c) * (1.0 + pvt_.c_r * (p - pvt_.p_ref));
      }
    }
  });
  return props;
}

Eigen::VectorXd ReservoirModel::old_masses(const ReservoirState& old, const Partition& part) const {
  const int m = unknowns_per_cell();
  const double v = grid_.cell_volume();
  Eigen::VectorXd out(grid_.cell_count() * m);
  for_each_range(part, [&](int, Index begin, Index end) {
    for (Index c = begin; c < end; ++c) {
      const Terms<double> t = mass_terms(cell_props(c, old.cells[c]), v);
      for (int e = 0; e < m; ++e) out(c * m + e) = t[e];
    }
  });
  return out;
}

template <class S, class Sink>
void ReservoirModel::cell_equations(Index c, const std::vector<CellProps<S>>& props,
                                    const std::vector<S>& bhp, const Eigen::VectorXd& old_mass,
                                    double dt, Sink&& sink) const {
  const int m = unknowns_per_cell();
  const bool gas = m == 3;
  const CellProps<S>& own = props[c];

  Terms<S> acc = mass_terms(own, grid_.cell_volume());
  for (int e = 0; e < m; ++e) acc[e] = (acc[e] - old_mass(c * m + e)) / dt;
  sink(acc, Index{-1}, Index{-1});

  const double depth_c = grid_.cell_depth(c);
  for (int f = 0; f < 6; ++f) {
    const Index nb = face_nbr_[c * 6 + f];
    if (nb < 0) continue;
    const CellProps<S> other = shift_props(props[nb], m);
    const double depth_n = grid_.cell_depth(nb);
    const double t = face_trans_[c * 6 + f];
    Terms<S> flux;
    if (c < nb) {
      flux = flux_terms(own, other, depth_c, depth_n, t, gravity_, gas);
    } else {
      flux = flux_terms(other, own, depth_n, depth_c, t, gravity_, gas);
      for (int e = 0; e < 3; ++e) flux[e] = -flux[e];
    }
    sink(flux, face_block_[c * 6 + f], Index{-1});
  }

  for (Index p = cell_perf_ptr_[c]; p < cell_perf_ptr_[c + 1]; ++p) {
    const CellPerf& cp = cell_perfs_[p];
    const Well& w = wells_[cp.well];
    const auto q = resim::perforation_rates(w, w.perforations[cp.perf], bhp[cp.well], own.fluid, gravity_);
    Terms<S> src = perforation_terms(q);
    for (int e = 0; e < 3; ++e) src[e] = -src[e];
    sink(src, Index{-1}, cp.coupling);
  }
}

Eigen::VectorXd ReservoirModel::cell_mass(Index cell, const CellState& s) const {
  const int m = unknowns_per_cell();
  const Terms<double> t = mass_terms(cell_props(cell, s), grid_.cell_volume());
  Eigen::VectorXd out(m);
  for (int e = 0; e < m; ++e) out(e) = t[e];
  return out;
}

Eigen::VectorXd ReservoirModel::accumulation(Index cell, const ReservoirState& now,
                                             const ReservoirState& old, double dt) const {
  return (cell_mass(cell, now.cells[cell]) - cell_mass(cell, old.cells[cell])) / dt;
}

Eigen::VectorXd ReservoirModel::face_flux(Index a, Index b, Axis axis,
                                          const ReservoirState& state) const {
  const int m = unknowns_per_cell();
  const double t = geometric_transmissibility(grid_, rock_, a, b, axis);
  const Index lo = std::min(a, b);
  const Index hi = std::max(a, b);
  const Terms<double> f =
      flux_terms(cell_props(lo, state.cells[lo]), cell_props(hi, state.cells[hi]),
                 grid_.cell_depth(lo), grid_.cell_depth(hi), t, gravity_, m == 3);
  Eigen::VectorXd out(m);
  for (int e = 0; e < m; ++e) out(e) = a == lo ? f[e] : -f[e];
  return out;
}

PerforationRates<double> ReservoirModel::perforation_rates(Index well, Index perf,
                                                           const ReservoirState& state) const {
  const Well& w = wells_[well];
  const Perforation& p = w.perforations[perf];
  return resim::perforation_rates(w, p, state.bhp(well), cell_props(p.cell, state.cells[p.cell]).fluid,
                                  gravity_);
}

double ReservoirModel::perforation_rate(Index well, Index perf, Phase phase,
                                        const ReservoirState& state) const {
  const auto q = perforation_rates(well, perf, state);
  switch (phase) {
    case Phase::water: return q.water;
    case Phase::oil: return q.oil;
    case Phase::gas: return q.gas;
  }
  return 0.0;
}

double ReservoirModel::well_surface_rate(Index well, ConstraintKind kind,
                                         const ReservoirState& state) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < wells_[well].perforations.size(); ++k)
    sum += surface_rate(perforation_rates(well, static_cast<Index>(k), state), kind, pvt_);
  return sum;
}

double ReservoirModel::constraint_residual(Index well, const ReservoirState& state) const {
  const Constraint& con = wells_[well].constraint;
  return resim::constraint_residual(con, state.bhp(well),
                                    well_surface_rate(well, con.kind, state));
}

Eigen::VectorXd ReservoirModel::assemble_residual(const ReservoirState& now,
                                                  const ReservoirState& old, double dt,
                                                  const Partition& part) const {
  const int m = unknowns_per_cell();
  const Index ncell = grid_.cell_count();
  const auto props = all_props<double>(now, part);
  const Eigen::VectorXd old_mass = old_masses(old, part);
  std::vector<double> bhp(now.bhp.data(), now.bhp.data() + now.bhp.size());
  Eigen::VectorXd r = Eigen::VectorXd::Zero(unknown_count());
  std::atomic<Index> bad{std::numeric_limits<Index>::max()};

  for_each_range(part, [&](int, Index begin, Index end) {
    for (Index c = begin; c < end; ++c) {
      cell_equations(c, props, bhp, old_mass, dt, [&](const Terms<double>& t, Index, Index) {
        for (int e = 0; e < m; ++e) r(c * m + e) += t[e];
      });
      for (int e = 0; e < m; ++e) {
        if (!finite(r(c * m + e))) {
          Index cur = bad.load();
          while (c < cur && !bad.compare_exchange_weak(cur, c)) {
          }
          break;
        }
      }
    }
  });
  if (bad.load() != std::numeric_limits<Index>::max())
    throw AssemblyError(nonfinite_message("residual", bad.load()), bad.load());

  for (std::size_t w = 0; w < wells_.size(); ++w) {
    const Index row = ncell * m + static_cast<Index>(w);
    r(row) = constraint_residual(static_cast<Index>(w), now);
    if (!finite(r(row))) {
      const Index cell = wells_[w].perforations.front().cell;
      throw AssemblyError(nonfinite_message("well residual", cell), cell);
    }
  }
  return r;
}

BlockMatrix ReservoirModel::assemble_jacobian(const ReservoirState& now, const ReservoirState& old,
                                              double dt, const Partition& part) const {
  const int m = unknowns_per_cell();
  const Index ncell = grid_.cell_count();
  const auto props = all_props<ADScalar>(now, part);
  const Eigen::VectorXd old_mass = old_masses(old, part);
  std::vector<ADScalar> bhp;
  bhp.reserve(wells_.size());
  for (Index w = 0; w < now.bhp.size(); ++w) bhp.push_back(make_variable(now.bhp(w), kWellSlot));

  BlockMatrix a = pattern_;
  Eigen::VectorXd& rhs = a.rhs();
  std::atomic<Index> bad{std::numeric_limits<Index>::max()};

  for_each_range(part, [&](int, Index begin, Index end) {
    for (Index c = begin; c < end; ++c) {
      BlockMap diag = a.block(diag_block_[c]);
      cell_equations(c, props, bhp, old_mass, dt,
                     [&](const Terms<ADScalar>& t, Index block, Index coupling) {
                       for (int e = 0; e < m; ++e) {
                         const Derivatives& d = t[e].derivatives();
                         rhs(c * m + e) -= t[e].value();
                         if (d.size() == 0) continue;
                         for (int u = 0; u < m; ++u) diag(e, u) += d(u);
                         if (block >= 0) {
                           BlockMap off = a.block(block);
                           for (int u = 0; u < m; ++u) off(e, u) += d(m + u);
                         }
                         if (coupling >= 0) a.cell_to_well(coupling)(e) += d(kWellSlot);
                       }
                     });
      bool ok = true;
      for (int e = 0; e < m && ok; ++e) {
        ok = finite(rhs(c * m + e));
        for (int u = 0; u < m && ok; ++u) ok = finite(diag(e, u));
      }
      if (!ok) {
        Index cur = bad.load();
        while (c < cur && !bad.compare_exchange_weak(cur, c)) {
        }
      }
    }
  });
  if (bad.load() != std::numeric_limits<Index>::max())
    throw AssemblyError(nonfinite_message("jacobian", bad.load()), bad.load());

  for (std::size_t w = 0; w < wells_.size(); ++w) {
    const Well& well = wells_[w];
    const Index row = ncell * m + static_cast<Index>(w);
    const auto& ids = a.well_couplings(static_cast<Index>(w));
    ADScalar value;
    if (well.constraint.kind == ConstraintKind::bhp) {
      value = bhp[w] - well.constraint.value;
      a.well_diag(static_cast<Index>(w)) = 1.0;
    } else {
      double ww = 0.0;
      double sum = 0.0;
      for (const Index p : ids) {
        const Index cell = a.couplings()[p].cell;
        const auto it = std::find_if(well.perforations.begin(), well.perforations.end(),
                                     [&](const Perforation& pf) { return pf.cell == cell; });
        const ADScalar q = surface_rate(
            resim::perforation_rates(well, *it, bhp[w], props[cell].fluid, gravity_),
            well.constraint.kind, pvt_);
        sum += q.value();
        if (q.derivatives().size() == 0) continue;
        for (int u = 0; u < m; ++u) a.well_to_cell(p)(u) = q.derivatives()(u);
        ww += q.derivatives()(kWellSlot);
      }
      value = ADScalar(sum - well.constraint.value);
      a.well_diag(static_cast<Index>(w)) = ww;
    }
    rhs(row) = -value.value();
    if (!finite(rhs(row)) || !finite(a.well_diag(static_cast<Index>(w)))) {
      const Index cell = well.perforations.front().cell;
      throw AssemblyError(nonfinite_message("well jacobian", cell), cell);
    }
  }
  return a;
}

Eigen::VectorXd ReservoirModel::component_mass(const ReservoirState& state) const {
  const int m = unknowns_per_cell();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(m);
  for (Index c = 0; c < grid_.cell_count(); ++c) total += cell_mass(c, state.cells[c]);
  return total;
}

Eigen::VectorXd ReservoirModel::well_mass_rates(const ReservoirState& state) const {
  const int m = unknowns_per_cell();
  Eigen::VectorXd total = Eigen::VectorXd::Zero(m);
  for (std::size_t w = 0; w < wells_.size(); ++w) {
    for (std::size_t k = 0; k < wells_[w].perforations.size(); ++k) {
      const Terms<double> t =
          perforation_terms(perforation_rates(static_cast<Index>(w), static_cast<Index>(k), state));
      for (int e = 0; e < m; ++e) total(e) += t[e];
    }
  }
  return total;
}

Eigen::VectorXd ReservoirModel::unknowns(const ReservoirState& state) const {
  Eigen::VectorXd x(unknown_count());
  for (Index i = 0; i < x.size(); ++i) x(i) = unknown(state, i);
  return x;
}

double ReservoirModel::unknown(const ReservoirState& state, Index i) const {
  const int m = unknowns_per_cell();
  const Index nc = grid_.cell_count() * m;
  if (i >= nc) return state.bhp(i - nc);
  const CellState& c = state.cells[i / m];
  switch (i % m) {
    case kPressure: return c.p_o;
    case kWaterSaturation: return c.s_w;
    default: return c.third;
  }
}

void ReservoirModel::set_unknown(ReservoirState& state, Index i, double value) const {
  const int m = unknowns_per_cell();
  const Index nc = grid_.cell_count() * m;
  if (i >= nc) {
    state.bhp(i - nc) = value;
    return;
  }
  CellState& c = state.cells[i / m];
  switch (i % m) {
    case kPressure: c.p_o = value; break;
    case kWaterSaturation: c.s_w = value; break;
    default: c.third = value; break;
  }
}

}  // namespace resim
