#include "resim/pvt.hpp"

#include <algorithm>
#include <atomic>
#include <initializer_list>

namespace resim {

namespace {
std::atomic<std::size_t> g_clamps{0};
}

std::size_t clamp_warning_count() { return g_clamps.load(std::memory_order_relaxed); }
void reset_clamp_warnings() { g_clamps.store(0, std::memory_order_relaxed); }
void note_clamp() { g_clamps.fetch_add(1, std::memory_order_relaxed); }

Table1D::Table1D(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw ConfigError("table: abscissa/ordinate size mismatch");
  if (x_.empty()) throw ConfigError("table: no samples");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1])) throw ConfigError("table: abscissae must strictly increase");
}

std::size_t Table1D::segment(double xv) const {
  const auto it = std::upper_bound(x_.begin(), x_.end(), xv);
  return static_cast<std::size_t>(it - x_.begin());
}

void CoreyTwoPhase::validate() const {
  if (s_wc < 0.0 || s_or < 0.0 || s_wc + s_or >= 1.0)
    throw ConfigError("corey: require s_wc, s_or >= 0 and s_wc + s_or < 1");
  if (!(n_w > 0.0) || !(n_o > 0.0)) throw ConfigError("corey: exponents must be positive");
}

namespace {

void require_positive(const Table1D& t, const char* name) {
  for (double v : t.y())
    if (!(v > 0.0)) throw ConfigError(std::string(name) + ": values must be positive");
}

Table1D column_table(std::initializer_list<std::initializer_list<double>> rows, int col) {
  std::vector<double> x, y;
  for (const auto& r : rows) {
    x.push_back(*r.begin());
    y.push_back(*(r.begin() + col));
  }
  return {x, y};
}

}  // namespace

void PvtModel::validate() const {
  if (c_w < 0.0 || c_o < 0.0 || c_r < 0.0 || c_mu < 0.0)
    throw ConfigError("pvt: compressibilities must be nonnegative");
  if (!(mu_w > 0.0)) throw ConfigError("pvt: water viscosity must be positive");
  if (!(rho_w_ref > 0.0) || !(rho_o_ref > 0.0)) throw ConfigError("pvt: densities must be positive");
  if (kind == FluidKind::two_phase) {
    if (!(mu_o > 0.0)) throw ConfigError("pvt: oil viscosity must be positive");
    corey.validate();
    return;
  }
  if (!(rho_g_ref > 0.0)) throw ConfigError("pvt: gas density must be positive");
  for (const Table1D* t : {&rs, &bo, &mu_o_sat, &bg, &mu_g, &relperm.krw, &relperm.krow,
                           &relperm.krg, &relperm.krog})
    if (t->empty()) throw ConfigError("pvt: black-oil model is missing a table");
  for (std::size_t i = 1; i < rs.y().size(); ++i)
    if (rs.y()[i] < rs.y()[i - 1]) throw ConfigError("pvt: R_s must be nondecreasing in p_b");
  require_positive(bo, "B_o");
  require_positive(bg, "B_g");
  require_positive(mu_o_sat, "mu_o");
  require_positive(mu_g, "mu_g");
  if (!(relperm.krow(relperm.s_wc()) > 0.0)) throw ConfigError("relperm: K_row(s_wc) must be positive");
}

PvtModel default_two_phase() {
  PvtModel m;
  m.kind = FluidKind::two_phase;
  return m;
}

PvtModel default_black_oil() {
  PvtModel m;
  m.kind = FluidKind::black_oil;
  m.rho_w_ref = 62.4;
  m.rho_o_ref = 49.1;
  m.rho_g_ref = 0.06054;
  m.c_w = 3e-6;
  m.c_o = 1.37e-5;
  m.c_mu = 9.0e-5;
  m.c_r = 3e-6;
  m.p_ref = 14.7;
  m.mu_w = 0.31;
  const auto pvto = {
      std::initializer_list<double>{14.7, 0.001, 1.062, 1.04},
      {264.7, 0.0905, 1.15, 0.975},  {514.7, 0.18, 1.207, 0.91},  {1014.7, 0.371, 1.295, 0.83},
      {2014.7, 0.636, 1.435, 0.695}, {2514.7, 0.775, 1.5, 0.641}, {3014.7, 0.93, 1.565, 0.594},
      {4014.7, 1.270, 1.695, 0.51},  {5014.7, 1.618, 1.827, 0.449}, {9014.7, 2.984, 2.357, 0.203}};
  m.rs = column_table(pvto, 1);
  m.bo = column_table(pvto, 2);
  m.mu_o_sat = column_table(pvto, 3);
  const auto pvdg = {
      std::initializer_list<double>{14.7, 166.666, 0.008},
      {264.7, 12.093, 0.0096}, {514.7, 6.274, 0.0112}, {1014.7, 3.197, 0.014},
      {2014.7, 1.614, 0.0189}, {2514.7, 1.294, 0.0208}, {3014.7, 1.080, 0.0228},
      {4014.7, 0.811, 0.0268}, {5014.7, 0.649, 0.0309}, {9014.7, 0.386, 0.047}};
  m.bg = column_table(pvdg, 1);
  m.mu_g = column_table(pvdg, 2);
  const auto swof = {
      std::initializer_list<double>{0.12, 0.0, 1.0},
      {0.2, 0.005, 0.8}, {0.3, 0.02, 0.55}, {0.4, 0.05, 0.35}, {0.5, 0.1, 0.2},
      {0.6, 0.175, 0.1}, {0.7, 0.28, 0.04}, {0.8, 0.42, 0.01}, {0.9, 0.6, 0.0}, {1.0, 1.0, 0.0}};
  m.relperm.krw = column_table(swof, 1);
  m.relperm.krow = column_table(swof, 2);
  const auto sgof = {
      std::initializer_list<double>{0.0, 0.0, 1.0},
      {0.001, 0.0, 1.0},   {0.02, 0.0, 0.997}, {0.05, 0.005, 0.98}, {0.12, 0.025, 0.7},
      {0.2, 0.075, 0.35},  {0.25, 0.125, 0.2}, {0.3, 0.19, 0.09},   {0.4, 0.41, 0.021},
      {0.45, 0.6, 0.01},   {0.5, 0.72, 0.001}, {0.6, 0.87, 0.0001}, {0.7, 0.94, 0.0},
      {0.85, 0.98, 0.0},   {1.0, 1.0, 0.0}};
  m.relperm.krg = column_table(sgof, 1);
  m.relperm.krog = column_table(sgof, 2);
  m.corey.s_wc = 0.12;
  m.corey.s_or = 0.1;
  return m;
}

double phase_density(Phase phase, double p_o, double p_b, double s_w, double s_g,
                     const PvtModel& m) {
  const FluidProps<double> f = evaluate_fluid(m, p_o, s_w, s_g, p_b);
  switch (phase) {
    case Phase::water: return f.rho_w;
    case Phase::oil: return f.rho_o;
    case Phase::gas: return f.rho_g;
  }
  return 0.0;
}

FluidProps<ADScalar> property_derivatives(double p_o, double s_w, double third, bool saturated,
                                          const PvtModel& m) {
  return evaluate_cell_fluid(m, make_variable(p_o, 0), make_variable(s_w, 1),
                             make_variable(third, 2), saturated);
}

}  // namespace resim
