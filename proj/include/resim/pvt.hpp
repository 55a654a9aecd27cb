#ifndef RESIM_PVT_HPP
#define RESIM_PVT_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "resim/common.hpp"

namespace resim {

/// Number of table lookups clamped at a table end since the last reset.
std::size_t clamp_warning_count();
void reset_clamp_warnings();
void note_clamp();

/// Piecewise-linear table with flat extension beyond both ends.
/// An empty table evaluates to zero (used for absent capillary pressure).
class Table1D {
 public:
  Table1D() = default;
  /// Throws ConfigError unless sizes match and abscissae strictly increase.
  Table1D(std::vector<double> x, std::vector<double> y);

  bool empty() const { return x_.empty(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

  template <class Scalar>
  Scalar operator()(const Scalar& v) const {
    if (x_.empty()) return Scalar(0.0);
    const double xv = value_of(v);
    if (xv <= x_.front()) {
      if (xv < x_.front()) note_clamp();
      return Scalar(y_.front());
    }
    if (xv >= x_.back()) {
      if (xv > x_.back()) note_clamp();
      return Scalar(y_.back());
    }
    const std::size_t hi = segment(xv);
    const double slope = (y_[hi] - y_[hi - 1]) / (x_[hi] - x_[hi - 1]);
    return y_[hi - 1] + slope * (v - x_[hi - 1]);
  }

 private:
  std::size_t segment(double xv) const;

  std::vector<double> x_;
  std::vector<double> y_;
};

struct CoreyTwoPhase {
  double s_wc = 0.2;
  double s_or = 0.2;
  double n_w = 2.0;
  double n_o = 2.0;

  void validate() const;
};

template <class Scalar>
Scalar krw(const Scalar& s_w, const CoreyTwoPhase& m) {
  using std::pow;
  if (value_of(s_w) <= m.s_wc) return Scalar(0.0);
  if (value_of(s_w) >= 1.0 - m.s_or) return Scalar(1.0);
  return pow((s_w - m.s_wc) / (1.0 - m.s_wc - m.s_or), m.n_w);
}

template <class Scalar>
Scalar kro_two_phase(const Scalar& s_w, const CoreyTwoPhase& m) {
  using std::pow;
  if (value_of(s_w) >= 1.0 - m.s_or) return Scalar(0.0);
  if (value_of(s_w) <= m.s_wc) return Scalar(1.0);
  return pow((1.0 - m.s_or - s_w) / (1.0 - m.s_wc - m.s_or), m.n_o);
}

/// Water-oil (vs s_w) and gas-oil (vs s_g) relative permeability tables.
struct RelPermTables {
  Table1D krw, krow;
  Table1D krg, krog;

  double s_wc() const { return krw.x().front(); }
};

/// Stone II three-phase oil relative permeability, normalized by K_row(s_wc).
template <class Scalar>
Scalar kro_stone2(const Scalar& s_w, const Scalar& s_g, const RelPermTables& t) {
  const double krocw = t.krow(t.s_wc());
  const Scalar k_rw = t.krw(s_w);
  const Scalar k_rg = t.krg(s_g);
  const Scalar k_row = t.krow(s_w);
  const Scalar k_rog = t.krog(s_g);
  const Scalar kro = krocw * ((k_row / krocw + k_rw) * (k_rog / krocw + k_rg) - k_rw - k_rg);
  if (value_of(kro) < 0.0) return Scalar(0.0);
  return kro;
}

enum class FluidKind { two_phase, black_oil };
enum class Phase { water, oil, gas };

/// Fluid and rock-fluid data. Two-phase runs use the Corey curves and a
/// dead oil with constant compressibility; black-oil runs use the tables.
struct PvtModel {
  FluidKind kind = FluidKind::two_phase;
  double rho_w_ref = 62.4;   // lbm/ft^3
  double rho_o_ref = 53.0;
  double rho_g_ref = 0.0458;
  double c_w = 0.0;          // 1/psi
  double c_o = 0.0;          // dead-oil or undersaturated-oil compressibility
  double c_r = 0.0;
  double c_mu = 0.0;         // undersaturated oil viscosibility
  double p_ref = 14.7;       // psi
  double mu_w = 0.3;         // cp
  double mu_o = 3.0;         // two-phase only
  CoreyTwoPhase corey;
  Table1D pcow;              // vs s_w
  Table1D pcog;              // vs s_g
  Table1D rs;                // Mscf/STB vs p_b
  Table1D bo;                // saturated rb/STB vs p_b
  Table1D mu_o_sat;          // cp vs p_b
  Table1D bg;                // rb/Mscf vs p_g
  Table1D mu_g;              // cp vs p_g
  RelPermTables relperm;

  int components() const { return kind == FluidKind::two_phase ? 2 : 3; }
  /// Throws ConfigError on a violated property invariant.
  void validate() const;
};

PvtModel default_two_phase();
/// SPE1-like black-oil tables.
PvtModel default_black_oil();

template <class Scalar>
struct FluidProps {
  Scalar s_w, s_o, s_g;
  Scalar p_o, p_w, p_g;
  Scalar rho_w;
  Scalar rho_oo, rho_og, rho_o;  // oil-component, dissolved-gas, and oil-phase density
  Scalar rho_g;
  Scalar mu_w, mu_o, mu_g;
  Scalar kr_w, kr_o, kr_g;
  Scalar pcow, pcog;
};

/// Evaluates every phase property at (p_o, s_w, s_g, p_b). For two-phase
/// models s_g and p_b are ignored.
template <class Scalar>
FluidProps<Scalar> evaluate_fluid(const PvtModel& m, const Scalar& p_o, const Scalar& s_w,
                                  const Scalar& s_g, const Scalar& p_b) {
  FluidProps<Scalar> f;
  f.p_o = p_o;
  f.s_w = s_w;
  f.pcow = m.pcow(s_w);
  f.p_w = p_o - f.pcow;
  f.rho_w = m.rho_w_ref * (1.0 + m.c_w * (f.p_w - m.p_ref));
  f.mu_w = Scalar(m.mu_w);
  if (m.kind == FluidKind::two_phase) {
    f.s_g = Scalar(0.0);
    f.s_o = 1.0 - s_w;
    f.p_g = p_o;
    f.pcog = Scalar(0.0);
    f.rho_oo = m.rho_o_ref * (1.0 + m.c_o * (p_o - m.p_ref));
    f.rho_og = Scalar(0.0);
    f.rho_o = f.rho_oo;
    f.rho_g = Scalar(0.0);
    f.mu_o = Scalar(m.mu_o);
    f.mu_g = Scalar(1.0);
    f.kr_w = krw(s_w, m.corey);
    f.kr_o = kro_two_phase(s_w, m.corey);
    f.kr_g = Scalar(0.0);
    return f;
  }
  f.s_g = s_g;
  f.s_o = 1.0 - s_w - s_g;
  f.pcog = m.pcog(s_g);
  f.p_g = p_o + f.pcog;
  const Scalar b_o = m.bo(p_b) * (1.0 - m.c_o * (p_o - p_b));
  f.rho_oo = m.rho_o_ref / b_o;
  f.rho_og = m.rs(p_b) * (units::ft3_per_mscf * m.rho_g_ref / units::ft3_per_bbl) / b_o;
  f.rho_o = f.rho_oo + f.rho_og;
  f.mu_o = m.mu_o_sat(p_b) * (1.0 + m.c_mu * (p_o - p_b));
  f.rho_g = (units::ft3_per_mscf * m.rho_g_ref / units::ft3_per_bbl) / m.bg(f.p_g);
  f.mu_g = m.mu_g(f.p_g);
  f.kr_w = m.relperm.krw(s_w);
  f.kr_g = m.relperm.krg(s_g);
  f.kr_o = kro_stone2(s_w, s_g, m.relperm);
  return f;
}

/// Maps the cell unknowns (p_o, s_w, third) onto fluid properties: the third
/// unknown is s_g in saturated cells (p_b = p_o) and p_b otherwise (s_g = 0).
template <class Scalar>
FluidProps<Scalar> evaluate_cell_fluid(const PvtModel& m, const Scalar& p_o, const Scalar& s_w,
                                       const Scalar& third, bool saturated) {
  if (m.kind == FluidKind::two_phase) return evaluate_fluid(m, p_o, s_w, Scalar(0.0), p_o);
  if (saturated) return evaluate_fluid(m, p_o, s_w, third, p_o);
  return evaluate_fluid(m, p_o, s_w, Scalar(0.0), third);
}

/// Density of one phase (lbm/ft^3). For oil this is the full phase density
/// rho_o^o + rho_o^g.
double phase_density(Phase phase, double p_o, double p_b, double s_w, double s_g,
                     const PvtModel& m);

/// Properties with derivatives w.r.t. (p_o, s_w, third) in AD slots 0, 1, 2.
FluidProps<ADScalar> property_derivatives(double p_o, double s_w, double third, bool saturated,
                                          const PvtModel& m);

}  // namespace resim

#endif  // RESIM_PVT_HPP
