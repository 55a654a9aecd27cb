#ifndef RESIM_COMMON_HPP
#define RESIM_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

namespace resim {

using Index = std::int64_t;

/// Field-unit constants.
namespace units {
/// Darcy flow constant: bbl/day per (md * ft^2 * psi / (cp * ft)).
inline constexpr double darcy_bbl = 0.001127;
inline constexpr double ft3_per_bbl = 5.614583;
/// Volumetric Darcy constant in ft^3/day.
inline constexpr double darcy = darcy_bbl * ft3_per_bbl;
/// psi per (lbm/ft^3 * ft) of hydrostatic head.
inline constexpr double gravity = 1.0 / 144.0;
inline constexpr double ft3_per_mscf = 1000.0;
}  // namespace units

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed numeric input (wrong value count, bad token).
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent or invalid configuration (deck, wells, schedule).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite value produced during residual/Jacobian assembly.
class AssemblyError : public Error {
 public:
  AssemblyError(const std::string& what, Index cell) : Error(what), cell_(cell) {}
  Index cell() const { return cell_; }

 private:
  Index cell_;
};

/// Simulation cannot continue (time step cut below the minimum).
class SimulationAbort : public Error {
 public:
  using Error::Error;
};

// Forward-mode AD: slots [0, m) own-cell unknowns, [m, 2m) neighbor cell,
// slot kWellSlot the bottom hole pressure of a perforating well.
inline constexpr int kMaxDerivatives = 7;
inline constexpr int kWellSlot = 6;
using Derivatives = Eigen::Matrix<double, kMaxDerivatives, 1>;
using ADScalar = Eigen::AutoDiffScalar<Derivatives>;

inline double value_of(double x) { return x; }
inline double value_of(const ADScalar& x) { return x.value(); }

inline ADScalar make_variable(double value, int slot) {
  return ADScalar(value, kMaxDerivatives, slot);
}

/// Copies derivative slots [0, count) of `x` into [offset, offset + count).
inline ADScalar shift_slots(const ADScalar& x, int count, int offset) {
  ADScalar out(x.value());
  for (int i = 0; i < count; ++i) out.derivatives()(offset + i) = x.derivatives()(i);
  return out;
}

template <class Scalar>
Scalar constant(double v) {
  return Scalar(v);
}

}  // namespace resim

#endif  // RESIM_COMMON_HPP
