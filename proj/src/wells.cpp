#include "resim/wells.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace resim {

double peaceman_radius(double dx, double dy, double kx, double ky) {
  const double ratio = ky / kx;
  return 0.28 * std::sqrt(std::sqrt(ratio) * dx * dx + std::sqrt(1.0 / ratio) * dy * dy) /
         (std::pow(ratio, 0.25) + std::pow(1.0 / ratio, 0.25));
}

double peaceman_wi(double dx, double dy, double dz, double kx, double ky, double r_w, double skin) {
  if (!(kx > 0.0) || !(ky > 0.0)) throw ConfigError("peaceman: permeabilities must be positive");
  if (!(r_w > 0.0)) throw ConfigError("peaceman: wellbore radius must be positive");
  const double r_e = peaceman_radius(dx, dy, kx, ky);
  if (r_e <= r_w) throw ConfigError("peaceman: equivalent radius does not exceed wellbore radius");
  const double denom = std::log(r_e / r_w) + skin;
  if (!(denom > 0.0)) throw ConfigError("peaceman: skin makes the well index nonpositive");
  return 2.0 * std::numbers::pi * std::sqrt(kx * ky) * dz / denom;
}

Well make_vertical_well(std::string name, WellType type, const Grid& grid, const RockFields& rock,
                        Index i, Index j, Index k_top, Index k_bottom, double r_w, double skin,
                        Constraint constraint) {
  if (k_bottom < k_top) throw ConfigError("well " + name + ": k_bottom < k_top");
  Well w;
  w.name = std::move(name);
  w.type = type;
  w.radius = r_w;
  w.skin = skin;
  w.constraint = constraint;
  for (Index k = k_top; k <= k_bottom; ++k) {
    Index cell = 0;
    try {
      cell = grid.cell_index(i, j, k);
    } catch (const std::out_of_range&) {
      throw ConfigError("well " + w.name + ": perforation outside the grid");
    }
    const double wi =
        peaceman_wi(grid.dx(), grid.dy(), grid.dz(), rock.kx(cell), rock.ky(cell), r_w, skin);
    w.perforations.push_back({cell, wi, grid.cell_depth(cell)});
  }
  w.ref_depth = w.perforations.front().depth;
  return w;
}

void validate_schedule(const Schedule& schedule, const std::vector<Well>& wells) {
  std::set<std::string> names;
  for (const Well& w : wells) names.insert(w.name);
  std::map<std::string, double> last;
  for (const ScheduleEntry& e : schedule) {
    if (!names.count(e.well)) throw ConfigError("schedule references undeclared well '" + e.well + "'");
    if (e.start < 0.0) throw ConfigError("schedule: negative start time");
    const auto it = last.find(e.well);
    if (it != last.end() && e.start < it->second)
      throw ConfigError("schedule: times decrease for well '" + e.well + "'");
    last[e.well] = e.start;
  }
}

bool apply_schedule(const Schedule& schedule, double t, std::vector<Well>& wells) {
  validate_schedule(schedule, wells);
  bool changed = false;
  for (Well& w : wells) {
    const ScheduleEntry* active = nullptr;
    for (const ScheduleEntry& e : schedule)
      if (e.well == w.name && e.start <= t) active = &e;
    if (active && !(active->constraint == w.constraint)) {
      w.constraint = active->constraint;
      changed = true;
    }
  }
  return changed;
}

}  // namespace resim
