#ifndef RESIM_DECK_HPP
#define RESIM_DECK_HPP

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resim/nonlinear.hpp"
#include "resim/pvt.hpp"
#include "resim/wells.hpp"

namespace resim {

/// Deck syntax error; the message starts with "line N:".
class DeckError : public ConfigError {
 public:
  DeckError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct GridSpec {
  std::array<Index, 3> dims{1, 1, 1};
  std::array<double, 3> cell_size{1.0, 1.0, 1.0};
  double depth_top = 0.0;
};

struct FieldsSpec {
  // Constant values unless the files are given.
  double kx = 100.0, ky = 100.0, kz = 10.0, poro = 0.2;
  std::filesystem::path perm_file, poro_file;  // SPE10 ASCII layout
  std::array<Index, 3> source_dims{0, 0, 0};   // defaults to the grid dims
  std::array<Index, 2> layers{0, 0};           // 1-based, inclusive; 0 0 selects all
};

struct InitSpec {
  double pressure = 4000.0;              // psi at the datum depth
  std::optional<double> datum;           // defaults to the top cell-center depth
  std::optional<double> s_w;             // defaults to connate water
  double s_g = 0.0;
  std::optional<double> p_b;             // black oil, undersaturated start
  bool hydrostatic = true;
};

struct WellSpec {
  std::string name;
  WellType type = WellType::producer;
  Index i = 0, j = 0, k_top = 0, k_bottom = 0;  // 0-based
  double radius = 0.25;
  double skin = 0.0;
};

struct OutputSpec {
  std::filesystem::path report;  // per-step CSV; empty disables
  int vtk_every = 0;             // 0 writes only the final state
  std::filesystem::path vtk_prefix = "state";
  bool dump_matrices = false;
  std::filesystem::path dump_dir = "matrices";
};

struct Deck {
  std::filesystem::path base_dir;
  GridSpec grid;
  FieldsSpec fields;
  PvtModel pvt;
  InitSpec init;
  std::vector<WellSpec> wells;
  Schedule schedule;
  SimulatorConfig sim;
  double t_end = 0.0;
  OutputSpec output;

  /// Every effective parameter, defaults included, one `section.key = value` line each.
  void echo(std::ostream& out) const;
};

/// Parses the sectioned key = value format; `base_dir` resolves relative paths.
/// Throws DeckError for syntax errors and unknown keys, ConfigError for
/// missing sections or inconsistent settings.
Deck parse_deck(std::istream& in, const std::filesystem::path& base_dir = {});
Deck load_deck(const std::filesystem::path& path);

}  // namespace resim

#endif  // RESIM_DECK_HPP
