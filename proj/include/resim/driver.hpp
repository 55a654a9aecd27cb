#ifndef RESIM_DRIVER_HPP
#define RESIM_DRIVER_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "resim/deck.hpp"
#include "resim/model.hpp"
#include "resim/report.hpp"

namespace resim {

Grid make_grid(const Deck& deck);

/// Constant fields, or the SPE10 files restricted to the selected layers.
/// Throws ConfigError when the source dims and layer range disagree with the
/// grid, FormatError when a file holds the wrong number of values.
RockFields make_fields(const Deck& deck, const Grid& grid);

/// Declared wells with their t = 0 constraints active.
std::vector<Well> make_wells(const Deck& deck, const Grid& grid, const RockFields& rock);

ReservoirModel make_model(const Deck& deck);

/// Initial p_o at the datum, adjusted hydrostatically per layer with the
/// oil-phase density averaged over each depth interval; s_w defaults to
/// connate water. Bottom hole pressures start at the BHP target or at the
/// top-perforation pressure offset by 200 psi in the flow direction.
ReservoirState initial_state(const ReservoirModel& model, const InitSpec& init);

struct RunOptions {
  int workers = 1;
  std::optional<std::filesystem::path> report;  // overrides the deck
  std::optional<int> vtk_every;
  bool dump_matrices = false;
  std::ostream* log = nullptr;
};

struct RunResult {
  RunReport report;
  TableRow row;
  ReservoirState final_state;
};

/// Runs the deck to t_end and writes the step and iteration CSVs, the VTK
/// snapshots and the summary table to the log. On abort a diagnostic bundle
/// (last accepted state as VTK, reports so far, message) is written to
/// `<vtk_prefix>_abort/` and SimulationAbort is rethrown.
RunResult run_simulation(const Deck& deck, const RunOptions& options = {});

/// Sparse matrix and right-hand side in Matrix Market coordinate format.
void write_matrix_market(const BlockMatrix& a, const std::filesystem::path& matrix,
                         const std::filesystem::path& rhs);

struct SyntheticSpe10 {
  std::array<Index, 3> dims{60, 220, 85};
  std::uint64_t seed = 2024;
  double correlation_x = 6.0;  // cells
  double correlation_y = 12.0;
  double mean_log_perm = 4.0;  // ln(md)
  double sigma_log_perm = 2.0;
  double kv_ratio = 0.1;
};

/// Writes correlated lognormal fields in the SPE10 ASCII layout
/// (kx, ky, kz blocks, then porosity), clamped to the SPE10 value ranges.
void write_synthetic_spe10(const SyntheticSpe10& spec, const std::filesystem::path& perm,
                           const std::filesystem::path& poro);

}  // namespace resim

#endif  // RESIM_DRIVER_HPP
