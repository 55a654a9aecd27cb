#ifndef RESIM_VTK_HPP
#define RESIM_VTK_HPP

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "resim/model.hpp"

namespace resim {

/// Legacy-VTK structured points with cell arrays pressure, s_w, s_o, s_g
/// (black oil only), kx and poro. Throws Error naming the path on I/O failure.
void write_vtk(const ReservoirModel& model, const ReservoirState& state,
               const std::filesystem::path& path);

struct VtkFile {
  std::array<Index, 3> cells{0, 0, 0};
  std::map<std::string, std::vector<double>> arrays;
};

/// Minimal reader for files produced by write_vtk.
VtkFile read_vtk(const std::filesystem::path& path);

}  // namespace resim

#endif  // RESIM_VTK_HPP
