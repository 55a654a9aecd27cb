#include "resim/vtk.hpp"

#include <fstream>
#include <iomanip>

namespace resim {

void write_vtk(const ReservoirModel& model, const ReservoirState& state,
               const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open VTK output '" + path.string() + "'");
  const Grid& g = model.grid();
  const Index n = g.cell_count();
  const bool gas = model.unknowns_per_cell() == 3;
  out << "# vtk DataFile Version 3.0\n"
      << "resim state t=" << state.time << "\n"
      << "ASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << g.nx() + 1 << ' ' << g.ny() + 1 << ' ' << g.nz() + 1 << '\n'
      << "ORIGIN 0 0 " << g.depth_top() << '\n'
      << "SPACING " << g.dx() << ' ' << g.dy() << ' ' << g.dz() << '\n'
      << "CELL_DATA " << n << '\n';
  out << std::setprecision(12);
  auto array = [&](const char* name, auto&& value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Index c = 0; c < n; ++c) out << value(c) << '\n';
  };
  array("pressure", [&](Index c) { return state.cells[c].p_o; });
  array("s_w", [&](Index c) { return state.cells[c].s_w; });
  array("s_o", [&](Index c) { return 1.0 - state.cells[c].s_w - state.cells[c].s_g(); });
  if (gas) array("s_g", [&](Index c) { return state.cells[c].s_g(); });
  array("kx", [&](Index c) { return model.rock().kx(c); });
  array("poro", [&](Index c) { return model.rock().poro(c); });
  if (!out) throw Error("write failed for VTK output '" + path.string() + "'");
}

VtkFile read_vtk(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open VTK file '" + path.string() + "'");
  VtkFile f;
  std::string word;
  Index ncell = 0;
  while (in >> word) {
    if (word == "DIMENSIONS") {
      for (auto& c : f.cells) {
        in >> c;
        --c;
      }
    } else if (word == "CELL_DATA") {
      in >> ncell;
    } else if (word == "SCALARS") {
      std::string name, type, lookup, table;
      int comps = 0;
      in >> name >> type >> comps >> lookup >> table;
      std::vector<double> v(static_cast<std::size_t>(ncell));
      for (auto& x : v) in >> x;
      if (!in) throw FormatError("truncated VTK array '" + name + "' in " + path.string());
      f.arrays[name] = std::move(v);
    }
  }
  return f;
}

}  // namespace resim
