#include "resim/grid.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace resim {

Grid::Grid(Index nx, Index ny, Index nz, double dx, double dy, double dz, double depth_top)
    : dims_{nx, ny, nz}, spacing_{dx, dy, dz}, depth_top_(depth_top) {
  if (nx < 1 || ny < 1 || nz < 1) throw ConfigError("grid dimensions must be >= 1");
  if (!(dx > 0.0) || !(dy > 0.0) || !(dz > 0.0))
    throw ConfigError("grid cell sizes must be positive");
}

Index Grid::cell_index(Index i, Index j, Index k) const {
  if (i < 0 || i >= nx() || j < 0 || j >= ny() || k < 0 || k >= nz()) {
    std::ostringstream msg;
    msg << "cell (" << i << "," << j << "," << k << ") outside " << nx() << "x" << ny() << "x"
        << nz() << " grid";
    throw std::out_of_range(msg.str());
  }
  return i + nx() * (j + ny() * k);
}

CellIjk Grid::ijk(Index cell) const {
  if (cell < 0 || cell >= cell_count()) throw std::out_of_range("cell id outside grid");
  const Index i = cell % nx();
  const Index rest = cell / nx();
  return {i, rest % ny(), rest / ny()};
}

double Grid::face_area(Axis a) const {
  switch (a) {
    case Axis::x: return spacing_[1] * spacing_[2];
    case Axis::y: return spacing_[0] * spacing_[2];
    case Axis::z: return spacing_[0] * spacing_[1];
  }
  return 0.0;
}

double Grid::cell_depth(Index cell) const {
  return depth_top_ + (static_cast<double>(ijk(cell).k) + 0.5) * spacing_[2];
}

std::optional<Index> Grid::neighbor(Index cell, Axis a, int direction) const {
  CellIjk c = ijk(cell);
  Index* coord = a == Axis::x ? &c.i : a == Axis::y ? &c.j : &c.k;
  *coord += direction;
  if (*coord < 0 || *coord >= dim(a)) return std::nullopt;
  return c.i + nx() * (c.j + ny() * c.k);
}

std::optional<Axis> Grid::adjacency(Index a, Index b) const {
  const CellIjk ca = ijk(a);
  const CellIjk cb = ijk(b);
  const Index di = std::abs(ca.i - cb.i);
  const Index dj = std::abs(ca.j - cb.j);
  const Index dk = std::abs(ca.k - cb.k);
  if (di + dj + dk != 1) return std::nullopt;
  return di ? Axis::x : dj ? Axis::y : Axis::z;
}

const Eigen::VectorXd& RockFields::perm(Axis a) const {
  switch (a) {
    case Axis::x: return kx;
    case Axis::y: return ky;
    case Axis::z: return kz;
  }
  return kx;
}

RockFields uniform_fields(const Grid& grid, double kx, double ky, double kz, double poro) {
  const Index n = grid.cell_count();
  RockFields rock{Eigen::VectorXd::Constant(n, kx), Eigen::VectorXd::Constant(n, ky),
                  Eigen::VectorXd::Constant(n, kz), Eigen::VectorXd::Constant(n, poro)};
  clamp_fields(rock);
  return rock;
}

void clamp_fields(RockFields& rock) {
  for (Eigen::VectorXd* k : {&rock.kx, &rock.ky, &rock.kz})
    *k = k->cwiseMax(kMinPermeability);
  rock.poro = rock.poro.cwiseMax(kMinPorosity).cwiseMin(1.0);
}

double harmonic_transmissibility(double k_a, double k_b, double area, double spacing) {
  const double ta = k_a * area / spacing;
  const double tb = k_b * area / spacing;
  return 2.0 / (1.0 / ta + 1.0 / tb);
}

double geometric_transmissibility(const Grid& grid, const RockFields& rock, Index a, Index b,
                                  Axis axis) {
  const auto adj = grid.adjacency(a, b);
  if (!adj || *adj != axis)
    throw std::invalid_argument("geometric_transmissibility: cells are not axis neighbors");
  // Ordered evaluation keeps the result exactly symmetric in (a, b).
  const Index lo = std::min(a, b);
  const Index hi = std::max(a, b);
  const Eigen::VectorXd& k = rock.perm(axis);
  return harmonic_transmissibility(k(lo), k(hi), grid.face_area(axis), grid.spacing(axis));
}

namespace {

std::vector<double> read_values(std::istream& in, const char* what) {
  std::vector<double> values;
  std::string token;
  std::size_t position = 0;
  while (in >> token) {
    ++position;
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      std::ostringstream msg;
      msg << what << ": non-numeric token '" << token << "' at value " << position;
      throw FormatError(msg.str());
    }
    values.push_back(v);
  }
  return values;
}

}  // namespace

RockFields load_spe10_fields(std::istream& perm, std::istream& poro, const Grid& grid) {
  const auto n = static_cast<std::size_t>(grid.cell_count());
  const std::vector<double> k = read_values(perm, "permeability");
  const std::vector<double> phi = read_values(poro, "porosity");
  if (k.size() != 3 * n) {
    std::ostringstream msg;
    msg << "permeability: expected " << 3 * n << " values, read " << k.size();
    throw FormatError(msg.str());
  }
  if (phi.size() != n) {
    std::ostringstream msg;
    msg << "porosity: expected " << n << " values, read " << phi.size();
    throw FormatError(msg.str());
  }
  RockFields rock;
  const auto ni = static_cast<Index>(n);
  rock.kx = Eigen::Map<const Eigen::VectorXd>(k.data(), ni);
  rock.ky = Eigen::Map<const Eigen::VectorXd>(k.data() + n, ni);
  rock.kz = Eigen::Map<const Eigen::VectorXd>(k.data() + 2 * n, ni);
  rock.poro = Eigen::Map<const Eigen::VectorXd>(phi.data(), ni);
  clamp_fields(rock);
  return rock;
}

}  // namespace resim

namespace resim {

RockFields extract_layers(const RockFields& fields, const Grid& full, Index k_first, Index k_last) {
  if (k_first < 0 || k_last < k_first || k_last >= full.nz())
    throw ConfigError("layer range outside the source grid");
  const Index per_layer = full.nx() * full.ny();
  const Index n = per_layer * (k_last - k_first + 1);
  const Index offset = per_layer * k_first;
  RockFields out;
  out.kx = fields.kx.segment(offset, n);
  out.ky = fields.ky.segment(offset, n);
  out.kz = fields.kz.segment(offset, n);
  out.poro = fields.poro.segment(offset, n);
  return out;
}

}  // namespace resim
