#include "resim/driver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "resim/vtk.hpp"

namespace resim {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot open output '" + path.string() + "'");
  return out;
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  return in;
}

fs::path numbered(const fs::path& prefix, const std::string& tag) {
  fs::path p = prefix;
  p += "_" + tag + ".vtk";
  return p;
}

std::string zero_padded(int v, int width) {
  std::ostringstream s;
  s << std::setw(width) << std::setfill('0') << v;
  return s.str();
}

fs::path iteration_csv_path(const fs::path& report) {
  fs::path p = report.parent_path() / report.stem();
  p += "_iterations.csv";
  return p;
}

void write_reports(const RunReport& report, const fs::path& path) {
  std::ofstream steps = open_output(path);
  write_step_csv(report, steps);
  std::ofstream iters = open_output(iteration_csv_path(path));
  write_iteration_csv(report, iters);
}

double connate_water(const PvtModel& pvt) {
  return pvt.kind == FluidKind::two_phase ? pvt.corey.s_wc : pvt.relperm.s_wc();
}

/// Gaussian smoothing along one axis with clamped ends.
void smooth_axis(std::vector<double>& f, const std::array<Index, 3>& dims, int axis, double sigma) {
  if (sigma <= 0.0) return;
  const int half = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * half + 1);
  for (int t = -half; t <= half; ++t) w[t + half] = std::exp(-0.5 * t * t / (sigma * sigma));
  const Index n = dims[axis];
  const Index stride = axis == 0 ? 1 : (axis == 1 ? dims[0] : dims[0] * dims[1]);
  std::vector<double> line(n), out(n);
  for (Index base = 0; base < static_cast<Index>(f.size()); ++base) {
    if ((base / stride) % n != 0) continue;
    for (Index q = 0; q < n; ++q) line[q] = f[base + q * stride];
    for (Index q = 0; q < n; ++q) {
      double acc = 0.0, norm = 0.0;
      for (int t = -half; t <= half; ++t) {
        const Index r = std::clamp<Index>(q + t, 0, n - 1);
        acc += w[t + half] * line[r];
        norm += w[t + half];
      }
      out[q] = acc / norm;
    }
    for (Index q = 0; q < n; ++q) f[base + q * stride] = out[q];
  }
}

void standardize(std::vector<double>& f) {
  double mean = 0.0;
  for (double v : f) mean += v;
  mean /= static_cast<double>(f.size());
  double var = 0.0;
  for (double v : f) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / static_cast<double>(f.size()));
  for (double& v : f) v = sd > 0.0 ? (v - mean) / sd : 0.0;
}

}  // namespace

Grid make_grid(const Deck& deck) {
  const auto& g = deck.grid;
  return Grid(g.dims[0], g.dims[1], g.dims[2], g.cell_size[0], g.cell_size[1], g.cell_size[2],
              g.depth_top);
}

RockFields make_fields(const Deck& deck, const Grid& grid) {
  const FieldsSpec& f = deck.fields;
  if (f.perm_file.empty()) {
    RockFields rock = uniform_fields(grid, f.kx, f.ky, f.kz, f.poro);
    clamp_fields(rock);
    return rock;
  }
  const auto& src = f.source_dims;
  const auto& dims = deck.grid.dims;
  const bool all = f.layers[0] == 0 && f.layers[1] == 0;
  const Index k_first = all ? 0 : f.layers[0] - 1;
  const Index k_last = all ? src[2] - 1 : f.layers[1] - 1;
  if (src[0] != dims[0] || src[1] != dims[1] || k_last - k_first + 1 != dims[2]) {
    std::ostringstream msg;
    msg << "fields: source " << src[0] << "x" << src[1] << "x" << src[2] << " with layers "
        << k_first + 1 << ".." << k_last + 1 << " gives " << src[0] * src[1] * (k_last - k_first + 1)
        << " cells, grid has " << grid.cell_count();
    throw ConfigError(msg.str());
  }
  const auto& h = deck.grid.cell_size;
  const Grid source(src[0], src[1], src[2], h[0], h[1], h[2], deck.grid.depth_top);
  std::ifstream perm = open_input(f.perm_file);
  std::ifstream poro = open_input(f.poro_file);
  const RockFields full = load_spe10_fields(perm, poro, source);
  return extract_layers(full, source, k_first, k_last);
}

std::vector<Well> make_wells(const Deck& deck, const Grid& grid, const RockFields& rock) {
  std::vector<Well> wells;
  for (const WellSpec& w : deck.wells)
    wells.push_back(make_vertical_well(w.name, w.type, grid, rock, w.i, w.j, w.k_top, w.k_bottom,
                                       w.radius, w.skin, Constraint{}));
  validate_schedule(deck.schedule, wells);
  apply_schedule(deck.schedule, 0.0, wells);
  return wells;
}

ReservoirModel make_model(const Deck& deck) {
  Grid grid = make_grid(deck);
  RockFields rock = make_fields(deck, grid);
  std::vector<Well> wells = make_wells(deck, grid, rock);
  return ReservoirModel(std::move(grid), std::move(rock), deck.pvt, std::move(wells));
}

ReservoirState initial_state(const ReservoirModel& model, const InitSpec& init) {
  const Grid& grid = model.grid();
  const PvtModel& pvt = model.pvt();
  const bool black_oil = pvt.kind == FluidKind::black_oil;
  const double s_w = init.s_w.value_or(connate_water(pvt));
  const double s_g = black_oil ? init.s_g : 0.0;
  const double z_top = grid.depth_top() + 0.5 * grid.dz();
  const double datum = init.datum.value_or(z_top);

  auto density = [&](double p) {
    const double p_b = init.p_b ? std::min(*init.p_b, p) : p;
    return phase_density(Phase::oil, p, p_b, s_w, s_g, pvt);
  };
  auto integrate = [&](double p0, double z0, double z1) {
    double p1 = p0;
    for (int it = 0; it < 8; ++it) p1 = p0 + model.gravity() * 0.5 * (density(p0) + density(p1)) * (z1 - z0);
    return p1;
  };

  const Index nz = grid.nz();
  std::vector<double> layer_p(static_cast<std::size_t>(nz), init.pressure);
  if (init.hydrostatic) {
    std::vector<double> z(static_cast<std::size_t>(nz));
    for (Index k = 0; k < nz; ++k) z[k] = z_top + k * grid.dz();
    const Index below = std::lower_bound(z.begin(), z.end(), datum) - z.begin();
    double p = init.pressure, zp = datum;
    for (Index k = below; k < nz; ++k) {
      p = integrate(p, zp, z[k]);
      zp = z[k];
      layer_p[k] = p;
    }
    p = init.pressure;
    zp = datum;
    for (Index k = below - 1; k >= 0; --k) {
      p = integrate(p, zp, z[k]);
      zp = z[k];
      layer_p[k] = p;
    }
  }

  ReservoirState state;
  state.cells.resize(static_cast<std::size_t>(grid.cell_count()));
  for (Index c = 0; c < grid.cell_count(); ++c) {
    CellState& cs = state.cells[c];
    cs.p_o = layer_p[grid.ijk(c).k];
    cs.s_w = s_w;
    if (black_oil && init.p_b && *init.p_b < cs.p_o && s_g <= 0.0) {
      cs.saturated = false;
      cs.third = *init.p_b;
    } else {
      cs.saturated = true;
      cs.third = s_g;
    }
  }
  const auto& wells = model.wells();
  state.bhp.resize(static_cast<Index>(wells.size()));
  for (std::size_t w = 0; w < wells.size(); ++w) {
    const Well& well = wells[w];
    if (well.constraint.kind == ConstraintKind::bhp) {
      state.bhp(w) = well.constraint.value;
    } else {
      const double p = state.cells[well.perforations.front().cell].p_o;
      state.bhp(w) = p + (well.is_injector() ? 200.0 : -200.0);
    }
  }
  return state;
}

void write_matrix_market(const BlockMatrix& a, const fs::path& matrix, const fs::path& rhs) {
  const RowSparse s = a.to_sparse();
  std::ofstream out = open_output(matrix);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << s.rows() << ' ' << s.cols() << ' ' << s.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Index r = 0; r < s.outerSize(); ++r)
    for (RowSparse::InnerIterator it(s, r); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
  std::ofstream b = open_output(rhs);
  b << "%%MatrixMarket matrix array real general\n" << a.rhs().size() << " 1\n";
  b << std::setprecision(17);
  for (Index i = 0; i < a.rhs().size(); ++i) b << a.rhs()(i) << '\n';
  if (!out || !b) throw Error("write failed for matrix dump '" + matrix.string() + "'");
}

RunResult run_simulation(const Deck& deck, const RunOptions& options) {
  std::ostream& log = options.log ? *options.log : std::cout;
  OutputSpec output = deck.output;
  if (options.report) output.report = *options.report;
  if (options.vtk_every) output.vtk_every = *options.vtk_every;
  output.dump_matrices = output.dump_matrices || options.dump_matrices;
  if (options.workers < 1) throw ConfigError("workers must be at least 1");

  log << "# effective parameters\n";
  deck.echo(log);
  log << "run.workers = " << options.workers << '\n';

  ReservoirModel model = make_model(deck);
  ReservoirState state = initial_state(model, deck.init);
  Simulator sim(model, deck.sim, options.workers);
  if (sim.partition().workers != options.workers)
    log << "warning: workers reduced to " << sim.partition().workers << " (cell count)\n";

  if (output.dump_matrices) {
    sim.on_system([&](const BlockMatrix& a, int step, int attempt, int newton) {
      const std::string tag = "step" + zero_padded(step, 4) + "_attempt" + zero_padded(attempt, 2) +
                              "_newton" + zero_padded(newton, 2);
      write_matrix_market(a, output.dump_dir / (tag + ".mtx"), output.dump_dir / (tag + "_rhs.mtx"));
    });
  }
  sim.on_step([&](const ReservoirState& s, const StepRecord& rec) {
    log << "step " << rec.index << " t = " << s.time << " dt = " << rec.dt
        << " newton = " << rec.newton << " linear = " << rec.linear;
    if (rec.cuts > 0) log << " cuts = " << rec.cuts;
    log << '\n';
    if (output.vtk_every > 0 && (rec.index + 1) % output.vtk_every == 0)
      write_vtk(model, s, numbered(output.vtk_prefix, zero_padded(rec.index + 1, 4)));
  });

  RunResult result;
  try {
    sim.run(state, deck.schedule, deck.t_end, result.report);
  } catch (const SimulationAbort& e) {
    fs::path dir = output.vtk_prefix;
    dir += "_abort";
    fs::create_directories(dir);
    write_vtk(model, state, dir / "last_state.vtk");
    write_reports(result.report, dir / "steps.csv");
    std::ofstream msg = open_output(dir / "message.txt");
    msg << e.what() << '\n';
    log << "abort: " << e.what() << "\ndiagnostics written to " << dir.string() << '\n';
    throw;
  }

  write_vtk(model, state, numbered(output.vtk_prefix, "final"));
  if (!output.report.empty()) write_reports(result.report, output.report);
  result.row = summarize(result.report);
  log << '\n' << format_table({result.row});
  result.final_state = std::move(state);
  return result;
}

void write_synthetic_spe10(const SyntheticSpe10& spec, const fs::path& perm, const fs::path& poro) {
  const auto& d = spec.dims;
  const auto n = static_cast<std::size_t>(d[0] * d[1] * d[2]);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  std::vector<double> g(n), h(n);
  for (auto& v : g) v = normal(rng);
  for (auto& v : h) v = normal(rng);
  smooth_axis(g, d, 0, spec.correlation_x);
  smooth_axis(g, d, 1, spec.correlation_y);
  smooth_axis(g, d, 2, 1.0);
  standardize(g);
  standardize(h);

  std::vector<double> kx(n), phi(n);
  for (std::size_t c = 0; c < n; ++c) {
    kx[c] = std::clamp(std::exp(spec.mean_log_perm + spec.sigma_log_perm * g[c]), 6.65e-4, 2.0e4);
    phi[c] = std::clamp(0.17 + 0.06 * g[c] + 0.02 * h[c], 0.01, 0.5);
  }
  auto write_block = [](std::ostream& out, const std::vector<double>& v, double scale) {
    out << std::scientific << std::setprecision(6);
    for (std::size_t c = 0; c < v.size(); ++c)
      out << std::max(v[c] * scale, 6.65e-4) << ((c + 1) % 6 == 0 ? '\n' : ' ');
    out << '\n';
  };
  std::ofstream p = open_output(perm);
  write_block(p, kx, 1.0);
  write_block(p, kx, 1.0);
  write_block(p, kx, spec.kv_ratio);
  std::ofstream f = open_output(poro);
  f << std::scientific << std::setprecision(6);
  for (std::size_t c = 0; c < n; ++c) f << phi[c] << ((c + 1) % 6 == 0 ? '\n' : ' ');
  f << '\n';
  if (!p || !f) throw Error("write failed for synthetic fields in " + perm.parent_path().string());
}

}  // namespace resim
