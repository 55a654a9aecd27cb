#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "resim/driver.hpp"
#include "resim/vtk.hpp"

using namespace resim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("resim_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Deck parse(const std::string& text, const fs::path& base = {}) {
  std::istringstream in(text);
  return parse_deck(in, base);
}

const char* kMinimal = R"(
[grid]
dims = 1 1 1
cell_size = 100 100 10
[fields]
kx = 50
[fluid]
model = two_phase
[time]
t_end = 1
)";

int error_line(const std::string& text) {
  try {
    parse(text);
  } catch (const DeckError& e) {
    return e.line();
  }
  return -1;
}

std::string error_text(const std::string& text) {
  try {
    parse(text);
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("minimal deck gets defaults") {
  const Deck d = parse(kMinimal);
  CHECK(d.grid.dims == std::array<Index, 3>{1, 1, 1});
  CHECK(d.fields.kx == 50.0);
  CHECK(d.fields.ky == 100.0);
  CHECK(d.sim.newton.tolerance == 1e-2);
  CHECK(d.sim.newton.max_newton == 20);
  CHECK(d.sim.linear.max_iterations == 50);
  CHECK(d.sim.control.dt_max == 100.0);
  CHECK(d.t_end == 1.0);
  CHECK(d.wells.empty());
}

TEST_CASE("deck errors") {
  CHECK(error_line(std::string(kMinimal) + "bogus = 3\n") == 11);
  std::string short_dims = kMinimal;
  short_dims.replace(short_dims.find("1 1 1"), 5, "1 1");
  CHECK(error_line(short_dims) == 3);
  CHECK(error_line("[grid]\n[nonsense]\n") == 2);
  CHECK(error_text("[grid]\ndims = 1 1 1\n[fields]\n[time]\nt_end = 1\n").find("[fluid]") !=
        std::string::npos);
  const std::string wells = std::string(kMinimal) +
                            "[wells]\nwell = P producer 1 1 1 1\n"
                            "[schedule]\nat = 0 P bhp 1000\nat = 0 Q bhp 1000\n";
  CHECK(error_line(wells) == 15);
  CHECK(error_text(std::string(kMinimal) + "[wells]\nwell = P producer 1 1 1 1\n")
            .find("no schedule entry") != std::string::npos);
  CHECK(error_line(std::string(kMinimal) + "[wells]\nwell = P producer 2 1 1 1\n") == 12);
  CHECK(error_line(std::string(kMinimal) + "[solver]\nforcing = d\n") == 12);
  CHECK_THROWS_AS(parse(std::string(kMinimal) + "[solver]\nlinear_max_iterations = 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse(std::string(kMinimal) + "[fields]\n"), DeckError);
  CHECK_THROWS_AS(load_deck("/nonexistent/deck"), ConfigError);
}

TEST_CASE("field files must exist and match the grid") {
  const fs::path dir = scratch("fields");
  SyntheticSpe10 spec;
  spec.dims = {6, 5, 3};
  write_synthetic_spe10(spec, dir / "perm.dat", dir / "phi.dat");
  const std::string head = "[grid]\ndims = 6 5 1\ncell_size = 20 10 2\n[fluid]\n[time]\nt_end = 1\n"
                           "[fields]\nperm_file = perm.dat\nporo_file = phi.dat\n";
  const Deck ok = parse(head + "source_dims = 6 5 3\nlayers = 2 2\n", dir);
  const Grid g = make_grid(ok);
  const RockFields layer = make_fields(ok, g);
  CHECK(layer.kx.size() == 30);

  const Deck all = parse("[grid]\ndims = 6 5 3\ncell_size = 20 10 2\n[fluid]\n[time]\nt_end = 1\n"
                         "[fields]\nperm_file = perm.dat\nporo_file = phi.dat\n", dir);
  const RockFields full = make_fields(all, make_grid(all));
  for (Index c = 0; c < 30; ++c) CHECK(layer.kx(c) == full.kx(30 + c));
  CHECK(full.kx.minCoeff() >= 6.65e-4);
  CHECK(full.kx.maxCoeff() <= 2e4);
  CHECK(full.kz.maxCoeff() == doctest::Approx(0.1 * full.kx.maxCoeff()).epsilon(1e-6));

  const Deck wrong = parse(head + "source_dims = 6 5 3\n", dir);
  std::string msg;
  try {
    make_fields(wrong, make_grid(wrong));
  } catch (const ConfigError& e) {
    msg = e.what();
  }
  CHECK(msg.find("90 cells, grid has 30") != std::string::npos);

  const Deck short_file = parse(head + "source_dims = 6 5 4\nlayers = 1 1\n", dir);
  try {
    make_fields(short_file, make_grid(short_file));
    msg.clear();
  } catch (const FormatError& e) {
    msg = e.what();
  }
  CHECK(msg.find("expected 360 values, read 270") != std::string::npos);
  CHECK_THROWS_AS(parse(head, dir / "elsewhere"), ConfigError);
}

TEST_CASE("SPE10 top-layer deck") {
  // parsing only checks that the field files exist
  const fs::path dir = scratch("spe10");
  fs::create_directories(dir / "spe10");
  std::ofstream(dir / "spe10" / "spe_perm.dat") << "1\n";
  std::ofstream(dir / "spe10" / "spe_phi.dat") << "1\n";
  std::ifstream in(fs::path(RESIM_DATA_DIR) / "spe10_top_layer.deck");
  const Deck d = parse_deck(in, dir);
  CHECK(d.fields.perm_file == dir / "spe10" / "spe_perm.dat");
  CHECK(d.grid.dims == std::array<Index, 3>{60, 220, 1});
  CHECK(d.fields.source_dims == std::array<Index, 3>{60, 220, 85});
  REQUIRE(d.wells.size() == 5);
  int injectors = 0;
  for (const WellSpec& w : d.wells) injectors += w.type != WellType::producer;
  CHECK(injectors == 1);
  CHECK(d.sim.linear.decoupling == Decoupling::quasi_impes);
  CHECK(d.t_end == 2000.0);
}

TEST_CASE("echo lists each effective parameter once") {
  for (const char* name : {"minimal.deck", "buckley_leverett.deck", "black_oil_20x20x5.deck"}) {
    const Deck d = load_deck(fs::path(RESIM_DATA_DIR) / name);
    std::ostringstream out;
    d.echo(out);
    std::istringstream in(out.str());
    std::map<std::string, int> count;
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find(" = ");
      REQUIRE(eq != std::string::npos);
      ++count[line.substr(0, eq)];
    }
    for (const auto& [key, n] : count) {
      INFO(name << ": " << key);
      if (key == "wells.well")
        CHECK(n == static_cast<int>(d.wells.size()));
      else if (key == "schedule.at")
        CHECK(n == static_cast<int>(d.schedule.size()));
      else
        CHECK(n == 1);
    }
    for (const char* key : {"grid.dims", "fluid.model", "init.pressure", "solver.tolerance",
                            "solver.max_newton", "solver.forcing", "solver.linear_max_iterations",
                            "solver.preconditioner", "solver.decoupling", "time.t_end",
                            "time.dt_init", "time.dt_max", "output.vtk_every"})
      CHECK(count.count(key) == 1);
  }
}

TEST_CASE("hydrostatic initial state") {
  Deck d = load_deck(fs::path(RESIM_DATA_DIR) / "black_oil_20x20x5.deck");
  const ReservoirModel m = make_model(d);
  const ReservoirState s = initial_state(m, d.init);
  const Grid& g = m.grid();
  for (Index k = 0; k + 1 < g.nz(); ++k) {
    const CellState& a = s.cells[g.cell_index(3, 4, k)];
    const CellState& b = s.cells[g.cell_index(3, 4, k + 1)];
    const double rho = 0.5 * (phase_density(Phase::oil, a.p_o, a.p_b(), a.s_w, 0.0, m.pvt()) +
                              phase_density(Phase::oil, b.p_o, b.p_b(), b.s_w, 0.0, m.pvt()));
    CHECK(b.p_o - a.p_o == doctest::Approx(rho * units::gravity * g.dz()).epsilon(1e-9));
    CHECK(!a.saturated);
    CHECK(a.p_b() == doctest::Approx(4014.7));
  }
  // datum 8400 ft lies between the centers of layers 3 and 4 (0-based)
  CHECK(s.cells[g.cell_index(0, 0, 3)].p_o < 4800.0);
  CHECK(s.cells[g.cell_index(0, 0, 4)].p_o > 4800.0);
  const double rho = phase_density(Phase::oil, 4800.0, 4014.7, 0.12, 0.0, m.pvt());
  CHECK(s.cells[g.cell_index(0, 0, 3)].p_o ==
        doctest::Approx(4800.0 - 5.0 * rho * units::gravity).epsilon(1e-8));
  CHECK(s.cells[0].s_w == 0.12);
  CHECK(s.bhp.size() == 2);
}

TEST_CASE("zero-duration run writes valid outputs") {
  const fs::path dir = scratch("zero");
  Deck d = load_deck(fs::path(RESIM_DATA_DIR) / "buckley_leverett.deck");
  d.t_end = 0.0;
  d.output.vtk_prefix = dir / "bl";
  d.output.report = dir / "bl_steps.csv";
  RunOptions opt;
  opt.report = dir / "steps.csv";
  std::ostringstream log;
  opt.log = &log;
  const RunResult r = run_simulation(d, opt);
  CHECK(r.report.step_count() == 0);
  CHECK(r.row.newton == 0);
  std::ifstream csv(dir / "steps.csv");
  std::string header, extra;
  std::getline(csv, header);
  CHECK(header.rfind("step,", 0) == 0);
  CHECK(!std::getline(csv, extra));
  const VtkFile v = read_vtk(dir / "bl_final.vtk");
  CHECK(v.arrays.at("pressure").size() == 100);
  CHECK(log.str().find("# Workers") != std::string::npos);
}

TEST_CASE("worker count does not change iteration counts") {
  const fs::path dir = scratch("determinism");
  Deck d = load_deck(fs::path(RESIM_DATA_DIR) / "buckley_leverett.deck");
  d.t_end = 30.0;
  d.output.vtk_prefix = dir / "bl";
  d.output.report = dir / "bl_steps.csv";
  std::ostringstream log;
  RunOptions opt;
  opt.log = &log;
  const RunResult one = run_simulation(d, opt);
  opt.workers = 4;
  const RunResult four = run_simulation(d, opt);
  REQUIRE(one.report.steps.size() == four.report.steps.size());
  for (std::size_t i = 0; i < one.report.steps.size(); ++i) {
    CHECK(one.report.steps[i].dt == four.report.steps[i].dt);
    CHECK(one.report.steps[i].newton == four.report.steps[i].newton);
    CHECK(one.report.steps[i].linear == four.report.steps[i].linear);
    CHECK(one.report.steps[i].cuts == four.report.steps[i].cuts);
  }
  REQUIRE(one.report.iterations.size() == four.report.iterations.size());
  for (std::size_t i = 0; i < one.report.iterations.size(); ++i)
    CHECK(one.report.iterations[i].r_norm == four.report.iterations[i].r_norm);
  for (std::size_t c = 0; c < one.final_state.cells.size(); ++c)
    CHECK(one.final_state.cells[c].s_w == four.final_state.cells[c].s_w);
}

TEST_CASE("aborted run leaves a diagnostic bundle") {
  const fs::path dir = scratch("abort");
  Deck d = load_deck(fs::path(RESIM_DATA_DIR) / "buckley_leverett.deck");
  d.sim.newton.max_newton = 1;
  d.sim.newton.tolerance = 1e-12;
  d.sim.control.max_cuts = 2;
  d.output.vtk_prefix = dir / "bl";
  d.output.report = dir / "bl_steps.csv";
  std::ostringstream log;
  RunOptions opt;
  opt.log = &log;
  CHECK_THROWS_AS(run_simulation(d, opt), SimulationAbort);
  CHECK(fs::exists(dir / "bl_abort" / "last_state.vtk"));
  CHECK(fs::exists(dir / "bl_abort" / "steps.csv"));
  CHECK(fs::exists(dir / "bl_abort" / "steps_iterations.csv"));
  CHECK(fs::exists(dir / "bl_abort" / "message.txt"));
}

TEST_CASE("VTK output") {
  const fs::path dir = scratch("vtk");
  Grid g(2, 2, 1, 10.0, 10.0, 5.0, 100.0);
  RockFields r = uniform_fields(g, 10, 20, 1, 0.25);
  r.kx << 1.5, 2.5, 3.5, 1e-8;
  ReservoirModel m(g, r, default_two_phase());
  ReservoirState s;
  s.cells = {{1000.123456789, 0.25, 0, true}, {1001, 0.3, 0, true}, {1002, 0.35, 0, true},
             {1003, 0.4, 0, true}};
  write_vtk(m, s, dir / "a.vtk");
  std::ifstream in(dir / "a.vtk");
  std::string first;
  std::getline(in, first);
  CHECK(first == "# vtk DataFile Version 3.0");
  const VtkFile v = read_vtk(dir / "a.vtk");
  CHECK(v.cells == std::array<Index, 3>{2, 2, 1});
  CHECK(v.arrays.size() == 5);
  for (Index c = 0; c < 4; ++c) {
    CHECK(v.arrays.at("pressure")[c] == doctest::Approx(s.cells[c].p_o).epsilon(1e-7));
    CHECK(v.arrays.at("s_w")[c] == doctest::Approx(s.cells[c].s_w).epsilon(1e-7));
    CHECK(v.arrays.at("s_o")[c] == doctest::Approx(1.0 - s.cells[c].s_w).epsilon(1e-7));
    CHECK(v.arrays.at("kx")[c] == doctest::Approx(r.kx(c)).epsilon(1e-7));
    CHECK(v.arrays.at("poro")[c] == doctest::Approx(0.25).epsilon(1e-7));
  }
  CHECK_THROWS_AS(write_vtk(m, s, dir / "missing" / "x" / "a.vtk"), Error);

  ReservoirModel bo(g, r, default_black_oil());
  for (auto& c : s.cells) c.third = 0.1;
  write_vtk(bo, s, dir / "b.vtk");
  const VtkFile vb = read_vtk(dir / "b.vtk");
  CHECK(vb.arrays.size() == 6);
  CHECK(vb.arrays.at("s_g")[2] == doctest::Approx(0.1));
}

TEST_CASE("Matrix Market dump") {
  const fs::path dir = scratch("mm");
  Deck d = load_deck(fs::path(RESIM_DATA_DIR) / "buckley_leverett.deck");
  d.t_end = 1.0;
  d.output.vtk_prefix = dir / "bl";
  d.output.report = dir / "bl_steps.csv";
  d.output.dump_dir = dir / "mats";
  std::ostringstream log;
  RunOptions opt;
  opt.log = &log;
  opt.dump_matrices = true;
  const RunResult r = run_simulation(d, opt);
  const fs::path a = dir / "mats" / "step0000_attempt00_newton00.mtx";
  REQUIRE(fs::exists(a));
  std::ifstream in(a);
  std::string banner;
  Index rows = 0, cols = 0, nnz = 0;
  std::getline(in, banner);
  in >> rows >> cols >> nnz;
  CHECK(banner == "%%MatrixMarket matrix coordinate real general");
  CHECK(rows == 202);
  CHECK(cols == 202);
  CHECK(nnz > 0);
  int files = 0;
  for (const auto& e : fs::directory_iterator(dir / "mats")) files += e.path().extension() == ".mtx";
  CHECK(files == 2 * r.row.newton);
}

TEST_CASE("inexact forcing costs at most two extra Newton iterations on the waterflood") {
  const fs::path dir = scratch("forcing");
  Deck d = load_deck(fs::path(RESIM_DATA_DIR) / "buckley_leverett.deck");
  d.output.vtk_prefix = dir / "bl";
  d.output.report = dir / "bl_steps.csv";
  std::ostringstream log;
  RunOptions opt;
  opt.log = &log;
  // Residual-only stopping; the mass-balance gate is exercised elsewhere.
  d.sim.newton.mb_tolerance = 1.0;
  d.sim.newton.rule = ForcingRule::c;
  d.sim.newton.gamma = 1.0;
  d.sim.newton.beta = 2.0;
  const RunResult inexact = run_simulation(d, opt);
  d.sim.newton.rule = ForcingRule::fixed;
  d.sim.newton.fixed_theta = 1e-8;
  const RunResult tight = run_simulation(d, opt);
  MESSAGE("rule c: " << inexact.row.newton << " Newton, fixed 1e-8: " << tight.row.newton);
  CHECK(inexact.row.newton <= tight.row.newton + 2);
  CHECK(inexact.row.solver <= tight.row.solver);
}
