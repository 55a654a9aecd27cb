#include <iostream>

#include <CLI11.hpp>

#include "resim/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"resim: fully implicit black-oil and two-phase reservoir simulator"};
  app.require_subcommand(1);

  std::string deck_path;
  resim::RunOptions options;
  std::string report;
  int vtk_every = -1;
  auto* run = app.add_subcommand("run", "run a simulation deck");
  run->add_option("deck", deck_path, "input deck")->required()->check(CLI::ExistingFile);
  run->add_option("--workers", options.workers, "worker threads")->check(CLI::PositiveNumber);
  run->add_option("--report", report, "per-step CSV report");
  run->add_option("--vtk-every", vtk_every, "write a VTK snapshot every K steps")
      ->check(CLI::NonNegativeNumber);
  run->add_flag("--dump-matrices", options.dump_matrices, "write every Jacobian in Matrix Market");

  auto* echo = app.add_subcommand("echo", "print the effective parameters of a deck");
  echo->add_option("deck", deck_path, "input deck")->required()->check(CLI::ExistingFile);

  resim::SyntheticSpe10 synth;
  std::string out_dir;
  auto* gen = app.add_subcommand("synth-spe10", "write synthetic fields in the SPE10 layout");
  gen->add_option("dir", out_dir, "output directory")->required();
  gen->add_option("--nx", synth.dims[0])->check(CLI::PositiveNumber);
  gen->add_option("--ny", synth.dims[1])->check(CLI::PositiveNumber);
  gen->add_option("--nz", synth.dims[2])->check(CLI::PositiveNumber);
  gen->add_option("--seed", synth.seed);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const std::filesystem::path dir(out_dir);
      resim::write_synthetic_spe10(synth, dir / "spe_perm.dat", dir / "spe_phi.dat");
      std::cout << "wrote " << (dir / "spe_perm.dat").string() << " and "
                << (dir / "spe_phi.dat").string() << '\n';
      return 0;
    }
    const resim::Deck deck = resim::load_deck(deck_path);
    if (*echo) {
      deck.echo(std::cout);
      return 0;
    }
    if (!report.empty()) options.report = report;
    if (vtk_every >= 0) options.vtk_every = vtk_every;
    resim::run_simulation(deck, options);
    return 0;
  } catch (const resim::SimulationAbort& e) {
    std::cerr << "simulation aborted: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
