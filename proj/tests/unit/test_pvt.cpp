#include <doctest.h>

#include <array>
#include <random>

#include "resim/pvt.hpp"

using namespace resim;

TEST_CASE("table interpolation clamps flat and counts clamps") {
  const Table1D t({1.0, 2.0, 4.0}, {10.0, 20.0, 0.0});
  reset_clamp_warnings();
  CHECK(t(1.5) == doctest::Approx(15.0));
  CHECK(t(3.0) == doctest::Approx(10.0));
  CHECK(clamp_warning_count() == 0);
  CHECK(t(0.0) == 10.0);
  CHECK(t(9.0) == 0.0);
  CHECK(clamp_warning_count() == 2);
  CHECK(Table1D()(3.0) == 0.0);
  CHECK_THROWS_AS(Table1D({1.0, 1.0}, {0.0, 1.0}), ConfigError);
  CHECK_THROWS_AS(Table1D({1.0, 2.0}, {0.0}), ConfigError);
}

TEST_CASE("Corey endpoints") {
  const CoreyTwoPhase c;
  CHECK(krw(0.2, c) == 0.0);
  CHECK(krw(0.8, c) == 1.0);
  CHECK(kro_two_phase(0.2, c) == 1.0);
  CHECK(kro_two_phase(0.8, c) == 0.0);
  CHECK(krw(0.5, c) == doctest::Approx(0.25));
  CHECK(kro_two_phase(0.5, c) == doctest::Approx(0.25));
}

TEST_CASE("Stone II matches the independent evaluation") {
  const PvtModel m = default_black_oil();
  CHECK(kro_stone2(0.3, 0.2, m.relperm) == doctest::Approx(0.14725).epsilon(1e-12));
  CHECK(kro_stone2(0.35, 0.15, m.relperm) == doctest::Approx(0.2183125).epsilon(1e-12));
  CHECK(kro_stone2(0.12, 0.0, m.relperm) == doctest::Approx(1.0));
  CHECK(kro_stone2(0.9, 0.05, m.relperm) == 0.0);
}

TEST_CASE("live oil densities") {
  const PvtModel m = default_black_oil();
  const auto sat = evaluate_fluid(m, 2264.7, 0.2, 0.1, 2264.7);
  CHECK(sat.rho_oo == doctest::Approx(33.45826235093697).epsilon(1e-12));
  CHECK(sat.rho_og == doctest::Approx(5.183747255380203).epsilon(1e-12));
  CHECK(sat.rho_o == doctest::Approx(38.642009606317174).epsilon(1e-12));
  const auto under = evaluate_fluid(m, 3500.0, 0.2, 0.0, 2264.7);
  CHECK(under.rho_oo == doctest::Approx(34.03424463376337).epsilon(1e-12));
  CHECK(under.rho_og == doctest::Approx(5.272985200448361).epsilon(1e-12));
  CHECK(under.rho_o == doctest::Approx(39.30722983421173).epsilon(1e-12));
  CHECK(phase_density(Phase::oil, 3500.0, 2264.7, 0.2, 0.0, m) == under.rho_o);
}

TEST_CASE("properties stay positive and saturations sum to one") {
  const PvtModel m = default_black_oil();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> p(500.0, 8000.0), sw(0.12, 0.8), sg(0.0, 0.3);
  for (int n = 0; n < 500; ++n) {
    const double po = p(rng), s_w = sw(rng), s_g = std::min(sg(rng), 1.0 - s_w);
    const auto f = evaluate_fluid(m, po, s_w, s_g, std::min(po, 4014.7));
    CHECK(f.s_w + f.s_o + f.s_g == doctest::Approx(1.0));
    CHECK(f.rho_w > 0.0);
    CHECK(f.rho_o > 0.0);
    CHECK(f.rho_g > 0.0);
    CHECK(f.mu_o > 0.0);
    CHECK(f.mu_g > 0.0);
    CHECK(f.kr_w >= 0.0);
    CHECK(f.kr_o >= 0.0);
    CHECK(f.kr_g >= 0.0);
  }
}

TEST_CASE("property derivatives agree with central differences") {
  const PvtModel m = default_black_oil();
  const auto pick = [](const auto& f) {
    return std::array{f.rho_w, f.rho_oo, f.rho_og, f.rho_g, f.mu_o, f.mu_g, f.s_o, f.kr_o};
  };
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> p(1200.0, 6000.0), sw(0.15, 0.6), sg(0.03, 0.25);
  for (int n = 0; n < 100; ++n) {
    const bool saturated = n % 2 == 0;
    const double x0[3] = {p(rng), sw(rng), 0.0};
    double x[3] = {x0[0], x0[1], saturated ? sg(rng) : x0[0] - 300.0};
    const auto ad = pick(property_derivatives(x[0], x[1], x[2], saturated, m));
    const double h[3] = {1e-3, 1e-7, saturated ? 1e-7 : 1e-3};
    for (int s = 0; s < 3; ++s) {
      double up[3] = {x[0], x[1], x[2]};
      double dn[3] = {x[0], x[1], x[2]};
      up[s] += h[s];
      dn[s] -= h[s];
      const auto fu = pick(evaluate_cell_fluid(m, up[0], up[1], up[2], saturated));
      const auto fdn = pick(evaluate_cell_fluid(m, dn[0], dn[1], dn[2], saturated));
      for (std::size_t q = 0; q < ad.size(); ++q) {
        const double fd = (fu[q] - fdn[q]) / (2.0 * h[s]);
        CHECK(ad[q].derivatives()(s) == doctest::Approx(fd).epsilon(1e-5).scale(1e-6));
      }
    }
  }
}

TEST_CASE("pvt validation rejects bad data") {
  PvtModel m = default_black_oil();
  m.rs = Table1D({14.7, 1000.0}, {0.5, 0.4});
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = default_black_oil();
  m.bo = Table1D({14.7, 1000.0}, {1.0, -0.1});
  CHECK_THROWS_AS(m.validate(), ConfigError);
  m = default_two_phase();
  m.corey.s_wc = 0.6;
  m.corey.s_or = 0.5;
  CHECK_THROWS_AS(m.validate(), ConfigError);
  CHECK_NOTHROW(default_black_oil().validate());
  CHECK_NOTHROW(default_two_phase().validate());
}
