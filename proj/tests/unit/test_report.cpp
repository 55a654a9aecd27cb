#include <doctest.h>

#include <sstream>

#include "resim/report.hpp"

using namespace resim;

TEST_CASE("reference table rows follow the truncated averages") {
  struct Row {
    int newton, solver;
    double time, avg_solver, avg_time;
  };
  const Row rows[] = {
      {298, 7189, 27525.6, 24.1, 92.3},   {297, 7408, 13791.8, 24.9, 46.4},
      {322, 7467, 7044.1, 23.1, 21.8},    {294, 7609, 3445.8, 25.8, 11.7},
      {295, 2470, 43591.8, 8.3, 147.7},   {269, 2386, 20478.4, 8.8, 76.1},
      {260, 2664, 10709.8, 10.2, 41.1},   {259, 2665, 5578.7, 10.2, 21.5},
      {328, 2942, 168619.6, 8.9, 514.0},  {328, 2236, 72232.4, 6.8, 220.2},
      {341, 3194, 43206.5, 9.3, 126.7},   {327, 3123, 22588.8, 9.5, 69.0},
      {140, 586, 11827.9, 4.1, 84.4},     {129, 377, 5328.4, 2.9, 41.3},
      {122, 362, 2708.5, 2.9, 22.2},      {129, 394, 1474.2, 3.0, 11.4},
  };
  for (const Row& r : rows) {
    TableRow t;
    t.newton = r.newton;
    t.solver = r.solver;
    t.time = r.time;
    CHECK(truncate_one_decimal(t.avg_solver()) == doctest::Approx(r.avg_solver));
    CHECK(truncate_one_decimal(t.avg_time()) == doctest::Approx(r.avg_time));
  }
}

TEST_CASE("truncation") {
  CHECK(truncate_one_decimal(24.12) == doctest::Approx(24.1));
  CHECK(truncate_one_decimal(3.0) == doctest::Approx(3.0));
  CHECK(truncate_one_decimal(2.9999999999999) == doctest::Approx(3.0));
  CHECK(truncate_one_decimal(0.0) == 0.0);
}

TEST_CASE("step column and table layout") {
  CHECK(format_steps(40, 1) == "40(1)");
  CHECK(format_steps(39, 0) == "39");

  TableRow a;
  a.workers = 8;
  a.steps = 50;
  a.newton = 298;
  a.solver = 7189;
  a.time = 27525.6;
  TableRow b = a;
  b.workers = 128;
  b.steps = 40;
  b.cuts = 1;
  const std::string t = format_table({a, b});
  std::istringstream in(t);
  std::string header, rule, row1, row2;
  std::getline(in, header);
  std::getline(in, rule);
  std::getline(in, row1);
  std::getline(in, row2);
  const char* columns[] = {"# Workers", "# Steps", "# Newton", "# Solver", "# Avg. solver",
                           "Time (s)", "Avg. time (s)"};
  std::size_t pos = 0;
  for (const char* c : columns) {
    const std::size_t at = header.find(c, pos);
    REQUIRE(at != std::string::npos);
    pos = at;
  }
  CHECK(row1.find(" 24.1 ") != std::string::npos);
  CHECK(row1.find(" 27525.6 ") != std::string::npos);
  CHECK(row1.find(" 92.3 ") != std::string::npos);
  CHECK(row2.find(" 40(1) ") != std::string::npos);
}

TEST_CASE("summary and CSV agree with the records") {
  RunReport rep;
  rep.workers = 2;
  for (int i = 0; i < 3; ++i) {
    StepRecord s;
    s.index = i;
    s.dt = 1.0;
    s.newton = 2 + i;
    s.linear = 10 * (i + 1);
    s.cuts = i == 1 ? 1 : 0;
    s.wall_seconds = 0.5;
    s.mass_balance = Eigen::Vector2d(1e-12, 2e-12);
    rep.steps.push_back(s);
  }
  const TableRow row = summarize(rep);
  CHECK(row.workers == 2);
  CHECK(row.steps == 3);
  CHECK(row.cuts == 1);
  CHECK(row.newton == 9);
  CHECK(row.solver == 60);
  CHECK(row.time == doctest::Approx(1.5));
  CHECK(row.avg_solver() == doctest::Approx(60.0 / 9.0));

  std::ostringstream csv;
  write_step_csv(rep, csv);
  std::istringstream in(csv.str());
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 4);
}
