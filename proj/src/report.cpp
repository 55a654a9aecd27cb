#include "resim/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace resim {

double truncate_one_decimal(double x) { return std::floor(x * 10.0 + 1e-9) / 10.0; }

std::string format_steps(int steps, int cuts) {
  std::string s = std::to_string(steps);
  if (cuts > 0) s += "(" + std::to_string(cuts) + ")";
  return s;
}

TableRow summarize(const RunReport& report) {
  TableRow row;
  row.workers = report.workers;
  row.steps = report.step_count();
  row.cuts = report.cut_count();
  row.newton = report.newton_count();
  row.solver = report.solver_count();
  row.time = report.time_seconds();
  return row;
}

std::string format_table(const std::vector<TableRow>& rows) {
  const std::vector<std::string> head{"# Workers", "# Steps",  "# Newton",     "# Solver",
                                      "# Avg. solver", "Time (s)", "Avg. time (s)"};
  std::vector<std::vector<std::string>> cells;
  for (const TableRow& r : rows) {
    auto fixed1 = [](double v) {
      std::ostringstream s;
      s << std::fixed << std::setprecision(1) << v;
      return s.str();
    };
    cells.push_back({std::to_string(r.workers), format_steps(r.steps, r.cuts),
                     std::to_string(r.newton), std::to_string(r.solver),
                     fixed1(truncate_one_decimal(r.avg_solver())), fixed1(r.time),
                     fixed1(truncate_one_decimal(r.avg_time()))});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& v) {
    out << '|';
    for (std::size_t c = 0; c < v.size(); ++c)
      out << ' ' << std::setw(static_cast<int>(width[c])) << v[c] << " |";
    out << '\n';
  };
  line(head);
  out << '|';
  for (std::size_t c = 0; c < head.size(); ++c) out << std::string(width[c] + 2, '-') << '|';
  out << '\n';
  for (const auto& row : cells) line(row);
  return out.str();
}

void write_step_csv(const RunReport& report, std::ostream& out) {
  out << "step,t_start,dt,newton,linear,cuts,wall_s,assembly_s,solve_s,mb_oil,mb_water,mb_gas\n";
  out << std::setprecision(10);
  for (const StepRecord& s : report.steps) {
    out << s.index << ',' << s.t_start << ',' << s.dt << ',' << s.newton << ',' << s.linear << ','
        << s.cuts << ',' << s.wall_seconds << ',' << s.assembly_seconds << ',' << s.solve_seconds;
    for (Index e = 0; e < 3; ++e) {
      out << ',';
      if (e < s.mass_balance.size()) out << s.mass_balance(e);
    }
    out << '\n';
  }
}

void write_iteration_csv(const RunReport& report, std::ostream& out) {
  out << "step,attempt,newton,dt,theta,b_norm,r_norm,linear,status,contract_met\n";
  out << std::setprecision(12);
  for (const IterationRecord& r : report.iterations) {
    out << r.step << ',' << r.attempt << ',' << r.newton << ',' << r.dt << ',' << r.theta << ','
        << r.b_norm << ',' << r.r_norm << ',' << r.linear_iterations << ',' << to_string(r.status)
        << ',' << (r.contract_met ? 1 : 0) << '\n';
  }
}

}  // namespace resim
