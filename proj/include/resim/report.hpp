#ifndef RESIM_REPORT_HPP
#define RESIM_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "resim/nonlinear.hpp"

namespace resim {

/// floor(x * 10) / 10 with a small guard against representation error.
double truncate_one_decimal(double x);

/// Step count with the number of step cuts in parentheses, e.g. "40(1)".
std::string format_steps(int steps, int cuts);

struct TableRow {
  int workers = 1;
  int steps = 0;
  int cuts = 0;
  int newton = 0;
  int solver = 0;
  double time = 0.0;  // seconds

  double avg_solver() const { return newton > 0 ? static_cast<double>(solver) / newton : 0.0; }
  double avg_time() const { return newton > 0 ? time / newton : 0.0; }
};

TableRow summarize(const RunReport& report);

/// Summary table: # Workers, # Steps, # Newton, # Solver, # Avg. solver,
/// Time (s), Avg. time (s). Averages are truncated to one decimal.
std::string format_table(const std::vector<TableRow>& rows);

/// One line per accepted step.
void write_step_csv(const RunReport& report, std::ostream& out);
/// One line per Newton iteration, including those of failed attempts.
void write_iteration_csv(const RunReport& report, std::ostream& out);

}  // namespace resim

#endif  // RESIM_REPORT_HPP
