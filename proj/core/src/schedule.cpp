#include "critheat/schedule.hpp"

#include <cmath>
#include <sstream>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"

namespace critheat {

TimeSchedule make_schedule(int n1, double beta, int jmax, PlusEdge edge) {
  if (n1 < 4) throw ConfigError("make_schedule: n1 must be at least 4");
  if (!(beta > 0.5 && beta < 1.0)) throw ConfigError("make_schedule: β must lie in (1/2, 1)");
  if (jmax < 1 || jmax > 8) throw ConfigError("make_schedule: jmax must lie in [1, 8]");
  TimeSchedule s;
  s.n1 = n1;
  s.beta = beta;
  s.jmax = jmax;
  s.plus_edge = edge;
  const double ln2 = std::log(2.0);
  for (int j = 1; j <= jmax + 1; ++j) {
    const double p = std::pow(static_cast<double>(n1), j / (1.0 - beta));
    if (!std::isfinite(p)) throw ConfigError("make_schedule: log t_j overflows; lower n1 or jmax");
    const double plus = edge == PlusEdge::doubled ? 2.0 * ln2 + 2.0 * std::log(0.5 * p + ln2)
                                                  : 2.0 * std::log(0.5 * p);
    const double minus = -2.0 * std::log(0.5 * p);
    s.log_tj.push_back(p);
    s.log_tj_plus.push_back(p + plus);
    s.log_tj_minus.push_back(p + minus);
    s.plus_offset.push_back(plus);
    s.minus_offset.push_back(minus);
  }
  for (int j = 1; j <= jmax; ++j) {
    if (!(s.minus_off(j) < 0.0 && s.plus_off(j) > 0.0 &&
          s.plus_off(j) - s.minus_off(j + 1) < s.p(j + 1) - s.p(j))) {
      std::ostringstream msg;
      msg << "make_schedule: window ordering fails at j = " << j;
      throw ConfigError(msg.str());
    }
    // (2R_j) log(2R_j) < R_{j+1} / log R_{j+1}, in logs.
    const double a = s.log_R(j) + ln2;
    const double b = s.log_R(j + 1);
    if (!(a + std::log(a) < b - std::log(b))) {
      std::ostringstream msg;
      msg << "make_schedule: radii R_" << j << ", R_" << (j + 1) << " are not separated";
      throw ConfigError(msg.str());
    }
  }
  s.log_tI = s.minus(1);
  return s;
}

void write_schedule_csv(std::ostream& os, const TimeSchedule& s) {
  CsvWriter csv(os, {"j", "log_tj_minus", "log_tj", "log_tj_plus"});
  for (int j = 1; j <= s.jmax + 1; ++j) {
    csv.cell(j).cell(s.minus(j)).cell(s.p(j)).cell(s.plus(j));
    csv.end_row();
  }
}

}  // namespace critheat
