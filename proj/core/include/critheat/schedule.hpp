#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

// Window schedule for the oscillating construction, kept entirely in log-time:
// p_j = n1^{j/(1-β)}, log t_j = p_j, R_j = √t_j, and the window edges t_j^±.
namespace critheat {

enum class PlusEdge {
  doubled,  // t_j^+ = (2R_j log 2R_j)^2
  plain,    // t_j^+ = (R_j log R_j)^2
};

struct TimeSchedule {
  int n1 = 16;
  double beta = 0.75;
  int jmax = 5;
  PlusEdge plus_edge = PlusEdge::doubled;
  // Index 0 holds j = 1.
  std::vector<double> log_tj;
  std::vector<double> log_tj_plus;
  std::vector<double> log_tj_minus;
  // log t_j^± - p_j, kept separately: for large p_j the sums above round to p_j.
  std::vector<double> plus_offset;
  std::vector<double> minus_offset;
  double log_tI = 0.0;  // = log t_1^-

  double p(int j) const { return log_tj.at(static_cast<std::size_t>(j - 1)); }
  double plus(int j) const { return log_tj_plus.at(static_cast<std::size_t>(j - 1)); }
  double minus(int j) const { return log_tj_minus.at(static_cast<std::size_t>(j - 1)); }
  double plus_off(int j) const { return plus_offset.at(static_cast<std::size_t>(j - 1)); }
  double minus_off(int j) const { return minus_offset.at(static_cast<std::size_t>(j - 1)); }
  // log R_j = p_j / 2.
  double log_R(int j) const { return 0.5 * p(j); }
};

// Requires n1 >= 4, β ∈ (1/2, 1), 1 <= jmax <= 8; checks the ordering
// log t_j^- < log t_j < log t_j^+ < log t_{j+1}^- and the separation of the R_j
// (in log form). Throws ConfigError otherwise.
TimeSchedule make_schedule(int n1, double beta, int jmax, PlusEdge edge = PlusEdge::doubled);

void write_schedule_csv(std::ostream& os, const TimeSchedule& s);

}  // namespace critheat
