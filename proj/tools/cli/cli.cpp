#include "cli/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "critheat/csv.hpp"
#include "critheat/duhamel.hpp"
#include "critheat/errors.hpp"
#include "critheat/heat_tail.hpp"
#include "critheat/oscillation.hpp"
#include "critheat/pde_sim.hpp"
#include "critheat/profiles.hpp"
#include "critheat/scaling_dynamics.hpp"
#include "critheat/schedule.hpp"
#include "critheat/spectrum.hpp"

namespace critheat::cli {

namespace fs = std::filesystem;

std::vector<int> parse_windows(const std::string& text) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || v < 1) throw ConfigError("bad window list: " + text);
    return v;
  };
  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const int a = to_int(text.substr(0, dots));
    const int b = to_int(text.substr(dots + 2));
    if (b < a) throw ConfigError("bad window range: " + text);
    for (int j = a; j <= b; ++j) out.push_back(j);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int(item));
  if (out.empty()) throw ConfigError("empty window list");
  return out;
}

fs::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("CRITHEAT_OUT"); env != nullptr && *env != '\0') return env;
  return "out";
}

void write_verdicts_jsonl(const fs::path& path, const std::vector<Verdict>& verdicts) {
  auto os = open_output(path);
  for (const auto& v : verdicts) {
    nlohmann::json j;
    j["check"] = v.check;
    j["pass"] = v.pass;
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    j["tol"] = v.tol;
    j["anchor"] = v.anchor;
    os << j.dump() << '\n';
  }
}

namespace {

struct Common {
  std::string out_flag;
  bool quick = false;
  fs::path out;
};

Verdict at_most(std::string check, double lhs, double rhs, std::string anchor, double tol = 0.0) {
  return Verdict{std::move(check), lhs <= rhs + tol, lhs, rhs, tol, std::move(anchor)};
}

Verdict at_least(std::string check, double lhs, double rhs, std::string anchor) {
  return Verdict{std::move(check), lhs >= rhs, lhs, rhs, 0.0, std::move(anchor)};
}

double spread(const std::vector<double>& v) {
  double lo = INFINITY, hi = 0.0;
  for (double x : v) {
    lo = std::min(lo, std::abs(x));
    hi = std::max(hi, std::abs(x));
  }
  return lo > 0.0 ? hi / lo : INFINITY;
}

std::string suffixed(const std::string& stem, const std::string& tag) {
  return tag.empty() ? stem + ".csv" : stem + "_" + tag + ".csv";
}

// ---------------------------------------------------------------- profiles

struct ProfilesOpts {
  double r_max = 1e4;
  double tol = 1e-10;
  std::size_t nodes = 2000;
};

double t1_residual(const RadialProfile& T1, double r) {
  const double h = 1e-2 * r;
  const double f[5] = {T1(r - 2 * h), T1(r - h), T1(r), T1(r + h), T1(r + 2 * h)};
  const double d1 = (f[0] - 8 * f[1] + 8 * f[3] - f[4]) / (12 * h);
  const double d2 = (-f[0] + 16 * f[1] - 30 * f[2] + 16 * f[3] - f[4]) / (12 * h * h);
  return d2 + 5.0 / r * d1 + profiles::eval_potential(r) * f[2] + profiles::eval_LambdaQ(r);
}

std::vector<Verdict> run_profiles(const ProfilesOpts& o, const Common& c) {
  profiles::BuildOptions bo;
  bo.nodes = o.nodes;
  const RadialProfile gamma = profiles::build_Gamma(o.r_max, o.tol, bo);
  const RadialProfile T1 = profiles::build_T1(gamma, o.tol);

  {
    auto os = open_output(c.out / "profiles.csv");
    CsvWriter csv(os, {"r", "Q", "LambdaQ", "T1"});
    for (double r : T1.radii()) {
      csv.cell(r).cell(profiles::eval_Q(r)).cell(profiles::eval_LambdaQ(r)).cell(T1(r));
      csv.end_row();
    }
  }
  {
    auto os = open_output(c.out / "gamma.csv");
    gamma.write_csv(os, "Gamma");
  }

  std::vector<Verdict> vs;
  double w_err = 0.0;
  for (double r : {1.0, 10.0, 100.0, 1000.0}) {
    const auto& g = gamma.radii();
    const auto it = std::lower_bound(g.begin(), g.end(), r);
    w_err = std::max(w_err, std::abs(profiles::wronskian(gamma, *it) - 1.0));
  }
  vs.push_back(at_most("profiles.wronskian_unit", w_err, 1e-6, "unit Wronskian of (Lambda Q, Gamma)"));
  const double t1k = T1(1e3);
  vs.push_back(at_most("profiles.T1_at_1e3", std::abs(t1k - profiles::kT1Limit), 1e-4, "T1 tends to 4/5"));
  const double lq_sup = 2.0;  // ΛQ(0)
  double res = 0.0;
  for (double r : {0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0, 1000.0}) res = std::max(res, std::abs(t1_residual(T1, r)));
  vs.push_back(at_most("profiles.T1_equation_residual", res, 1e-6 * lq_sup, "H T1 = -Lambda Q"));
  return vs;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOpts {
  std::vector<double> radii{10, 20, 40, 80};
  std::size_t nodes_per_unit = 60;
};

std::vector<Verdict> run_spectrum(const SpectrumOpts& o, const Common& c) {
  const auto rows = spectrum::scaling_report(o.radii, o.nodes_per_unit);
  {
    auto os = open_output(c.out / "spectrum_scaling.csv");
    spectrum::write_scaling_csv(os, rows);
  }
  std::vector<Verdict> vs;
  double mu1_max = -INFINITY;
  std::vector<double> m2, m3, wsup;
  for (const auto& r : rows) {
    mu1_max = std::max(mu1_max, r.mu1);
    m2.push_back(r.mu2R4);
    m3.push_back(r.mu3R3);
    wsup.push_back(r.psi2_weighted_sup);
  }
  vs.push_back(at_most("spectrum.mu1_negative", mu1_max, 0.0, "unique negative eigenvalue"));
  if (rows.size() >= 2) {
    const double a = rows[rows.size() - 2].mu1, b = rows.back().mu1;
    vs.push_back(at_most("spectrum.mu1_stable", std::abs(b - a) / std::abs(b), 0.02, "negative eigenvalue has a limit"));
    vs.push_back(at_most("spectrum.psi2_weighted_bounded", wsup.back() / wsup[wsup.size() - 2], 1.25,
                         "second eigenfunction decays like r^-4"));
  }
  auto min_over_median = [](std::vector<double> v) {
    const double mn = *std::min_element(v.begin(), v.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    const double med = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    return mn / med;
  };
  const double min2 = *std::min_element(m2.begin(), m2.end());
  const double min3 = *std::min_element(m3.begin(), m3.end());
  vs.push_back(at_least("spectrum.mu2R4_positive", min2, 0.0, "second eigenvalue scales like R^-4"));
  vs.push_back(at_least("spectrum.mu2R4_min_over_median", min_over_median(m2), 0.3, "second eigenvalue scales like R^-4"));
  vs.push_back(at_least("spectrum.mu3R3_positive", min3, 0.0, "third eigenvalue lower bound R^-3"));
  vs.push_back(at_least("spectrum.mu3R3_min_over_median", min_over_median(m3), 0.3, "third eigenvalue lower bound R^-3"));
  return vs;
}

// ---------------------------------------------------------------- tail

struct TailOpts {
  std::string datum = "monotone";
  double beta = 0.75;
  double gamma = 2.0;
  std::string windows = "1..3";
  std::vector<double> radii{10, 1e4, 1e7, 1e10};
  int samples = 16;
  std::vector<double> times{1e6, 1e8, 1e10};
};

std::vector<Verdict> run_tail_monotone(const TailOpts& o, const Common& c) {
  const RadialDatum d = as_datum(heat_tail::build_theta0(o.beta, o.gamma));
  const double A1 = heat_tail::A1_constant();
  std::vector<Verdict> vs;
  vs.push_back(at_most("tail.A1", std::abs(A1 - 0.125), 1e-8, "Gaussian moment constant A1 = 1/8"));

  std::vector<heat_tail::HeatSample> samples;
  std::vector<double> dev;
  auto os = open_output(c.out / "tail_prefactor.csv");
  CsvWriter csv(os, {"t", "ratio_logt", "ratio_logsqrt_t", "deviation_times_logt"});
  double worst_bound = 0.0;
  for (double t : o.times) {
    const auto s = heat_tail::theta_origin(d, t);
    samples.push_back(s);
    const double L = std::log(t);
    const double r1 = s.value_times_t * std::pow(L, o.beta) / A1;
    const double r2 = s.value_times_t * std::pow(0.5 * L, o.beta) / A1;
    dev.push_back((r2 - 1.0) * L);
    worst_bound = std::max(worst_bound, std::abs(s.value_times_t) * std::pow(L, o.beta) / (2.0 * A1));
    csv.cell(t).cell(r1).cell(r2).cell(dev.back());
    csv.end_row();
    std::cout << "  t=" << t << " theta*t*(log t)^beta/A1=" << r1 << " theta*t*(log sqrt t)^beta/A1=" << r2 << '\n';
  }
  {
    auto so = open_output(c.out / "tail_samples.csv");
    heat_tail::write_samples_csv(so, samples);
  }
  vs.push_back(at_most("tail.monotone.bound_2A1", worst_bound, 1.0, "|theta(0,t)| < 2 A1 / (t (log t)^beta)"));
  if (dev.size() >= 2)
    vs.push_back(at_most("tail.monotone.deviation_logt_stable", spread(dev), 2.0, "relative error decays like 1/log t"));
  return vs;
}

std::vector<Verdict> run_tail_oscillating(const TailOpts& o, const Common& c) {
  const auto datum = heat_tail::build_Theta0(o.beta, o.radii, o.gamma);
  const int samples = c.quick ? std::max(4, o.samples / 4) : o.samples;
  std::vector<heat_tail::WindowReport> reports;
  std::vector<Verdict> vs;
  std::vector<double> devs;
  for (int j : parse_windows(o.windows)) {
    reports.push_back(heat_tail::window_check(datum, j, samples));
    const auto& r = reports.back();
    vs.push_back(Verdict{"tail.window_sign.j" + std::to_string(j), r.sign_ok, static_cast<double>(r.expected_sign),
                         static_cast<double>(r.rows.front().sign), 0.0, "theta(0,t) has sign (-1)^j on window j"});
    devs.push_back(r.max_abs_deviation_times_logt);
    auto os = open_output(c.out / ("tail_window_" + std::to_string(j) + ".csv"));
    heat_tail::write_window_csv(os, std::span(&reports.back(), 1));
  }
  auto os = open_output(c.out / "tail_windows.csv");
  heat_tail::write_window_csv(os, reports);
  if (devs.size() >= 2)
    vs.push_back(at_most("tail.window_deviation_logt_stable", spread(devs), 2.0, "window error decays like 1/log t"));
  return vs;
}

std::vector<Verdict> run_tail(const TailOpts& o, const Common& c) {
  if (o.datum == "monotone") return run_tail_monotone(o, c);
  return run_tail_oscillating(o, c);
}

// ---------------------------------------------------------------- duhamel

struct DuhamelOpts {
  std::vector<double> gammas{1, 2};
  std::vector<double> qs{-1, 0, 1};
  std::string region = "all";
  double t0 = 10.0;
  double K1 = 1.0;
  std::vector<double> times{200, 632.45553203367592, 2000};
};

std::vector<Verdict> run_duhamel(const DuhamelOpts& o, const Common& c) {
  std::vector<duhamel::ForcingSpec> cases;
  for (double g : o.gammas)
    for (double q : o.qs) {
      duhamel::ForcingSpec f;
      f.gamma = g;
      f.q = q;
      f.K1 = o.K1;
      f.t0 = o.t0;
      if (o.region == "inner" || o.region == "all") cases.push_back(f);
      f.region = duhamel::Region::outer;
      if (o.region == "outer" || (o.region == "all" && g == 2.0 && q <= 0.0)) cases.push_back(f);
    }
  const std::vector<double> xi_inner = c.quick ? std::vector<double>{0, 2} : std::vector<double>{0, 0.5, 2};
  const std::vector<double> xi_outer = c.quick ? std::vector<double>{0, 2, 10} : std::vector<double>{0, 0.5, 2, 10};
  std::vector<duhamel::BoundReport> reports;
  std::vector<Verdict> vs;
  for (const auto& f : cases) {
    const bool inner = f.region == duhamel::Region::inner;
    reports.push_back(duhamel::bound_report(f, o.times, inner ? xi_inner : xi_outer));
    std::ostringstream name;
    name << "duhamel." << (inner ? "inner" : "outer") << ".gamma" << f.gamma << ".q" << f.q << ".spread";
    const double w = reports.back().worst_spread;
    vs.push_back(Verdict{name.str(), w < 2.0, w, 2.0, 0.0,
                         inner ? "Duhamel bound for inner forcing, independent of t0"
                               : "Duhamel bound for outer forcing, independent of t0"});
  }
  auto os = open_output(c.out / "duhamel_bounds.csv");
  duhamel::write_bound_csv(os, reports);
  return vs;
}

// ---------------------------------------------------------------- lambda

struct LambdaOpts {
  int n1 = 16;
  int jmax = 5;
  double beta = 0.75;
  double beta_prime = 1.2;
  double C1 = 1.0;
  std::string D = "zero";
  std::uint64_t seed = 1;
  std::string gap = "alternating";
  bool modulation = false;
};

const std::map<std::string, scaling::DKind> kDKinds{{"zero", scaling::DKind::zero},
                                                    {"envelope+", scaling::DKind::envelope_plus},
                                                    {"envelope-", scaling::DKind::envelope_minus},
                                                    {"random", scaling::DKind::random}};
const std::map<std::string, scaling::GapKind> kGapKinds{{"zero", scaling::GapKind::zero},
                                                        {"envelope+", scaling::GapKind::envelope_plus},
                                                        {"envelope-", scaling::GapKind::envelope_minus},
                                                        {"alternating", scaling::GapKind::alternating},
                                                        {"random", scaling::GapKind::random}};

std::vector<Verdict> run_lambda(const LambdaOpts& o, const Common& c, const std::string& tag = "") {
  const TimeSchedule s = make_schedule(o.n1, o.beta, o.jmax);
  scaling::RateConfig rc;
  rc.C1 = o.C1;
  rc.beta_prime = o.beta_prime;
  rc.d = kDKinds.at(o.D);
  rc.gap = kGapKinds.at(o.gap);
  rc.seed = o.seed;
  const auto traj = scaling::integrate_piecewise(s, rc);
  std::vector<Verdict> vs = scaling::check_window_bounds(traj, s, rc);
  for (auto&& group : {scaling::check_telescoping(traj, s, rc), scaling::check_trajectory(traj, s, rc)})
    vs.insert(vs.end(), group.begin(), group.end());
  if (!tag.empty())
    for (auto& v : vs) v.check = tag + "." + v.check;
  {
    auto os = open_output(c.out / suffixed("lambda_trajectory", tag));
    scaling::write_trajectory_csv(os, traj);
  }
  {
    auto os = open_output(c.out / suffixed("lambda_verdicts", tag));
    scaling::write_verdict_csv(os, vs);
  }
  {
    auto os = open_output(c.out / suffixed("schedule", tag));
    write_schedule_csv(os, s);
  }
  return vs;
}

std::vector<Verdict> run_modulation(double beta_prime, const Common& c) {
  const double R = 20.0;
  const auto pairs = spectrum::eig(spectrum::discretize(R, 2000), 2);
  const scaling::SyntheticOuterField W{beta_prime};
  auto os = open_output(c.out / "modulation.csv");
  CsvWriter csv(os, {"t", "rhs", "C"});
  std::vector<double> Cs;
  for (double e = 4.0; e <= 5.0 + 1e-12; e += c.quick ? 0.5 : 0.25) {
    const double t = std::pow(10.0, e);
    const double rhs = scaling::modulation_rhs(W, 1.0, t, pairs[1], R);
    Cs.push_back(std::abs(rhs) * t * std::pow(std::log(t), beta_prime));
    csv.cell(t).cell(rhs).cell(Cs.back());
    csv.end_row();
  }
  return {at_most("modulation.C_spread", spread(Cs), 2.0, "modulation forcing at most C t^-1 (log t)^-beta'")};
}

// ---------------------------------------------------------------- simulate

struct SimulateOpts {
  std::string mode = "heat";
  double beta = 0.75;
  double h0 = 0.0;
  double growth = 0.0;
  double r_max = 0.0;
  double rtol = 0.0;
  double t_end = 100.0;
  std::string windows = "1..2";
  std::vector<double> radii{10, 1e4, 1e7, 1e10};
};

double pick(double flag, double fallback) { return flag > 0.0 ? flag : fallback; }

double center_at(const pde::RunResult& r, double t) {
  for (std::size_t k = 1; k < r.steps.size(); ++k) {
    if (r.steps[k].t < t) continue;
    const auto& a = r.steps[k - 1];
    const auto& b = r.steps[k];
    return a.u0 + (t - a.t) / (b.t - a.t) * (b.u0 - a.u0);
  }
  throw RangeError("run does not reach the requested time");
}

Verdict energy_verdict(const std::string& name, const pde::RunResult& r) {
  const double scale = std::max(1.0, std::abs(r.steps.front().energy));
  return at_most(name, r.max_energy_increase, 0.0, "energy is nonincreasing", 1e-12 * scale);
}

std::vector<Verdict> simulate_heat(const SimulateOpts& o, const Common& c) {
  const RadialDatum d = as_datum(heat_tail::build_theta0(o.beta));
  const pde::Grid g = pde::make_graded_grid(pick(o.h0, c.quick ? 0.02 : 0.01), pick(o.r_max, 200.0),
                                            pick(o.growth, c.quick ? 1.02 : 1.01));
  pde::SimConfig sc;
  sc.t_start = 0.0;
  sc.horizon = o.t_end;
  sc.nonlinear = false;
  sc.rtol = pick(o.rtol, 1e-8);
  const auto res = pde::run(g, sc, pde::sample(g, [&](double r) { return d(r); }));
  {
    auto os = open_output(c.out / "sim_heat.csv");
    pde::write_run_csv(os, res);
  }
  double worst = 0.0;
  for (double f : {0.1, std::sqrt(0.1), 1.0}) {
    const double t = f * o.t_end;
    worst = std::max(worst, std::abs(center_at(res, t) / heat_tail::theta_origin(d, t).value - 1.0));
  }
  return {at_most("simulate.heat.matches_quadrature", worst, 1e-3, "free heat flow of the monotone datum"),
          energy_verdict("simulate.heat.energy", res)};
}

std::vector<Verdict> simulate_stationary(const SimulateOpts& o, const Common& c) {
  const pde::Grid base = pde::make_graded_grid(pick(o.h0, 0.1), pick(o.r_max, 200.0), pick(o.growth, 1.05));
  auto os = open_output(c.out / "sim_stationary.csv");
  CsvWriter csv(os, {"level", "M", "h_min", "residual", "order"});
  double prev = 0.0, order = 0.0;
  const int levels = c.quick ? 3 : 4;
  for (int lev = 0; lev < levels; ++lev) {
    const pde::Grid g = lev == 0 ? base : pde::refine(base, 1 << lev);
    const auto u = pde::sample(g, [](double r) { return profiles::eval_Q(r); });
    const auto rep = pde::residual(g, u, u, 0.0, {1.0, 1e4, 5.0});
    double m = 0.0;
    for (std::size_t i = 0; i < g.M; ++i)
      if (g.r[i] < 50.0) m = std::max(m, rep.pointwise[i]);
    if (prev > 0.0) order = std::log2(prev / m);
    csv.cell(lev).cell(g.M).cell(g.h_min()).cell(m).cell(lev ? order : 0.0);
    csv.end_row();
    prev = m;
  }
  // Short nonlinear run from a perturbed ground state.
  pde::SimConfig sc;
  sc.t_start = 1.0;
  sc.horizon = 5.0;
  sc.rtol = 1e-6;
  const auto res = pde::run(base, sc, pde::sample(base, [](double r) { return 0.9 * profiles::eval_Q(r); }));
  {
    auto rs = open_output(c.out / "sim_ground_state.csv");
    pde::write_run_csv(rs, res);
  }
  return {at_least("simulate.stationary.order", order, 1.7, "ground state is stationary"),
          energy_verdict("simulate.ground_state.energy", res)};
}

std::vector<Verdict> simulate_covariance(const SimulateOpts& o, const Common& c) {
  // u0 = 0.5 Q evolved to T against its λ = 2 rescaling evolved to 4T, on
  // nested grids with h and h/2 to size the discretization error.
  const double T = 1.0, lam = 2.0;
  const pde::Grid g = pde::make_graded_grid(pick(o.h0, 0.05), pick(o.r_max, 100.0), pick(o.growth, 1.03));
  pde::SimConfig sc;
  sc.rtol = pick(o.rtol, 1e-8);
  auto evolve = [&](const pde::Grid& grid, double l, double horizon) {
    sc.horizon = horizon;
    const auto r = pde::run(grid, sc, pde::sample(grid, [&](double x) { return 0.5 * profiles::eval_Q(x / l) / (l * l); }));
    return r.final.u0;
  };
  const pde::Grid fine = pde::refine(g);
  const double u1 = evolve(g, 1.0, T), u2 = evolve(g, lam, lam * lam * T) * lam * lam;
  const double f1 = evolve(fine, 1.0, T), f2 = evolve(fine, lam, lam * lam * T) * lam * lam;
  const double cov = std::abs(u2 - u1) / std::abs(u1);
  const double disc = (std::abs(u1 - f1) + std::abs(u2 - f2)) / std::abs(u1);
  auto os = open_output(c.out / "sim_covariance.csv");
  CsvWriter csv(os, {"lambda", "u0_coarse", "u0_fine"});
  csv.cell(1.0).cell(u1).cell(f1);
  csv.end_row();
  csv.cell(lam).cell(u2).cell(f2);
  csv.end_row();
  return {at_most("simulate.scaling_covariance", cov, disc, "scaling invariance u -> l^-2 u(x/l, t/l^2)")};
}

std::vector<Verdict> simulate_oscillation(const SimulateOpts& o, const Common& c) {
  const auto datum = heat_tail::build_Theta0(o.beta, o.radii);
  std::vector<Verdict> vs;
  for (int j : parse_windows(o.windows)) {
    oscillation::OscillationConfig oc;
    oc.window = j;
    if (o.h0 > 0.0) oc.h0 = o.h0;
    if (o.growth > 0.0) oc.growth = o.growth;
    if (o.rtol > 0.0) oc.rtol = o.rtol;
    const auto rep = oscillation::oscillation_demo(datum, oc);
    const std::string w = std::to_string(j);
    {
      auto os = open_output(c.out / ("sim_oscillation_" + w + ".csv"));
      pde::write_run_csv(os, rep.run);
    }
    {
      auto os = open_output(c.out / ("oscillation_trend_" + w + ".csv"));
      oscillation::write_trend_csv(os, rep);
    }
    std::cout << "  window " << j << ": b sign " << rep.expected_sign << ", alpha " << rep.alpha << ", dlog lambda "
              << rep.loglambda_change << " (predicted " << rep.predicted_loglambda_change << "), control error "
              << rep.control_rel_error << '\n';
    vs.push_back(at_least("simulate.oscillation.trend_agreement.j" + w, rep.agreement, 0.9,
                          "d log lambda/dt has the sign of (5/4) b(t)"));
    vs.push_back(energy_verdict("simulate.oscillation.energy.j" + w, rep.run));
  }
  return vs;
}

std::vector<Verdict> run_simulate(const SimulateOpts& o, const Common& c) {
  if (o.mode == "heat") return simulate_heat(o, c);
  if (o.mode == "stationary") return simulate_stationary(o, c);
  if (o.mode == "covariance") return simulate_covariance(o, c);
  return simulate_oscillation(o, c);
}

// ---------------------------------------------------------------- verify-all

std::vector<Verdict> run_verify_all(double beta, const Common& c) {
  std::vector<Verdict> all;
  auto add = [&](const char* name, std::vector<Verdict> vs) {
    std::cout << "[" << name << "] " << vs.size() << " checks\n";
    all.insert(all.end(), vs.begin(), vs.end());
  };
  add("profiles", run_profiles({}, c));
  add("spectrum", run_spectrum({}, c));
  TailOpts mono;
  mono.beta = beta;
  add("tail monotone", run_tail(mono, c));
  TailOpts osc = mono;
  osc.datum = "oscillating";
  add("tail oscillating", run_tail(osc, c));
  add("duhamel", run_duhamel({}, c));
  const std::vector<std::pair<std::string, std::uint64_t>> ds{
      {"zero", 1}, {"envelope+", 1}, {"envelope-", 1}, {"random", 1}, {"random", 2}, {"random", 3}, {"random", 4}, {"random", 5}};
  for (const auto& [kind, seed] : ds) {
    LambdaOpts lo;
    lo.beta = beta;
    lo.D = kind;
    lo.seed = seed;
    std::string tag = kind == "random" ? "random" + std::to_string(seed) : kind;
    std::replace(tag.begin(), tag.end(), '+', 'p');
    std::replace(tag.begin(), tag.end(), '-', 'm');
    add(("lambda " + tag).c_str(), run_lambda(lo, c, tag));
  }
  add("modulation", run_modulation(1.2, c));
  for (const char* mode : {"heat", "stationary", "covariance", "oscillation"}) {
    SimulateOpts so;
    so.beta = beta;
    so.mode = mode;
    add(mode, run_simulate(so, c));
  }
  return all;
}

int report(const std::vector<Verdict>& vs, const Common& c) {
  write_verdicts_jsonl(c.out / "verdicts.jsonl", vs);
  std::size_t failed = 0;
  for (const auto& v : vs) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.check << "  lhs=" << v.lhs << " rhs=" << v.rhs << '\n';
    failed += v.pass ? 0 : 1;
  }
  std::cout << vs.size() - failed << "/" << vs.size() << " checks passed; verdicts in " << (c.out / "verdicts.jsonl").string()
            << '\n';
  return failed == 0 ? kExitOk : kExitVerdictFailed;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Numerical checks for oscillating solutions of the 6D energy-critical heat equation", "critheat"};
  app.set_config("--config", "", "flat key = value file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--out", common.out_flag, "output directory (default: $CRITHEAT_OUT, then ./out)");
  app.add_flag("--quick", common.quick, "reduced grids");

  ProfilesOpts po;
  auto* profiles_cmd = app.add_subcommand("profiles", "ground state, Gamma and T1 profiles");
  profiles_cmd->add_option("--r-max", po.r_max)->check(CLI::Range(100.0, 1e8));
  profiles_cmd->add_option("--tol", po.tol)->check(CLI::Range(1e-14, 1e-4));
  profiles_cmd->add_option("--nodes", po.nodes)->check(CLI::Range(200, 1000000));

  SpectrumOpts so;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Dirichlet eigenvalues of -H on balls");
  spectrum_cmd->add_option("--R", so.radii, "comma list of radii, ascending, >= 10")->delimiter(',')->check(CLI::Range(10.0, 1e4));
  spectrum_cmd->add_option("--nodes-per-unit", so.nodes_per_unit)->check(CLI::Range(50, 10000));

  TailOpts to;
  auto* tail_cmd = app.add_subcommand("tail", "free heat flow of the initial data");
  tail_cmd->add_option("--datum", to.datum)->check(CLI::IsMember({"monotone", "oscillating"}));
  tail_cmd->add_option("--beta", to.beta)->check(CLI::Range(0.5, 1.0));
  tail_cmd->add_option("--gamma", to.gamma)->check(CLI::Range(0.5, 5.9));
  tail_cmd->add_option("--windows", to.windows, "window indices, e.g. 1..3");
  tail_cmd->add_option("--R", to.radii, "blend radii of the oscillating datum")->delimiter(',')->check(CLI::PositiveNumber);
  tail_cmd->add_option("--samples", to.samples)->check(CLI::Range(2, 1000));
  tail_cmd->add_option("--times", to.times)->delimiter(',')->check(CLI::Range(10.0, 1e300));

  DuhamelOpts dopt;
  auto* duhamel_cmd = app.add_subcommand("duhamel", "Duhamel bound constants");
  duhamel_cmd->add_option("--gamma", dopt.gammas)->delimiter(',')->check(CLI::Range(0.05, 2.95));
  duhamel_cmd->add_option("--q", dopt.qs)->delimiter(',')->check(CLI::Range(-10.0, 10.0));
  duhamel_cmd->add_option("--region", dopt.region)->check(CLI::IsMember({"inner", "outer", "all"}));
  duhamel_cmd->add_option("--t0", dopt.t0)->check(CLI::Range(2.8, 1e6));
  duhamel_cmd->add_option("--K1", dopt.K1)->check(CLI::PositiveNumber);
  duhamel_cmd->add_option("--times", dopt.times)->delimiter(',')->check(CLI::PositiveNumber);

  LambdaOpts lo;
  auto* lambda_cmd = app.add_subcommand("lambda", "scaling parameter dynamics in log time");
  lambda_cmd->add_option("--n1", lo.n1)->check(CLI::Range(4, 1024));
  lambda_cmd->add_option("--jmax", lo.jmax)->check(CLI::Range(1, 8));
  lambda_cmd->add_option("--beta", lo.beta)->check(CLI::Range(0.5, 1.0));
  lambda_cmd->add_option("--beta-prime", lo.beta_prime)->check(CLI::Range(1.0, 10.0));
  lambda_cmd->add_option("--C1", lo.C1)->check(CLI::NonNegativeNumber);
  lambda_cmd->add_option("--D", lo.D)->check(CLI::IsMember({"zero", "envelope+", "envelope-", "random"}));
  lambda_cmd->add_option("--seed", lo.seed);
  lambda_cmd->add_option("--gap", lo.gap)->check(CLI::IsMember({"zero", "envelope+", "envelope-", "alternating", "random"}));
  lambda_cmd->add_flag("--modulation", lo.modulation, "also check the modulation forcing");

  SimulateOpts sopt;
  auto* simulate_cmd = app.add_subcommand("simulate", "radial PDE runs");
  simulate_cmd->add_option("--mode", sopt.mode)->check(CLI::IsMember({"heat", "stationary", "covariance", "oscillation"}));
  simulate_cmd->add_option("--beta", sopt.beta)->check(CLI::Range(0.5, 1.0));
  simulate_cmd->add_option("--h0", sopt.h0)->check(CLI::Range(1e-4, 1.0));
  simulate_cmd->add_option("--growth", sopt.growth)->check(CLI::Range(1.0001, 1.5));
  simulate_cmd->add_option("--r-max", sopt.r_max)->check(CLI::Range(10.0, 1e6));
  simulate_cmd->add_option("--rtol", sopt.rtol)->check(CLI::Range(1e-12, 1e-2));
  simulate_cmd->add_option("--t-end", sopt.t_end)->check(CLI::Range(1e-3, 1e4));
  simulate_cmd->add_option("--windows", sopt.windows);
  simulate_cmd->add_option("--R", sopt.radii)->delimiter(',')->check(CLI::PositiveNumber);

  double beta_all = 0.75;
  auto* verify_cmd = app.add_subcommand("verify-all", "every module check; exit 0 iff all pass");
  verify_cmd->add_option("--beta", beta_all)->check(CLI::Range(0.5, 1.0));

  try {
    app.parse(argc, argv);
    for (const auto& w : {to.windows, sopt.windows}) parse_windows(w);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "critheat: " << e.what() << '\n';
    return kExitUsage;
  }

  common.out = resolve_out_dir(common.out_flag);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fs::create_directories(common.out);
    std::vector<Verdict> vs;
    if (*profiles_cmd) vs = run_profiles(po, common);
    if (*spectrum_cmd) vs = run_spectrum(so, common);
    if (*tail_cmd) vs = run_tail(to, common);
    if (*duhamel_cmd) vs = run_duhamel(dopt, common);
    if (*lambda_cmd) {
      vs = run_lambda(lo, common);
      if (lo.modulation) {
        auto m = run_modulation(lo.beta_prime, common);
        vs.insert(vs.end(), m.begin(), m.end());
      }
    }
    if (*simulate_cmd) vs = run_simulate(sopt, common);
    if (*verify_cmd) vs = run_verify_all(beta_all, common);
    const int code = report(vs, common);
    std::cout << "elapsed " << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return code;
  } catch (const std::exception& e) {
    std::cerr << "critheat: error: " << e.what() << '\n';
    return kExitModuleError;
  }
}

int dispatch(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace critheat::cli
