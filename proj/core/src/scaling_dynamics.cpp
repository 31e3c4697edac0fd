#include "critheat/scaling_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"
#include "critheat/heat_tail.hpp"
#include "critheat/profiles.hpp"
#include "critheat/quadrature.hpp"

namespace critheat::scaling {

namespace odeint = boost::numeric::odeint;

double pow_diff(double a, double b, double s) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("pow_diff: arguments must be positive");
  return std::pow(b, s) * std::expm1(s * std::log1p((a - b) / b));
}

double pow_diff(const LogTime& a, const LogTime& b, double s) {
  const double base = b.value();
  const double d = (a.major - b.major) + (a.minor - b.minor);
  if (!(base > 0.0) || !(a.value() > 0.0)) throw DomainError("pow_diff: arguments must be positive");
  return std::pow(base, s) * std::expm1(s * std::log1p(d / base));
}

LogTime edge_minus(const TimeSchedule& s, int j) { return {s.p(j), s.minus_off(j)}; }
LogTime edge_plus(const TimeSchedule& s, int j) { return {s.p(j), s.plus_off(j)}; }

namespace {

double L(const LogTime& tau, double beta) { return std::pow(tau.value(), 1.0 - beta); }

double gap_factor(const RateConfig& cfg, int j, std::mt19937_64& rng) {
  double g = 0.0;
  switch (cfg.gap) {
    case GapKind::zero: g = 0.0; break;
    case GapKind::envelope_plus: g = 1.0; break;
    case GapKind::envelope_minus: g = -1.0; break;
    case GapKind::alternating: g = (j % 2 == 1) ? 1.0 : -1.0; break;
    case GapKind::random: g = std::uniform_real_distribution<double>(-1.0, 1.0)(rng); break;
    case GapKind::custom:
      if (static_cast<std::size_t>(j - 1) >= cfg.custom_gap.size())
        throw ConfigError("integrate_piecewise: custom gap factors do not cover every window");
      g = cfg.custom_gap[static_cast<std::size_t>(j - 1)];
      break;
  }
  if (!(std::abs(g) <= 1.0)) {
    std::ostringstream msg;
    msg << "integrate_piecewise: gap rate factor " << g << " on window " << j << " exceeds the envelope";
    throw ContractViolation(msg.str());
  }
  return g;
}

// Independent ∫ D dt over τ ∈ [a, b] by Gauss-Kronrod in σ = log τ.
double integrate_D_oracle(const PerturbationField& field, double a, double b) {
  const double sa = std::log(a), sb = std::log(b);
  std::vector<double> breaks;
  const int panels = std::max(1, static_cast<int>(std::ceil((sb - sa) / 0.25)));
  for (int i = 0; i <= panels; ++i) breaks.push_back(sa + (sb - sa) * i / panels);
  auto f = [&](double sigma) {
    const double tau = std::exp(sigma);
    return field.D_times_t(tau) * tau;
  };
  return gk_integrate_panels(f, breaks, QuadOptions{1e-12, 1e-300, 6}).value;
}

Verdict make(std::string check, bool pass, double lhs, double rhs, double tol, std::string anchor) {
  return Verdict{std::move(check), pass, lhs, rhs, tol, std::move(anchor)};
}

std::string jname(const char* stem, int j) {
  std::ostringstream os;
  os << stem << ".j" << j;
  return os.str();
}

}  // namespace

PerturbationField::PerturbationField(const RateConfig& cfg) : cfg_(cfg) {
  if (!(cfg.C1 >= 0.0)) throw ConfigError("perturbation: C1 must be nonnegative");
  if (!(cfg.beta_prime > 1.0)) throw ConfigError("perturbation: β' must exceed 1");
  if (cfg.d == DKind::random) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> amp(0.2, 1.5), freq(0.3, 3.0), phase(0.0, 2.0 * std::numbers::pi);
    for (int k = 0; k < 6; ++k) {
      amp_.push_back(amp(rng));
      freq_.push_back(freq(rng));
      phase_.push_back(phase(rng));
    }
  }
}

double PerturbationField::xi(double tau) const {
  switch (cfg_.d) {
    case DKind::zero: return 0.0;
    case DKind::envelope_plus: return 1.0;
    case DKind::envelope_minus: return -1.0;
    case DKind::random: {
      const double sigma = std::log(tau);
      double sum = 0.0;
      for (std::size_t k = 0; k < amp_.size(); ++k) sum += amp_[k] * std::sin(freq_[k] * sigma + phase_[k]);
      return std::tanh(sum);
    }
  }
  return 0.0;
}

double PerturbationField::D_times_t(double tau) const {
  return cfg_.C1 * xi(tau) * std::pow(tau, -cfg_.beta_prime);
}

LambdaTrajectory integrate_piecewise(const TimeSchedule& s, const RateConfig& cfg) {
  if (cfg.samples_per_window < 2) throw ConfigError("integrate_piecewise: need at least two samples per window");
  const double beta = s.beta;
  const double q = heat_tail::q1(beta);
  const PerturbationField field(cfg);
  std::mt19937_64 gap_rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  const int K = cfg.samples_per_window;

  LambdaTrajectory traj;
  double loglam = q * L(edge_minus(s, 1), beta);
  double abs_D = 0.0;
  traj.samples.push_back(Sample{edge_minus(s, 1), loglam, 1, "gap", 0.0, 0.0});

  using State = std::array<double, 2>;
  for (int j = 1; j <= s.jmax; ++j) {
    // Gap window (t_j^-, t_j^+).
    const LogTime m = edge_minus(s, j), p = edge_plus(s, j);
    const double g = gap_factor(cfg, j, gap_rng);
    const double start = loglam;
    traj.at_minus.push_back(start);
    traj.abs_D_to_minus.push_back(abs_D);
    for (int k = 1; k <= K; ++k) {
      const LogTime tau{m.major, m.minor + (p.minor - m.minor) * k / K};
      const LogTime at = k == K ? p : tau;
      loglam = start + g * 2.0 * q * pow_diff(at, m, 1.0 - beta);
      traj.samples.push_back(Sample{at, loglam, j, "gap", 0.0, abs_D});
    }
    traj.at_plus.push_back(loglam);

    // Sign window (t_j^+, t_{j+1}^-).
    const LogTime e = edge_minus(s, j + 1);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    const double base = loglam;
    const double s0 = std::log(p.value()), s1 = std::log(e.value());
    std::vector<double> sigmas;
    for (int k = 0; k <= K; ++k) sigmas.push_back(s0 + (s1 - s0) * k / K);
    std::vector<State> states;
    std::vector<double> times;
    auto rhs = [&](const State&, State& dx, double sigma) {
      const double tau = std::exp(sigma);
      const double v = field.D_times_t(tau) * tau;
      dx[0] = v;
      dx[1] = std::abs(v);
    };
    State x{0.0, 0.0};
    if (cfg.d != DKind::zero) {
      try {
        odeint::integrate_times(odeint::make_dense_output(1e-300 + cfg.ode_tol * 1e-3, cfg.ode_tol,
                                                          odeint::runge_kutta_dopri5<State>()),
                                rhs, x, sigmas.begin(), sigmas.end(), 1e-3,
                                [&](const State& st, double t) {
                                  states.push_back(st);
                                  times.push_back(t);
                                });
      } catch (const std::exception& ex) {
        throw NumericError(std::string("integrate_piecewise: perturbation integral failed: ") + ex.what());
      }
    } else {
      states.assign(sigmas.size(), State{0.0, 0.0});
    }
    const double abs_D_start = abs_D;
    for (int k = 1; k <= K; ++k) {
      const LogTime at = k == K ? e : LogTime{std::exp(sigmas[static_cast<std::size_t>(k)]), 0.0};
      const State& st = states[static_cast<std::size_t>(k)];
      loglam = base + sign * q * pow_diff(at, p, 1.0 - beta) + st[0];
      abs_D = abs_D_start + st[1];
      if (!std::isfinite(loglam)) throw NumericError("integrate_piecewise: non-finite log λ");
      traj.samples.push_back(Sample{at, loglam, j, "sign", st[0], abs_D});
    }
  }
  traj.at_minus.push_back(loglam);
  traj.abs_D_to_minus.push_back(abs_D);
  return traj;
}

std::vector<Verdict> check_window_bounds(const LambdaTrajectory& traj, const TimeSchedule& s, const RateConfig& cfg) {
  const double q = heat_tail::q1(s.beta);
  const double n1 = s.n1;
  const double tail = cfg.C1 / (cfg.beta_prime - 1.0) * std::pow(s.minus(1), -(cfg.beta_prime - 1.0));
  std::vector<Verdict> out;
  for (int j = 2; j <= s.jmax; ++j) {
    const double lhs = traj.at_minus[static_cast<std::size_t>(j - 1)] - traj.at_minus[0];
    const double main = 0.5 * q * std::pow(n1, j) - 6.0 * q * std::pow(n1, j - 1);
    if (j % 2 == 0) {
      const double rhs = -main + tail;
      out.push_back(make(jname("lambda.coarse_upper", j), lhs < rhs, lhs, rhs, 0.0, "coarse upper bound, even j"));
    } else {
      const double rhs = main - tail;
      out.push_back(make(jname("lambda.coarse_lower", j), lhs > rhs, lhs, rhs, 0.0, "coarse lower bound, odd j"));
    }
  }
  return out;
}

std::vector<Verdict> check_telescoping(const LambdaTrajectory& traj, const TimeSchedule& s, const RateConfig& cfg) {
  const double q = heat_tail::q1(s.beta);
  const double beta = s.beta;
  const double n1 = s.n1;
  const double tail = cfg.C1 / (cfg.beta_prime - 1.0) * std::pow(s.minus(1), -(cfg.beta_prime - 1.0));
  std::vector<Verdict> out;
  for (int j = 2; j <= s.jmax; ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    const double lhs = traj.at_minus[idx] - traj.at_minus[0];
    const double Lm = L(edge_minus(s, j), beta);
    const double Lp = L(edge_plus(s, j - 1), beta);
    const double I = traj.abs_D_to_minus[idx];
    const double main = 0.5 * q * std::pow(n1, j) - 6.0 * q * std::pow(n1, j - 1);
    if (j % 2 == 0) {
      const double up = -q * Lm + 3.0 * q * Lp + I;
      const double lo = -q * Lm - q * Lp - I;
      out.push_back(make(jname("lambda.telescoping_upper", j), lhs < up, lhs, up, 0.0, "telescoping upper, even j"));
      out.push_back(make(jname("lambda.telescoping_lower", j), lhs > lo, lhs, lo, 0.0, "telescoping lower, even j"));
      const double coarse = -main + tail;
      // slack(coarse) - slack(fine) = coarse - up.
      out.push_back(make(jname("lambda.coarse_minus_fine_slack", j), coarse - up >= 0.0, coarse - up, 0.0, 0.0,
                         "coarse bound dominates telescoping bound"));
    } else {
      const double up = q * Lm + q * Lp + I;
      const double lo = q * Lm - 3.0 * q * Lp - I;
      out.push_back(make(jname("lambda.telescoping_upper", j), lhs < up, lhs, up, 0.0, "telescoping upper, odd j"));
      out.push_back(make(jname("lambda.telescoping_lower", j), lhs > lo, lhs, lo, 0.0, "telescoping lower, odd j"));
      const double coarse = main - tail;
      out.push_back(make(jname("lambda.coarse_minus_fine_slack", j), lo - coarse >= 0.0, lo - coarse, 0.0, 0.0,
                         "coarse bound dominates telescoping bound"));
    }
  }
  return out;
}

std::vector<Verdict> check_trajectory(const LambdaTrajectory& traj, const TimeSchedule& s, const RateConfig& cfg) {
  const double q = heat_tail::q1(s.beta);
  const double beta = s.beta;
  const PerturbationField field(cfg);
  std::vector<Verdict> out;

  // Global envelope log λ(t) <= -q1 L(t_I) + 2 q1 L(t), equality at t_I.
  {
    const double LI = L(edge_minus(s, 1), beta);
    double worst = -std::numeric_limits<double>::infinity();
    double scale = 1.0;
    for (const auto& smp : traj.samples) {
      const double rhs = -q * LI + 2.0 * q * L(smp.tau, beta);
      worst = std::max(worst, smp.loglambda - rhs);
      scale = std::max(scale, std::abs(rhs));
    }
    const double tol = 1e-10 * scale;
    out.push_back(make("lambda.global_envelope", worst <= tol, worst, 0.0, tol, "global growth envelope"));
  }

  // Gap windows and the exact identity on sign windows.
  for (int j = 1; j <= s.jmax; ++j) {
    const auto idx = static_cast<std::size_t>(j - 1);
    const LogTime m = edge_minus(s, j), p = edge_plus(s, j);
    double gap_worst = -std::numeric_limits<double>::infinity();
    double id_worst = 0.0;
    double id_scale = 1.0;
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    for (const auto& smp : traj.samples) {
      if (smp.window != j) continue;
      if (smp.branch == "gap") {
        const double bound = 2.0 * q * std::abs(pow_diff(smp.tau, m, 1.0 - beta));
        const double dev = std::abs(smp.loglambda - traj.at_minus[idx]);
        gap_worst = std::max(gap_worst, dev - bound);
      } else {
        const double closed = sign * q * pow_diff(smp.tau, p, 1.0 - beta);
        const double oracle = cfg.d == DKind::zero ? 0.0 : integrate_D_oracle(field, p.value(), smp.tau.value());
        const double residual = smp.loglambda - traj.at_plus[idx] - closed - oracle;
        id_worst = std::max(id_worst, std::abs(residual));
        id_scale = std::max(id_scale, std::abs(smp.loglambda) + std::abs(traj.at_plus[idx]));
      }
    }
    const double gap_tol = 1e-10 * std::max(1.0, std::abs(traj.at_minus[idx]));
    out.push_back(make(jname("lambda.gap_window", j), gap_worst <= gap_tol, gap_worst, 0.0, gap_tol, "gap window envelope"));
    const double id_tol = 1e-10 * id_scale;
    out.push_back(make(jname("lambda.sign_window_identity", j), id_worst <= id_tol, id_worst, 0.0, id_tol,
                       "sign window identity"));
  }

  // log λ(t_j^-) alternates in sign and grows at least geometrically.
  for (int j = 2; j <= s.jmax; ++j) {
    const double a = traj.at_minus[static_cast<std::size_t>(j - 2)];
    const double b = traj.at_minus[static_cast<std::size_t>(j - 1)];
    const bool alternates = a * b < 0.0;
    const double ratio = std::abs(b) / std::abs(a);
    out.push_back(make(jname("lambda.alternating_growth", j), alternates && ratio >= 2.0, ratio, 2.0, 0.0,
                       "oscillation of log lambda at window openings"));
  }
  return out;
}

std::optional<int> search_nbar(double beta, int jmax, std::span<const RateConfig> cfgs, int n_max) {
  for (int n1 = 4; n1 <= n_max; ++n1) {
    TimeSchedule s;
    try {
      s = make_schedule(n1, beta, jmax);
    } catch (const ConfigError&) {
      continue;
    }
    bool ok = true;
    for (const auto& cfg : cfgs) {
      const auto traj = integrate_piecewise(s, cfg);
      if (!all_pass(check_window_bounds(traj, s, cfg)) || !all_pass(check_telescoping(traj, s, cfg)) ||
          !all_pass(check_trajectory(traj, s, cfg))) {
        ok = false;
        break;
      }
    }
    if (ok) return n1;
  }
  return std::nullopt;
}

void write_trajectory_csv(std::ostream& os, const LambdaTrajectory& traj) {
  CsvWriter csv(os, {"tau", "loglambda", "branch"});
  for (const auto& smp : traj.samples) {
    csv.cell(smp.tau.value()).cell(smp.loglambda).cell(smp.branch);
    csv.end_row();
  }
}

void write_verdict_csv(std::ostream& os, std::span<const Verdict> verdicts) {
  CsvWriter csv(os, {"j", "parity", "bound", "lhs", "rhs", "pass"});
  for (const auto& v : verdicts) {
    const auto pos = v.check.rfind(".j");
    const int j = pos == std::string::npos ? 0 : std::stoi(v.check.substr(pos + 2));
    const std::string bound = pos == std::string::npos ? v.check : v.check.substr(0, pos);
    csv.cell(j).cell(std::string_view(j % 2 == 0 ? "even" : "odd")).cell(bound).cell(v.lhs).cell(v.rhs);
    csv.cell(v.pass ? 1 : 0);
    csv.end_row();
  }
}

double SyntheticOuterField::operator()(double x, double t) const {
  if (!(t > 1.0)) throw DomainError("outer field: t must exceed 1");
  if (x * x < t) return 1.0 / (t * std::pow(std::log(t), beta_prime));
  return 1.0 / (x * x * std::pow(std::log(x * x), beta_prime));
}

double SyntheticOuterField::seam_mismatch(double t) const {
  const double x = std::sqrt(t);
  const double inside = 1.0 / (t * std::pow(std::log(t), beta_prime));
  const double outside = 1.0 / (x * x * std::pow(std::log(x * x), beta_prime));
  return std::abs(inside - outside) / inside;
}

double modulation_rhs(const std::function<double(double x, double t)>& w, double lambda, double t,
                      const spectrum::EigenPair& psi2, double R) {
  if (!(lambda > 0.0) || !(t > 1.0) || !(R > 0.0)) throw DomainError("modulation_rhs: λ, R must be positive, t > 1");
  if (!(lambda * R < std::sqrt(t))) throw DomainError("modulation_rhs: requires λR < √t");
  if (!psi2.psi.covers(R)) throw RangeError("modulation_rhs: ψ2 does not cover B_R");
  std::vector<double> breaks;
  const int panels = 64;
  for (int i = 0; i <= panels; ++i) breaks.push_back(R * i / panels);
  const QuadOptions opts{1e-10, 1e-300, 12};
  auto num_f = [&](double y) {
    return 2.0 * profiles::eval_Q(y) * w(lambda * y, t) * psi2.psi(y) * std::pow(y, 5);
  };
  auto den_f = [&](double y) { return profiles::eval_LambdaQ(y) * psi2.psi(y) * std::pow(y, 5); };
  const QuadResult num = gk_integrate_panels(num_f, breaks, opts);
  const QuadResult den = gk_integrate_panels(den_f, breaks, opts);
  if (std::abs(den.value) <= 1e-10 * den.l1)
    throw ConfigError("modulation_rhs: ⟨ΛQ, ψ2⟩ vanishes; wrong eigenfunction?");
  return -num.value / den.value;
}

LambdaTrajectory integrate_matched(const BTable& table, double tau_begin, double tau_end, double loglambda0,
                                   const MatchedOptions& opts) {
  if (table.tau.size() < 2 || table.tau.size() != table.bt.size())
    throw ConfigError("integrate_matched: malformed b table");
  if (!(tau_end > tau_begin)) throw ConfigError("integrate_matched: empty interval");
  if (tau_begin < table.tau.front() || tau_end > table.tau.back()) {
    std::ostringstream msg;
    msg << "integrate_matched: table covers [" << table.tau.front() << ", " << table.tau.back() << "], need ["
        << tau_begin << ", " << tau_end << "]";
    throw RangeError(msg.str());
  }
  const RadialProfile bt(table.tau, table.bt);
  std::vector<double> times{tau_begin};
  for (double tau : table.tau)
    if (tau > tau_begin && tau < tau_end) times.push_back(tau);
  times.push_back(tau_end);

  LambdaTrajectory traj;
  using State = std::array<double, 1>;
  State x{loglambda0};
  auto rhs = [&](const State&, State& dx, double tau) {
    dx[0] = 1.25 * bt(std::clamp(tau, table.tau.front(), table.tau.back()));
    if (opts.correction) dx[0] += opts.correction(tau);
  };
  try {
    odeint::integrate_times(
        odeint::make_dense_output(opts.tol * 1e-2, opts.tol, odeint::runge_kutta_dopri5<State>()), rhs, x,
        times.begin(), times.end(), 1e-3 * (tau_end - tau_begin),
        [&](const State& st, double tau) { traj.samples.push_back(Sample{{tau, 0.0}, st[0], 0, "matched", 0.0, 0.0}); });
  } catch (const std::exception& ex) {
    throw NumericError(std::string("integrate_matched: integration failed: ") + ex.what());
  }
  return traj;
}

}  // namespace critheat::scaling
