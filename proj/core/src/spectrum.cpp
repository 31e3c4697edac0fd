#include "critheat/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"
#include "critheat/profiles.hpp"

namespace critheat::spectrum {

namespace {

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return std::nan("");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Solves (S - shift) x = b for symmetric tridiagonal S (no pivoting; the shift
// is perturbed off the eigenvalue so the factorization stays finite).
std::vector<double> shifted_solve(const DirichletOperator& op, double shift, const std::vector<double>& b) {
  const std::size_t n = op.diag.size();
  std::vector<double> c(n), d(n), x(n);
  double denom = op.diag[0] - shift;
  if (denom == 0.0) denom = 1e-300;
  c[0] = n > 1 ? op.offdiag[0] / denom : 0.0;
  d[0] = b[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = (op.diag[i] - shift) - op.offdiag[i - 1] * c[i - 1];
    if (denom == 0.0) denom = 1e-300;
    c[i] = i + 1 < n ? op.offdiag[i] / denom : 0.0;
    d[i] = (b[i] - op.offdiag[i - 1] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

double norm2(const std::vector<double>& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); }

}  // namespace

DirichletOperator discretize(double R, std::size_t N) {
  if (!(R >= 5.0)) throw ConfigError("discretize: R must be at least 5");
  if (N < 500) throw ConfigError("discretize: N must be at least 500");
  if (static_cast<double>(N) < 20.0 * R) {
    std::ostringstream msg;
    msg << "discretize: N=" << N << " gives fewer than 20 nodes per unit radius for R=" << R;
    throw ConfigError(msg.str());
  }
  DirichletOperator op;
  op.R = R;
  op.N = N;
  op.h = R / static_cast<double>(N);
  const double h = op.h;
  op.nodes.resize(N);
  op.potential.resize(N);
  op.weights.resize(N);
  op.face_coupling.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = h * static_cast<double>(i);
    op.nodes[i] = r;
    op.potential[i] = profiles::eval_potential(r);
    const double lo = i == 0 ? 0.0 : r - 0.5 * h;
    const double hi = r + 0.5 * h;
    op.weights[i] = (std::pow(hi, 6) - std::pow(lo, 6)) / 6.0;
    op.face_coupling[i] = std::pow(hi, 5) / h;
  }
  op.diag.resize(N);
  op.offdiag.resize(N - 1);
  for (std::size_t i = 0; i < N; ++i) {
    const double left = i == 0 ? 0.0 : op.face_coupling[i - 1];
    op.diag[i] = (left + op.face_coupling[i]) / op.weights[i] - op.potential[i];
    if (i + 1 < N) op.offdiag[i] = -op.face_coupling[i] / std::sqrt(op.weights[i] * op.weights[i + 1]);
  }
  return op;
}

std::vector<double> DirichletOperator::apply(std::span<const double> u) const {
  if (u.size() != N) throw ConfigError("DirichletOperator::apply: sample count mismatch");
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double right = i + 1 < N ? u[i + 1] : 0.0;
    double flux = face_coupling[i] * (u[i] - right);
    if (i > 0) flux += face_coupling[i - 1] * (u[i] - u[i - 1]);
    out[i] = flux / weights[i] - potential[i] * u[i];
  }
  return out;
}

double DirichletOperator::inner(std::span<const double> a, std::span<const double> b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += weights[i] * a[i] * b[i];
  return s;
}

std::size_t sturm_count(const DirichletOperator& op, double x) {
  std::size_t count = 0;
  double q = op.diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < op.diag.size(); ++i) {
    const double prev = q == 0.0 ? 1e-300 : q;
    q = (op.diag[i] - x) - op.offdiag[i - 1] * op.offdiag[i - 1] / prev;
    if (q < 0.0) ++count;
  }
  return count;
}

std::vector<EigenPair> eig(const DirichletOperator& op, int k) {
  if (k < 1 || k > 10) throw ConfigError("eig: k must lie in [1, 10]");
  const std::size_t n = op.diag.size();

  // Gershgorin bounds.
  double lo = op.diag[0], hi = op.diag[0];
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(op.offdiag[i - 1]);
    if (i + 1 < n) radius += std::abs(op.offdiag[i]);
    lo = std::min(lo, op.diag[i] - radius);
    hi = std::max(hi, op.diag[i] + radius);
  }

  std::vector<EigenPair> pairs;
  std::vector<std::vector<double>> previous;
  for (int j = 0; j < k; ++j) {
    // Bisection for the (j+1)-th eigenvalue: smallest x with count(x) > j.
    double a = lo, b = hi;
    for (int it = 0; it < 200 && (b - a) > 4e-16 * std::max(std::abs(a), std::abs(b)) + 1e-300; ++it) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(op, mid) > static_cast<std::size_t>(j))
        b = mid;
      else
        a = mid;
    }
    const double mu = 0.5 * (a + b);

    // Inverse iteration with a shift just below the eigenvalue.
    const double shift = mu - 1e-10 * std::max(1.0, std::abs(mu));
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 + 0.01 * std::sin(0.37 * static_cast<double>(i) + j);
    double residual = 0.0;
    int iterations = 0;
    bool converged = false;
    for (; iterations < 50 && !converged; ++iterations) {
      w = shifted_solve(op, shift, w);
      for (const auto& v : previous) {
        const double proj = std::inner_product(w.begin(), w.end(), v.begin(), 0.0);
        for (std::size_t i = 0; i < n; ++i) w[i] -= proj * v[i];
      }
      const double nw = norm2(w);
      for (auto& x : w) x /= nw;
      // Residual ||S w - mu w||.
      double rr = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double sw = op.diag[i] * w[i];
        if (i > 0) sw += op.offdiag[i - 1] * w[i - 1];
        if (i + 1 < n) sw += op.offdiag[i] * w[i + 1];
        rr += (sw - mu * w[i]) * (sw - mu * w[i]);
      }
      residual = std::sqrt(rr);
      const double scale = std::max(std::abs(lo), std::abs(hi));
      converged = residual < 1e-11 * scale && iterations >= 2;
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "eig: inverse iteration for eigenpair " << (j + 1) << " did not converge after " << iterations
          << " iterations (residual " << residual << ")";
      throw NumericError(msg.str());
    }
    previous.push_back(w);

    // Back to ψ = V^{-1/2} w, normalized by ψ(0) = 1.
    std::vector<double> psi(n);
    for (std::size_t i = 0; i < n; ++i) psi[i] = w[i] / std::sqrt(op.weights[i]);
    const double psi0 = psi[0];
    if (psi0 == 0.0) throw NumericError("eig: eigenfunction vanishes at the origin");
    for (auto& x : psi) x /= psi0;

    std::vector<double> radii(op.nodes);
    std::vector<double> values(psi);
    radii.push_back(op.R);
    values.push_back(0.0);
    EigenPair pair;
    pair.mu = mu;
    pair.samples = psi;
    pair.psi = RadialProfile(std::move(radii), std::move(values));
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ScalingRow> scaling_report(std::span<const double> radii, std::size_t nodes_per_unit) {
  std::vector<ScalingRow> rows;
  double prev = 0.0;
  for (double R : radii) {
    if (!(R >= 10.0)) throw ConfigError("scaling_report: each radius must be at least 10");
    if (!(R > prev)) throw ConfigError("scaling_report: radii must be ascending");
    prev = R;
    const auto N = static_cast<std::size_t>(std::llround(R * static_cast<double>(nodes_per_unit)));
    const DirichletOperator op = discretize(R, N);
    const auto pairs = eig(op, 5);

    ScalingRow row;
    row.R = R;
    row.N = N;
    row.mu1 = pairs[0].mu;
    row.mu2R4 = pairs[1].mu * std::pow(R, 4);
    row.mu3R3 = pairs[2].mu * std::pow(R, 3);
    for (const auto& p : pairs) row.mu.push_back(p.mu);

    std::vector<double> x1, y1, x2, y2;
    const double kappa = std::sqrt(std::max(-row.mu1, 0.0));
    row.psi1_envelope_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < N; ++i) {
      const double r = op.nodes[i];
      const double p1 = std::abs(pairs[0].samples[i]);
      const double p2 = std::abs(pairs[1].samples[i]);
      if (r >= 5.0 && r <= 0.5 * R && p1 > 0.0) {
        x1.push_back(r);
        y1.push_back(std::log(p1));
        row.psi1_envelope_max = std::max(row.psi1_envelope_max, std::log(p1) + r * kappa);
      }
      if (r >= R / 8.0 && r <= R / 4.0 && p2 > 0.0) {
        x2.push_back(std::log(r));
        y2.push_back(std::log(p2));
      }
      if (r < 0.5 * R) row.psi2_weighted_sup = std::max(row.psi2_weighted_sup, p2 * std::pow(1.0 + r, 4));
    }
    row.psi1_decay_fit = least_squares_slope(x1, y1);
    row.psi2_decay_fit = least_squares_slope(x2, y2);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_scaling_csv(std::ostream& os, std::span<const ScalingRow> rows) {
  CsvWriter csv(os, {"R", "N", "mu1", "mu2R4", "mu3R3", "psi1_decay_fit", "psi2_decay_fit"});
  for (const auto& row : rows) {
    csv.cell(row.R).cell(row.N).cell(row.mu1).cell(row.mu2R4).cell(row.mu3R3).cell(row.psi1_decay_fit).cell(
        row.psi2_decay_fit);
    csv.end_row();
  }
}

E0Estimate estimate_e0(std::span<const double> radii, std::size_t nodes_per_unit) {
  if (radii.empty()) throw ConfigError("estimate_e0: need at least one radius");
  // μ1(R) converges exponentially in R; grid error is O(h^2). Extrapolate in h at
  // the largest radius and report the spread over radii as the error bar.
  const double R = radii.back();
  auto mu1_at = [R](std::size_t per_unit) {
    const auto N = static_cast<std::size_t>(std::llround(R * static_cast<double>(per_unit)));
    return eig(discretize(R, N), 1).front().mu;
  };
  const double coarse = mu1_at(nodes_per_unit);
  const double fine = mu1_at(2 * nodes_per_unit);
  const double extrapolated = fine + (fine - coarse) / 3.0;
  double spread = std::abs(fine - coarse) / 3.0;
  if (radii.size() > 1) {
    const double Rprev = radii[radii.size() - 2];
    const auto N = static_cast<std::size_t>(std::llround(Rprev * static_cast<double>(2 * nodes_per_unit)));
    const double mu_prev = eig(discretize(Rprev, N), 1).front().mu;
    spread += std::abs(mu_prev - fine);
  }
  return {-extrapolated, spread};
}

}  // namespace critheat::spectrum
