#include "critheat/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "critheat/csv.hpp"
#include "critheat/errors.hpp"

namespace critheat {

RadialProfile::RadialProfile(std::vector<double> radii, std::vector<double> values)
    : r_(std::move(radii)), v_(std::move(values)) {
  validate();
  fit_spline_slopes();
}

RadialProfile::RadialProfile(std::vector<double> radii, std::vector<double> values,
                             std::vector<double> slopes)
    : r_(std::move(radii)), v_(std::move(values)), d_(std::move(slopes)) {
  validate();
  if (d_.size() != r_.size()) throw ConfigError("RadialProfile: slope count does not match grid");
}

void RadialProfile::validate() const {
  if (r_.size() < 2) throw ConfigError("RadialProfile: need at least two nodes");
  if (r_.size() != v_.size()) throw ConfigError("RadialProfile: value count does not match grid");
  if (r_.front() < 0.0) throw ConfigError("RadialProfile: negative radius");
  for (std::size_t i = 1; i < r_.size(); ++i) {
    if (!(r_[i] > r_[i - 1])) {
      std::ostringstream msg;
      msg << "RadialProfile: grid not strictly increasing at index " << i;
      throw ConfigError(msg.str());
    }
  }
}

void RadialProfile::fit_spline_slopes() {
  // Natural cubic spline: solve for second derivatives m_i, then read off slopes.
  const std::size_t n = r_.size();
  std::vector<double> m(n, 0.0);
  if (n > 2) {
    std::vector<double> diag(n - 2), upper(n - 2), rhs(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = r_[i] - r_[i - 1];
      const double h1 = r_[i + 1] - r_[i];
      diag[i - 1] = (h0 + h1) / 3.0;
      upper[i - 1] = h1 / 6.0;
      rhs[i - 1] = (v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0;
    }
    // Thomas algorithm; the lower diagonal entry for row i is h0/6 = upper[i-2].
    for (std::size_t k = 1; k < diag.size(); ++k) {
      const double lower = (r_[k + 1] - r_[k]) / 6.0;
      const double factor = lower / diag[k - 1];
      diag[k] -= factor * upper[k - 1];
      rhs[k] -= factor * rhs[k - 1];
    }
    for (std::size_t k = diag.size(); k-- > 0;) {
      double value = rhs[k];
      if (k + 1 < diag.size()) value -= upper[k] * m[k + 2];
      m[k + 1] = value / diag[k];
    }
  }
  d_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = r_[i + 1] - r_[i];
    d_[i] = (v_[i + 1] - v_[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
  }
  const double h = r_[n - 1] - r_[n - 2];
  d_[n - 1] = (v_[n - 1] - v_[n - 2]) / h + h * (m[n - 2] + 2.0 * m[n - 1]) / 6.0;
}

bool RadialProfile::covers(double r) const noexcept {
  if (r_.empty()) return false;
  const double slack = 1e-12 * std::max(1.0, std::abs(r_.back()));
  return r >= r_.front() - slack && r <= r_.back() + slack;
}

std::size_t RadialProfile::locate(double r) const {
  if (!covers(r)) {
    std::ostringstream msg;
    msg << "RadialProfile: radius " << r << " outside [" << (r_.empty() ? 0.0 : r_.front()) << ", "
        << (r_.empty() ? 0.0 : r_.back()) << "]";
    throw RangeError(msg.str());
  }
  auto it = std::upper_bound(r_.begin(), r_.end(), r);
  std::size_t i = static_cast<std::size_t>(std::distance(r_.begin(), it));
  if (i == 0) i = 1;
  if (i >= r_.size()) i = r_.size() - 1;
  return i - 1;
}

double RadialProfile::operator()(double r) const {
  const std::size_t i = locate(r);
  const double h = r_[i + 1] - r_[i];
  const double s = std::clamp((r - r_[i]) / h, 0.0, 1.0);
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * v_[i] + h10 * h * d_[i] + h01 * v_[i + 1] + h11 * h * d_[i + 1];
}

double RadialProfile::derivative(double r) const {
  const std::size_t i = locate(r);
  const double h = r_[i + 1] - r_[i];
  const double s = std::clamp((r - r_[i]) / h, 0.0, 1.0);
  const double s2 = s * s;
  const double dh00 = (6 * s2 - 6 * s) / h;
  const double dh10 = 3 * s2 - 4 * s + 1;
  const double dh01 = (-6 * s2 + 6 * s) / h;
  const double dh11 = 3 * s2 - 2 * s;
  return dh00 * v_[i] + dh10 * d_[i] + dh01 * v_[i + 1] + dh11 * d_[i + 1];
}

RadialProfile& RadialProfile::scale(double factor) {
  for (auto& v : v_) v *= factor;
  for (auto& d : d_) d *= factor;
  return *this;
}

void RadialProfile::write_csv(std::ostream& os, std::string_view value_column) const {
  CsvWriter csv(os, {"r", value_column});
  for (std::size_t i = 0; i < r_.size(); ++i) {
    csv.cell(r_[i]).cell(v_[i]);
    csv.end_row();
  }
}

std::vector<double> geometric_grid(double r_min, double r_max, std::size_t count, bool include_origin) {
  if (!(r_min > 0.0) || !(r_max > r_min) || count < 2)
    throw ConfigError("geometric_grid: need 0 < r_min < r_max and at least two nodes");
  std::vector<double> out;
  out.reserve(count + 1);
  if (include_origin) out.push_back(0.0);
  const double log_ratio = std::log(r_max / r_min) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(r_min * std::exp(log_ratio * static_cast<double>(i)));
  out.back() = r_max;
  return out;
}

}  // namespace critheat
