#pragma once

#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

namespace critheat {

// A radial function sampled on an ascending grid. Values between nodes come from
// cubic Hermite interpolation; node slopes are either supplied (when the builder
// knows them exactly) or taken from a natural cubic spline through the samples.
class RadialProfile {
 public:
  RadialProfile() = default;
  RadialProfile(std::vector<double> radii, std::vector<double> values);
  RadialProfile(std::vector<double> radii, std::vector<double> values, std::vector<double> slopes);

  // Throws RangeError outside [front_radius(), back_radius()].
  double operator()(double r) const;
  double derivative(double r) const;

  bool covers(double r) const noexcept;
  bool empty() const noexcept { return r_.empty(); }
  std::size_t size() const noexcept { return r_.size(); }
  double front_radius() const { return r_.front(); }
  double back_radius() const { return r_.back(); }

  const std::vector<double>& radii() const noexcept { return r_; }
  const std::vector<double>& values() const noexcept { return v_; }
  const std::vector<double>& slopes() const noexcept { return d_; }

  // Multiplies values and slopes in place.
  RadialProfile& scale(double factor);

  // CSV with header "r,<value_column>" and 17 significant digits.
  void write_csv(std::ostream& os, std::string_view value_column = "value") const;

 private:
  void validate() const;
  void fit_spline_slopes();
  std::size_t locate(double r) const;

  std::vector<double> r_;
  std::vector<double> v_;
  std::vector<double> d_;
};

// r_i = r_min * rho^i, i = 0..count-1, ending exactly at r_max; optionally prefixed by r = 0.
std::vector<double> geometric_grid(double r_min, double r_max, std::size_t count, bool include_origin);

}  // namespace critheat
