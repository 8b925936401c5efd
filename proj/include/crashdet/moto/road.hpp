#pragma once

#include <cmath>
#include <vector>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/types.hpp"

namespace crashdet::moto {

// Piecewise-linear longitudinal road profile, sampled at a fixed spacing.
// Beyond either end the profile continues flat at the edge height.
class RoadProfile {
 public:
  static constexpr double kSpacing = 0.2;  // m
  static constexpr double kLength = 300.0;  // m

  RoadProfile() : heights_(num_samples(), 0.0) {}

  explicit RoadProfile(std::vector<double> heights) : heights_(std::move(heights)) {
    if (heights_.size() != num_samples()) {
      throw ValidationError("road profile must have " + std::to_string(num_samples()) +
                            " samples at 0.2 m spacing over 300 m");
    }
    for (double h : heights_) {
      if (!std::isfinite(h)) throw ValidationError("road profile contains a non-finite height");
    }
  }

  static std::size_t num_samples() { return static_cast<std::size_t>(kLength / kSpacing) + 1; }

  const std::vector<double>& heights() const { return heights_; }
  double length() const { return kLength; }

  double height(double x) const {
    if (x <= 0.0) return heights_.front();
    if (x >= kLength) return heights_.back();
    const double u = x / kSpacing;
    const std::size_t i = std::min(static_cast<std::size_t>(u), heights_.size() - 2);
    const double f = u - static_cast<double>(i);
    return heights_[i] * (1.0 - f) + heights_[i + 1] * f;
  }

  double slope(double x) const {
    if (x <= 0.0 || x >= kLength) return 0.0;
    const std::size_t i =
        std::min(static_cast<std::size_t>(x / kSpacing), heights_.size() - 2);
    return (heights_[i + 1] - heights_[i]) / kSpacing;
  }

  double max_abs_slope() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < heights_.size(); ++i) {
      s = std::max(s, std::abs(heights_[i + 1] - heights_[i]) / kSpacing);
    }
    return s;
  }

  // Outward (upward) unit normal of the segment under x.
  Vec2 normal(double x) const {
    const double s = slope(x);
    return Vec2(-s, 1.0).normalized();
  }

 private:
  std::vector<double> heights_;
};

}  // namespace crashdet::moto
