#pragma once

#include <string>
#include <vector>

#include "crashdet/core/errors.hpp"
#include "crashdet/core/random.hpp"
#include "crashdet/core/types.hpp"

namespace crashdet::scenario {

struct ParamRange {
  std::string name;
  double low = 0.0;
  double high = 0.0;

  void validate() const {
    if (!(std::isfinite(low) && std::isfinite(high)) || low > high) {
      throw ValidationError("parameter range '" + name + "' is invalid");
    }
  }
};

// Latin hypercube sampling: each dimension is cut into n equal strata and
// every stratum receives exactly one sample, uniform within the stratum.
// Strata are paired across dimensions by independent random permutations.
inline MatX lhs_sample(const std::vector<ParamRange>& ranges, int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("lhs_sample requires n >= 1");
  if (ranges.empty()) throw ValidationError("lhs_sample requires at least one range");
  for (const auto& r : ranges) r.validate();

  Rng rng(seed);
  MatX out(n, static_cast<Eigen::Index>(ranges.size()));
  for (std::size_t d = 0; d < ranges.size(); ++d) {
    const auto& r = ranges[d];
    const double width = (r.high - r.low) / n;
    const auto order = rng.permutation(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform01();
      out(i, static_cast<Eigen::Index>(d)) =
          r.low + (static_cast<double>(order[static_cast<std::size_t>(i)]) + u) * width;
    }
  }
  return out;
}

}  // namespace crashdet::scenario
