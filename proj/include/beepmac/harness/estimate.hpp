#pragma once

#include <beepmac/core.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace beepmac {

/// Two-sided 99% normal quantile.
inline constexpr double z99 = 2.5758293035489004;

struct Estimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;

  bool contains(double value) const noexcept { return ci_low <= value && value <= ci_high; }
};

/// Wilson score interval; stays sensible when failures are 0 or trials.
inline Estimate wilson_estimate(std::uint64_t failures, std::uint64_t trials, double z = z99) {
  Estimate e;
  e.trials = trials;
  e.failures = failures;
  if (trials == 0 || failures > trials) throw DomainError("need 0 <= failures <= trials and trials >= 1");
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(failures) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (ph + z2 / (2 * n)) / denom;
  const double half = z / denom * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n));
  e.point = ph;
  e.ci_low = std::clamp(centre - half, 0.0, ph);
  e.ci_high = std::clamp(centre + half, ph, 1.0);
  return e;
}

}  // namespace beepmac
