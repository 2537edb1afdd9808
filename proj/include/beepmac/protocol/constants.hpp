#pragma once

#include <beepmac/probability.hpp>

#include <cstdint>

namespace beepmac {

namespace detail {

inline void require_unit_open(const Probability& q, const char* name) {
  if (!q.in_open_unit_interval())
    throw DomainError(std::string(name) + " must lie strictly between 0 and 1, got " + q.str());
}

/// Smallest n >= 1 with p^n < bound, compared exactly on rationals.
inline int minimal_exponent_below(const Probability& p, const Rational& bound) {
  Rational power = p.exact();
  for (int n = 1;; ++n) {
    if (power < bound) return n;
    power *= p.exact();
  }
}

}  // namespace detail

/// Minimal gamma >= 1 with p^gamma < eps/4: a run of gamma beeps has a
/// fault-free round except with probability below eps/4.
inline int derive_gamma(const Probability& p, const Probability& epsilon) {
  detail::require_unit_open(p, "p");
  detail::require_unit_open(epsilon, "epsilon");
  return detail::minimal_exponent_below(p, epsilon.exact() / 4);
}

/// Minimal x >= 1 with p^x < eps/2.
inline int derive_x(const Probability& p, const Probability& epsilon) {
  detail::require_unit_open(p, "p");
  detail::require_unit_open(epsilon, "epsilon");
  return detail::minimal_exponent_below(p, epsilon.exact() / 2);
}

/// Local round of the loop's next alarm beep once iteration i has completed:
/// 4*gamma*i + (1 + 2 + ... + i).
inline constexpr std::int64_t alarm_round(int gamma, int i) noexcept {
  return 4LL * gamma * i + static_cast<std::int64_t>(i) * (i + 1) / 2;
}

/// Round (relative to a common wake-up) at which simultaneously woken
/// processors leave GlobalSync: 12*gamma^2 + 3*gamma*(3*gamma+1)/2.
inline constexpr std::int64_t simultaneous_sync_round(int gamma) noexcept { return alarm_round(gamma, 3 * gamma); }

/// Channel and protocol constants for a composed GlobalSync + Decision run.
/// GlobalSync uses the budget `sync_epsilon`, Decision uses `decision_epsilon`;
/// the default split gives each half of the overall epsilon.
struct Params {
  Probability p;
  Probability epsilon;
  Probability sync_epsilon;
  Probability decision_epsilon;
  int gamma = 0;
  int x = 0;

  static Params composed(const Probability& p, const Probability& epsilon) {
    detail::require_unit_open(epsilon, "epsilon");
    const Probability half(epsilon.exact() / 2);
    return with_budgets(p, epsilon, half, half);
  }

  static Params with_budgets(const Probability& p, const Probability& epsilon, const Probability& sync_epsilon,
                             const Probability& decision_epsilon) {
    detail::require_unit_open(epsilon, "epsilon");
    Params out;
    out.p = p;
    out.epsilon = epsilon;
    out.sync_epsilon = sync_epsilon;
    out.decision_epsilon = decision_epsilon;
    out.gamma = derive_gamma(p, sync_epsilon);
    out.x = derive_x(p, decision_epsilon);
    return out;
  }
};

}  // namespace beepmac
