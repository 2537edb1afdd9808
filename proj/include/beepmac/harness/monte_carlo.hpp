#pragma once

#include <beepmac/harness/estimate.hpp>
#include <beepmac/harness/trial.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

namespace beepmac {

struct MonteCarloResult {
  Estimate estimate;
  /// Count per OutcomeKind, indexed by the enum value.
  std::array<std::uint64_t, 5> by_kind{};
  /// Largest (common output round - first wake-up) over successful trials.
  std::optional<GlobalRound> max_success_round;

  friend bool operator==(const MonteCarloResult& a, const MonteCarloResult& b) {
    return a.estimate.failures == b.estimate.failures && a.estimate.trials == b.estimate.trials &&
           a.by_kind == b.by_kind && a.max_success_round == b.max_success_round;
  }
};

/// Fault seed for trial t; injective in t for a fixed base seed.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return detail::splitmix64(seed + trial * 0xda942042e4dd58b5ULL);
}

/// Runs `trials` independent trials with seeded faults at rate params.p.
/// The result depends only on the arguments, never on `threads`.
inline MonteCarloResult monte_carlo(const Params& params, const WakeupSchedule& schedule,
                                    const InputAssignment& inputs, std::uint64_t trials, std::uint64_t seed,
                                    GlobalRound horizon, unsigned threads = 1) {
  if (trials == 0) throw DomainError("trials must be at least 1");
  detail::check_horizon(params, inputs, horizon);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(trials, 256))));

  struct Partial {
    std::array<std::uint64_t, 5> by_kind{};
    std::optional<GlobalRound> max_round;
  };
  std::vector<Partial> parts(threads);
  auto work = [&](unsigned worker) {
    Partial& part = parts[worker];
    for (std::uint64_t t = worker; t < trials; t += threads) {
      const auto faults = FaultSource::seeded(trial_seed(seed, t), params.p.value());
      const TrialResult r = run_trial(params, schedule, inputs, faults, horizon, false);
      ++part.by_kind[static_cast<std::size_t>(r.outcome.kind)];
      if (r.outcome.success()) {
        const GlobalRound round = r.outcome.outputs.front()->round;
        part.max_round = part.max_round ? std::max(*part.max_round, round) : round;
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  MonteCarloResult out;
  for (const Partial& part : parts) {
    for (std::size_t k = 0; k < out.by_kind.size(); ++k) out.by_kind[k] += part.by_kind[k];
    if (part.max_round)
      out.max_success_round = out.max_success_round ? std::max(*out.max_success_round, *part.max_round)
                                                    : *part.max_round;
  }
  const std::uint64_t failures = trials - out.by_kind[static_cast<std::size_t>(OutcomeKind::Success)];
  out.estimate = wilson_estimate(failures, trials);
  return out;
}

}  // namespace beepmac
