#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace beepmac {

/// Bookkeeping index of a processor inside one trial. Protocol logic never
/// sees it; processors on the channel are anonymous.
using ProcId = std::uint32_t;

/// Round number on a processor's own clock (0 at its wake-up).
using LocalRound = std::int64_t;
/// Round number on the global clock (0 at the first spontaneous wake-up).
using GlobalRound = std::int64_t;

using Value = std::uint64_t;

enum class Action : std::uint8_t { Listen, Beep };

/// What a processor perceived in the round it just acted in.
enum class Observation : std::uint8_t { Silence, HeardBeep };

inline constexpr Observation observe(bool heard) noexcept {
  return heard ? Observation::HeardBeep : Observation::Silence;
}

inline const char* to_string(Action a) noexcept {
  return a == Action::Beep ? "beep" : "listen";
}

// Errors.

struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IllegalState : std::logic_error {
  using std::logic_error::logic_error;
};

struct ExplicitExhausted : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct NoSpontaneousWaker : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct HorizonTooSmall : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

class BranchBudgetExceeded : public std::runtime_error {
 public:
  BranchBudgetExceeded(int reached, int budget)
      : std::runtime_error("fault-relevant branch depth " + std::to_string(reached) +
                           " exceeds budget " + std::to_string(budget)),
        reached_(reached) {}
  int reached() const noexcept { return reached_; }

 private:
  int reached_;
};

}  // namespace beepmac
