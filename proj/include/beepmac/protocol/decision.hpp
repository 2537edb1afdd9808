#pragma once

#include <beepmac/protocol/codeword.hpp>
#include <beepmac/protocol/events.hpp>

#include <compare>
#include <cstddef>

namespace beepmac {

/// Consensus decision state machine, run after GlobalSync.
///
/// Symbol i of the codeword owns a window of 2x rounds: a 1 beeps for x rounds
/// then listens for x, a 0 listens then beeps. Any beep heard during a window
/// makes the processor output the default value at the end of that window;
/// getting through all k windows in silence outputs its own value. Output
/// happens in local round r + 2jx + 1 where j is the last window played.
class Decision {
 public:
  /// `sync_local` is this processor's local clock at the global sync round;
  /// the first window starts in the round after it.
  static Decision start(Value val, Value val0, int x, LocalRound sync_local) {
    if (x < 1) throw DomainError("x must be positive");
    return Decision(Codeword(val), val0, x, sync_local);
  }

  const Codeword& codeword() const noexcept { return codeword_; }
  std::size_t window() const noexcept { return i_; }
  int sub_round() const noexcept { return sub_round_; }
  bool heard() const noexcept { return heard_; }
  bool done() const noexcept { return done_; }
  LocalRound clock() const noexcept { return clock_; }
  LocalRound sync_local() const noexcept { return r_; }
  Value value() const noexcept { return codeword_.value(); }
  Value default_value() const noexcept { return val0_; }
  int x() const noexcept { return x_; }

  [[nodiscard]] StepResult<Decision> step(Observation obs) const {
    if (done_) throw IllegalState("Decision stepped after its output");
    Decision next = *this;
    if (clock_ > r_ + 1) {
      // obs belongs to sub-round sub_round_-1 of window i_.
      const bool was_listening = (codeword_.symbol(i_) == (sub_round_ - 1 >= x_));
      if (was_listening && obs == Observation::HeardBeep) next.heard_ = true;
    }
    if (next.sub_round_ == 2 * x_) {
      if (next.heard_ || next.i_ == codeword_.size()) {
        next.done_ = true;
        const Value out = next.heard_ ? val0_ : codeword_.value();
        ++next.clock_;
        return {Action::Listen, std::move(next), OutputDecided{out, clock_}};
      }
      ++next.i_;
      next.sub_round_ = 0;
    }
    const Action action = next.planned_action();
    ++next.sub_round_;
    ++next.clock_;
    return {action, std::move(next), {}};
  }

  friend bool operator==(const Decision&, const Decision&) = default;
  friend auto operator<=>(const Decision&, const Decision&) = default;

 private:
  Action planned_action() const {
    const bool first_half = sub_round_ < x_;
    return codeword_.symbol(i_) == first_half ? Action::Beep : Action::Listen;
  }

  Decision(Codeword cw, Value val0, int x, LocalRound r)
      : codeword_(cw), val0_(val0), x_(x), r_(r), clock_(r + 1) {}

  Codeword codeword_;
  Value val0_;
  int x_;
  LocalRound r_;
  LocalRound clock_;
  std::size_t i_ = 1;
  int sub_round_ = 0;
  bool heard_ = false;
  bool done_ = false;
};

}  // namespace beepmac
