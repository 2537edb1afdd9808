#pragma once

#include <beepmac/protocol/codeword.hpp>
#include <beepmac/protocol/constants.hpp>
#include <beepmac/protocol/events.hpp>

#include <compare>
#include <optional>
#include <variant>

namespace beepmac {

/// Outcome of counting beeps in the two 2*gamma blocks following an alarm beep.
struct HVector {
  BlockCount h1 = BlockCount::Zero;
  BlockCount h2 = BlockCount::Zero;
  friend constexpr bool operator==(const HVector&, const HVector&) = default;
};

/// [0 0], [0 1], [1 0], [1 1], [1 *]: the first heard beep was an alarm beep,
/// so the listener answers it. The remaining four vectors mean the beeps heard
/// were answers to this processor's own alarm.
inline constexpr bool heard_alarm(HVector h) noexcept {
  return h.h1 == BlockCount::One || (h.h1 == BlockCount::Zero && h.h2 != BlockCount::Many);
}

enum class WakeKind : std::uint8_t { Spontaneous, ByBeep };

/// Clock synchronisation state machine for one processor.
///
/// `clock()` is the local round the next `step` acts in. `step(obs)` first
/// absorbs `obs`, the outcome of the previous local round, then returns the
/// action for the current round. The machine is finished once it has acted in
/// its sync round; the caller then hands over to Decision.
class GlobalSync {
 public:
  struct BeepWoken {
    LocalRound heard = 0;
    friend auto operator<=>(const BeepWoken&, const BeepWoken&) = default;
  };
  struct SpontaneousLoop {
    int i = 0;
    LocalRound current_beep = 0;
    LocalRound next_beep = 0;
    int num1 = 0;
    int num2 = 0;
    std::optional<LocalRound> heard;
    friend auto operator<=>(const SpontaneousLoop&, const SpontaneousLoop&) = default;
  };
  struct Responding {
    LocalRound heard = 0;
    friend auto operator<=>(const Responding&, const Responding&) = default;
  };
  struct Waiting {
    LocalRound sync_round = 0;
    friend auto operator<=>(const Waiting&, const Waiting&) = default;
  };
  using Mode = std::variant<BeepWoken, SpontaneousLoop, Responding, Waiting>;

  /// A beep-woken processor heard the waking beep at local round 0 and acts
  /// next in local round 1.
  static GlobalSync start(WakeKind wake, int gamma) {
    if (gamma < 1) throw DomainError("gamma must be positive");
    if (wake == WakeKind::ByBeep) return GlobalSync(gamma, BeepWoken{0}, 1);
    return GlobalSync(gamma, SpontaneousLoop{}, 0);
  }

  int gamma() const noexcept { return gamma_; }
  LocalRound clock() const noexcept { return clock_; }
  const Mode& mode() const noexcept { return mode_; }

  /// Local round in which this processor leaves GlobalSync, once fixed.
  std::optional<LocalRound> sync_round() const {
    return std::visit(
        [&](const auto& m) -> std::optional<LocalRound> {
          using M = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<M, BeepWoken> || std::is_same_v<M, Responding>)
            return m.heard + 4 * gamma_ + 1;
          else if constexpr (std::is_same_v<M, Waiting>)
            return m.sync_round;
          else
            return std::nullopt;
        },
        mode_);
  }

  bool finished() const {
    const auto s = sync_round();
    return s && clock_ > *s;
  }

  [[nodiscard]] StepResult<GlobalSync> step(Observation obs) const {
    if (finished()) throw IllegalState("GlobalSync stepped after its sync round");
    GlobalSync next = *this;
    Event emitted;
    Action action = Action::Listen;
    if (const auto* loop = std::get_if<SpontaneousLoop>(&mode_)) {
      action = next.advance_loop(*loop, obs, emitted);
    } else {
      if (std::holds_alternative<BeepWoken>(mode_) && clock_ == 1) emitted = SyncRoundChosen{*sync_round()};
      action = next.scheduled_action();
    }
    ++next.clock_;
    return {action, std::move(next), emitted};
  }

  friend bool operator==(const GlobalSync&, const GlobalSync&) = default;
  friend auto operator<=>(const GlobalSync&, const GlobalSync&) = default;

 private:
  GlobalSync(int gamma, Mode mode, LocalRound clock) : gamma_(gamma), mode_(mode), clock_(clock) {}

  /// Spontaneous-loop bookkeeping for the current round; may leave the loop.
  Action advance_loop(SpontaneousLoop loop, Observation obs, Event& emitted) {
    const LocalRound g2 = 2 * gamma_;
    const LocalRound prev = clock_ - 1;
    if (clock_ > 0 && prev > loop.current_beep && obs == Observation::HeardBeep) {
      if (!loop.heard) loop.heard = prev;
      if (prev <= loop.current_beep + g2)
        ++loop.num1;
      else if (prev <= loop.current_beep + 2 * g2)
        ++loop.num2;
    }

    if (loop.heard) {
      // listenVector over the two blocks after current_beep, resolved as soon
      // as the branch is determined. An answer starts at heard+2*gamma+1,
      // which is never earlier than that point.
      const LocalRound block1_end = loop.current_beep + g2;
      const LocalRound block2_end = loop.current_beep + 2 * g2;
      std::optional<HVector> h;
      if (*loop.heard <= block1_end) {
        if (prev >= block1_end) h = HVector{classify_block(loop.num1), BlockCount::Zero};
      } else if (*loop.heard <= block2_end) {
        if (prev >= block2_end) h = HVector{BlockCount::Zero, classify_block(loop.num2)};
      } else {
        h = HVector{BlockCount::Zero, BlockCount::Zero};
      }
      if (!h) {
        mode_ = loop;
        return Action::Listen;
      }
      if (heard_alarm(*h))
        mode_ = Responding{*loop.heard};
      else
        mode_ = Waiting{loop.current_beep + 2 * g2 + 1};
      emitted = SyncRoundChosen{*sync_round()};
      return scheduled_action();
    }

    if (clock_ != loop.next_beep) {
      mode_ = loop;
      return Action::Listen;
    }
    loop.current_beep = loop.next_beep;
    ++loop.i;
    loop.next_beep = loop.current_beep + 4 * gamma_ + loop.i;
    loop.num1 = loop.num2 = 0;
    if (loop.i == 3 * gamma_) {
      // Last alarm beep; wait out the final gap.
      mode_ = Waiting{loop.next_beep};
      emitted = SyncRoundChosen{loop.next_beep};
    } else {
      mode_ = loop;
    }
    return Action::Beep;
  }

  /// Action outside the spontaneous loop: answer beeps for a responder,
  /// silence otherwise.
  Action scheduled_action() const {
    LocalRound heard = 0;
    if (const auto* b = std::get_if<BeepWoken>(&mode_))
      heard = b->heard;
    else if (const auto* r = std::get_if<Responding>(&mode_))
      heard = r->heard;
    else
      return Action::Listen;
    const LocalRound first = heard + 2 * gamma_ + 1;
    return clock_ >= first && clock_ < first + 2 * gamma_ ? Action::Beep : Action::Listen;
  }

  int gamma_;
  Mode mode_;
  LocalRound clock_;
};

}  // namespace beepmac
