#pragma once

#include <beepmac/adversary.hpp>
#include <beepmac/channel.hpp>
#include <beepmac/protocol/constants.hpp>
#include <beepmac/protocol/decision.hpp>
#include <beepmac/protocol/global_sync.hpp>

#include <compare>
#include <span>
#include <variant>
#include <vector>

namespace beepmac {

/// Lockstep simulation of all processors on one channel.
///
/// A round is split in two:
/// `plan()` steps every processor (actions never depend on the current
/// round's fault bit) and `commit()` resolves the channel with a given bit.
class Network {
 public:
  struct Dormant {
    friend auto operator<=>(const Dormant&, const Dormant&) = default;
  };
  struct Done {
    friend auto operator<=>(const Done&, const Done&) = default;
  };
  using Phase = std::variant<Dormant, GlobalSync, Decision, Done>;

  struct Processor {
    Phase phase;
    bool heard_last = false;
    ProcessorSummary summary;
  };

  struct Plan {
    std::vector<Processor> procs;
    std::vector<Slot> slots;
  };

  Network(int gamma, int x, const WakeupSchedule& schedule, const InputAssignment& inputs)
      : gamma_(gamma), x_(x), schedule_(&schedule), inputs_(&inputs), procs_(schedule.size()) {
    if (schedule.size() != inputs.size())
      throw DomainError("schedule covers " + std::to_string(schedule.size()) + " processors but " +
                        std::to_string(inputs.size()) + " inputs were given");
  }

  Network(const Params& params, const WakeupSchedule& schedule, const InputAssignment& inputs)
      : Network(params.gamma, params.x, schedule, inputs) {}

  GlobalRound round() const noexcept { return round_; }
  std::size_t size() const noexcept { return procs_.size(); }
  const std::vector<Processor>& processors() const noexcept { return procs_; }

  bool all_done() const {
    return std::ranges::all_of(procs_, [](const Processor& p) { return std::holds_alternative<Done>(p.phase); });
  }

  Plan plan() const {
    Plan pl{procs_, std::vector<Slot>(procs_.size(), Slot::Dormant)};
    for (ProcId id = 0; id < pl.procs.size(); ++id) pl.slots[id] = act(id, pl.procs[id]);
    return pl;
  }

  RoundRecord commit(Plan plan, bool fault) {
    RoundRecord rec = resolve_round(plan.slots, fault, round_);
    procs_ = std::move(plan.procs);
    for (auto& p : procs_) p.heard_last = false;
    for (ProcId id : rec.hearers) procs_[id].heard_last = true;
    for (ProcId id : rec.woken) {
      auto& p = procs_[id];
      p.phase = GlobalSync::start(WakeKind::ByBeep, gamma_);
      p.heard_last = true;
      p.summary.wake_round = round_;
      p.summary.woken_by_beep = true;
    }
    ++round_;
    return rec;
  }

  /// Ordering key over the complete simulation state.
  friend bool operator<(const Network& a, const Network& b) {
    if (a.round_ != b.round_) return a.round_ < b.round_;
    return std::lexicographical_compare(a.procs_.begin(), a.procs_.end(), b.procs_.begin(), b.procs_.end(),
                                        [](const Processor& l, const Processor& r) {
                                          return std::tie(l.phase, l.heard_last, l.summary.wake_round,
                                                          l.summary.output) <
                                                 std::tie(r.phase, r.heard_last, r.summary.wake_round,
                                                          r.summary.output);
                                        });
  }

 private:
  Slot act(ProcId id, Processor& p) const {
    if (std::holds_alternative<Dormant>(p.phase)) {
      const auto offset = schedule_->offset(id);
      if (!offset || *offset != round_) return Slot::Dormant;
      p.phase = GlobalSync::start(WakeKind::Spontaneous, gamma_);
      p.summary.wake_round = round_;
    }
    if (const auto* gs = std::get_if<GlobalSync>(&p.phase); gs && gs->finished()) {
      p.phase = Decision::start(inputs_->value(id), inputs_->val0(), x_, *gs->sync_round());
    }
    const Observation obs = observe(p.heard_last);
    if (const auto* gs = std::get_if<GlobalSync>(&p.phase)) {
      auto r = gs->step(obs);
      if (const auto* ev = std::get_if<SyncRoundChosen>(&r.emitted))
        p.summary.sync_round = *p.summary.wake_round + ev->round;
      p.phase = std::move(r.state);
      return slot_of(r.action);
    }
    if (const auto* d = std::get_if<Decision>(&p.phase)) {
      auto r = d->step(obs);
      if (const auto* ev = std::get_if<OutputDecided>(&r.emitted)) {
        p.summary.output = Output{ev->value, *p.summary.wake_round + ev->round};
        p.phase = Done{};
        return Slot::Done;
      }
      p.phase = std::move(r.state);
      return slot_of(r.action);
    }
    return Slot::Done;
  }

  int gamma_;
  int x_;
  const WakeupSchedule* schedule_;
  const InputAssignment* inputs_;
  std::vector<Processor> procs_;
  GlobalRound round_ = 0;
};

}  // namespace beepmac
