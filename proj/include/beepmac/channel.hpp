#pragma once

// Global-round semantics of the faulty beeping multiple access channel.

#include <beepmac/core.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace beepmac {

/// What occupies a processor's slot on the channel in a given round.
/// Done processors have produced their output; they neither beep nor hear.
enum class Slot : std::uint8_t { Dormant, Listen, Beep, Done };

inline constexpr Slot slot_of(Action a) noexcept { return a == Action::Beep ? Slot::Beep : Slot::Listen; }

struct RoundRecord {
  GlobalRound global_round = 0;
  bool fault = false;
  std::vector<ProcId> beepers;
  std::vector<ProcId> hearers;
  std::vector<ProcId> woken;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// True when the round's fault bit can change what anybody observes: someone
/// beeps and someone (awake listener or dormant) could be reached.
inline bool fault_relevant(std::span<const Slot> slots) noexcept {
  const bool beeper = std::ranges::any_of(slots, [](Slot s) { return s == Slot::Beep; });
  const bool reachable = std::ranges::any_of(slots, [](Slot s) { return s == Slot::Listen || s == Slot::Dormant; });
  return beeper && reachable;
}

/// Resolves one global round. `slots[id]` is processor id's situation at the
/// start of the round. In a fault-free round with at least one beeper every
/// awake listener hears and every dormant processor wakes; in a faulty round
/// nothing is heard and nobody wakes.
inline RoundRecord resolve_round(std::span<const Slot> slots, bool fault, GlobalRound global_round) {
  RoundRecord rec;
  rec.global_round = global_round;
  rec.fault = fault;
  for (ProcId id = 0; id < slots.size(); ++id)
    if (slots[id] == Slot::Beep) rec.beepers.push_back(id);
  if (fault || rec.beepers.empty()) return rec;
  for (ProcId id = 0; id < slots.size(); ++id) {
    if (slots[id] == Slot::Listen) rec.hearers.push_back(id);
    if (slots[id] == Slot::Dormant) rec.woken.push_back(id);
  }
  return rec;
}

namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0,1) that depends only on (key, counter).
inline constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) noexcept {
  const std::uint64_t h = splitmix64(splitmix64(key) ^ splitmix64(counter ^ 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Per-round channel fault bits: either i.i.d. Bernoulli(p) keyed by a seed,
/// or an explicit finite sequence.
class FaultSource {
 public:
  struct Seeded {
    std::uint64_t seed = 0;
    double p = 0.0;
  };
  struct Explicit {
    std::vector<bool> bits;
  };

  static FaultSource seeded(std::uint64_t seed, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("fault probability must lie in [0,1]");
    return FaultSource(Seeded{seed, p});
  }
  static FaultSource explicit_bits(std::vector<bool> bits) { return FaultSource(Explicit{std::move(bits)}); }
  /// Fault-free channel for any number of rounds.
  static FaultSource none() { return seeded(0, 0.0); }

  /// Counter-style: the bit for a round is a pure function of (seed, round),
  /// so out-of-order and repeated queries agree.
  bool next_fault(GlobalRound round) const {
    if (round < 0) throw DomainError("negative global round");
    if (const auto* s = std::get_if<Seeded>(&mode_)) {
      return detail::counter_uniform(s->seed, static_cast<std::uint64_t>(round)) < s->p;
    }
    const auto& bits = std::get<Explicit>(mode_).bits;
    if (static_cast<std::size_t>(round) >= bits.size())
      throw ExplicitExhausted("explicit fault sequence of length " + std::to_string(bits.size()) +
                              " has no bit for round " + std::to_string(round));
    return bits[static_cast<std::size_t>(round)];
  }

  const std::variant<Seeded, Explicit>& mode() const noexcept { return mode_; }

  std::string describe() const {
    if (const auto* s = std::get_if<Seeded>(&mode_)) {
      if (s->p <= 0.0) return "none";
      return "seeded:" + std::to_string(s->seed);
    }
    std::string out = "explicit:";
    for (bool b : std::get<Explicit>(mode_).bits) out += b ? '1' : '0';
    return out;
  }

 private:
  explicit FaultSource(std::variant<Seeded, Explicit> m) : mode_(std::move(m)) {}
  std::variant<Seeded, Explicit> mode_;
};

struct Output {
  Value value = 0;
  GlobalRound round = 0;
  friend auto operator<=>(const Output&, const Output&) = default;
};

/// Per-processor lifecycle facts recovered from a run.
struct ProcessorSummary {
  std::optional<GlobalRound> wake_round;
  bool woken_by_beep = false;
  /// Global round in which the processor exits GlobalSync.
  std::optional<GlobalRound> sync_round;
  std::optional<Output> output;
  friend bool operator==(const ProcessorSummary&, const ProcessorSummary&) = default;
};

/// Echo of the configuration that produced a trace.
struct TraceMeta {
  std::string p;
  std::string sync_epsilon;
  std::string decision_epsilon;
  int gamma = 0;
  int x = 0;
  std::vector<std::optional<GlobalRound>> offsets;
  std::vector<Value> inputs;
  std::vector<Value> value_set;
  std::string faults;
  std::uint64_t seed = 0;
  GlobalRound horizon = 0;
  friend bool operator==(const TraceMeta&, const TraceMeta&) = default;
};

struct Trace {
  std::vector<RoundRecord> records;
  std::vector<ProcessorSummary> processors;
  TraceMeta meta;

  std::map<ProcId, Output> outputs() const {
    std::map<ProcId, Output> out;
    for (ProcId id = 0; id < processors.size(); ++id)
      if (processors[id].output) out.emplace(id, *processors[id].output);
    return out;
  }
  GlobalRound last_round() const { return records.empty() ? -1 : records.back().global_round; }

  friend bool operator==(const Trace&, const Trace&) = default;
};

}  // namespace beepmac
