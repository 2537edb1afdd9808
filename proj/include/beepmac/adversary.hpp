#pragma once

// Adversary choices made before any fault bit is drawn: who wakes up
// spontaneously and when, and which input each processor holds.

#include <beepmac/core.hpp>
#include <beepmac/protocol/constants.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace beepmac {

/// Spontaneous wake-up rounds, normalised so the earliest is global round 0.
/// A processor without an offset only wakes when it hears a beep.
class WakeupSchedule {
 public:
  WakeupSchedule() = default;

  /// Normalises the present offsets so their minimum becomes 0.
  static WakeupSchedule from_offsets(std::vector<std::optional<GlobalRound>> offsets, std::string kind = "staggered") {
    std::optional<GlobalRound> lowest;
    for (const auto& o : offsets) {
      if (!o) continue;
      if (*o < 0) throw DomainError("wake-up offsets must be non-negative");
      lowest = lowest ? std::min(*lowest, *o) : *o;
    }
    if (!lowest) throw NoSpontaneousWaker("at least one processor must wake up spontaneously");
    for (auto& o : offsets)
      if (o) *o -= *lowest;
    WakeupSchedule s;
    s.offsets_ = std::move(offsets);
    s.kind_ = std::move(kind);
    return s;
  }

  std::size_t size() const noexcept { return offsets_.size(); }
  const std::vector<std::optional<GlobalRound>>& offsets() const noexcept { return offsets_; }
  std::optional<GlobalRound> offset(ProcId id) const { return offsets_.at(id); }
  const std::string& kind() const noexcept { return kind_; }

  GlobalRound max_offset() const {
    GlobalRound m = 0;
    for (const auto& o : offsets_)
      if (o) m = std::max(m, *o);
    return m;
  }

  /// Every processor wakes spontaneously in the same round.
  bool simultaneous() const {
    return std::ranges::all_of(offsets_, [](const auto& o) { return o && *o == 0; });
  }

  friend bool operator==(const WakeupSchedule& a, const WakeupSchedule& b) { return a.offsets_ == b.offsets_; }

 private:
  std::vector<std::optional<GlobalRound>> offsets_;
  std::string kind_;
};

inline WakeupSchedule schedule_simultaneous(std::size_t n) {
  if (n == 0) throw DomainError("need at least one processor");
  return WakeupSchedule::from_offsets(std::vector<std::optional<GlobalRound>>(n, GlobalRound{0}), "simultaneous");
}

inline WakeupSchedule schedule_staggered(std::vector<std::optional<GlobalRound>> offsets) {
  return WakeupSchedule::from_offsets(std::move(offsets), "staggered");
}

/// Processor j wakes exactly when processor 0 (if still lonely) sounds its
/// j-th alarm beep, so every first beep lands on an earlier processor's alarm.
inline WakeupSchedule schedule_alignment_attack(int gamma, std::size_t n) {
  if (n < 2) throw DomainError("alignment attack needs at least two processors");
  if (gamma < 1) throw DomainError("gamma must be positive");
  std::vector<std::optional<GlobalRound>> offsets;
  for (std::size_t j = 0; j < n; ++j) offsets.emplace_back(alarm_round(gamma, static_cast<int>(j)));
  return WakeupSchedule::from_offsets(std::move(offsets), "alignment");
}

/// Offsets i.i.d. uniform on [0, max_offset], then normalised.
inline WakeupSchedule schedule_random(std::size_t n, GlobalRound max_offset, std::uint64_t seed) {
  if (n == 0) throw DomainError("need at least one processor");
  if (max_offset < 0) throw DomainError("max_offset must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<GlobalRound> dist(0, max_offset);
  std::vector<std::optional<GlobalRound>> offsets;
  for (std::size_t j = 0; j < n; ++j) offsets.emplace_back(dist(rng));
  return WakeupSchedule::from_offsets(std::move(offsets), "random");
}

/// Input values per processor together with the value set V.
class InputAssignment {
 public:
  InputAssignment() = default;

  /// An empty `value_set` means V is exactly the set of assigned values.
  InputAssignment(std::vector<Value> values, std::vector<Value> value_set = {}) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("need at least one input value");
    std::set<Value> v(value_set.begin(), value_set.end());
    if (v.empty()) v.insert(values_.begin(), values_.end());
    for (Value a : values_)
      if (!v.contains(a)) throw DomainError("input " + std::to_string(a) + " is not in the value set");
    value_set_.assign(v.begin(), v.end());
  }

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<Value>& values() const noexcept { return values_; }
  Value value(ProcId id) const { return values_.at(id); }
  const std::vector<Value>& value_set() const noexcept { return value_set_; }
  /// Default decision value: the smallest element of V.
  Value val0() const { return value_set_.front(); }
  /// Smallest assigned input.
  Value w() const { return *std::ranges::min_element(values_); }

  std::optional<Value> common_value() const {
    const Value first = values_.front();
    if (std::ranges::all_of(values_, [&](Value v) { return v == first; })) return first;
    return std::nullopt;
  }

  friend bool operator==(const InputAssignment&, const InputAssignment&) = default;

 private:
  std::vector<Value> values_;
  std::vector<Value> value_set_;
};

}  // namespace beepmac
