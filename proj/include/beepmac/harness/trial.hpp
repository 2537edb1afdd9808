#pragma once

#include <beepmac/harness/network.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace beepmac {

/// Ordered by classification precedence: when several requirements fail, the
/// earliest listed failure kind wins.
enum class OutcomeKind : std::uint8_t { Success, Timeout, AgreementViolation, ValidityViolation, TimeDisagreement };

inline const char* to_string(OutcomeKind k) noexcept {
  switch (k) {
    case OutcomeKind::Success: return "Success";
    case OutcomeKind::Timeout: return "Timeout";
    case OutcomeKind::AgreementViolation: return "AgreementViolation";
    case OutcomeKind::ValidityViolation: return "ValidityViolation";
    case OutcomeKind::TimeDisagreement: return "TimeDisagreement";
  }
  return "?";
}

inline std::optional<OutcomeKind> outcome_kind_from_string(std::string_view s) {
  for (auto k : {OutcomeKind::Success, OutcomeKind::Timeout, OutcomeKind::AgreementViolation,
                 OutcomeKind::ValidityViolation, OutcomeKind::TimeDisagreement})
    if (s == to_string(k)) return k;
  return std::nullopt;
}

struct TrialOutcome {
  OutcomeKind kind = OutcomeKind::Success;
  /// Per-processor outputs; missing entries are processors without output.
  std::vector<std::optional<Output>> outputs;
  std::vector<ProcId> missing;

  bool success() const noexcept { return kind == OutcomeKind::Success; }
  friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

/// Checks termination, agreement, validity and time agreement.
inline TrialOutcome classify(const std::vector<std::optional<Output>>& outputs, const InputAssignment& inputs) {
  TrialOutcome out;
  out.outputs = outputs;
  for (ProcId id = 0; id < outputs.size(); ++id)
    if (!outputs[id]) out.missing.push_back(id);
  if (!out.missing.empty() || outputs.empty()) {
    out.kind = OutcomeKind::Timeout;
    return out;
  }
  const Output& first = *outputs.front();
  const bool same_value = std::ranges::all_of(outputs, [&](const auto& o) { return o->value == first.value; });
  const bool same_round = std::ranges::all_of(outputs, [&](const auto& o) { return o->round == first.round; });
  const auto common = inputs.common_value();
  if (!same_value)
    out.kind = OutcomeKind::AgreementViolation;
  else if (common && first.value != *common)
    out.kind = OutcomeKind::ValidityViolation;
  else if (!same_round)
    out.kind = OutcomeKind::TimeDisagreement;
  return out;
}

inline TrialOutcome classify(const Trace& trace, const InputAssignment& inputs, std::size_t n) {
  std::vector<std::optional<Output>> outputs(n);
  for (ProcId id = 0; id < n && id < trace.processors.size(); ++id) outputs[id] = trace.processors[id].output;
  return classify(outputs, inputs);
}

/// Longest codeword among the assigned inputs.
inline int max_codeword_length(const InputAssignment& inputs) {
  int k = 0;
  for (Value v : inputs.values()) k = std::max(k, Codeword::length_for(v));
  return k;
}

/// Smallest horizon run_trial accepts: room for the simultaneous GlobalSync,
/// an answer period, and the longest Decision.
inline GlobalRound minimum_horizon(const Params& params, const InputAssignment& inputs) {
  return simultaneous_sync_round(params.gamma) + 4 * params.gamma + 1 +
         2LL * params.x * max_codeword_length(inputs) + 1;
}

/// Bound on (common output round - first wake-up) in a successful run when w
/// is the smallest input.
inline GlobalRound round_bound(int gamma, int x, Value w) {
  return simultaneous_sync_round(gamma) + 4 * gamma + 2 + 2LL * x * Codeword::length_for(w) + 1;
}

/// Last spontaneous wake-up plus twice the worst-case run length.
inline GlobalRound default_horizon(const Params& params, const WakeupSchedule& schedule,
                                   const InputAssignment& inputs) {
  const GlobalRound longest = simultaneous_sync_round(params.gamma) + 4 * params.gamma + 2 +
                              2LL * params.x * max_codeword_length(inputs) + 1;
  return schedule.max_offset() + 2 * longest;
}

struct TrialResult {
  Trace trace;
  TrialOutcome outcome;
};

namespace detail {

inline TraceMeta make_meta(const Params& params, const WakeupSchedule& schedule, const InputAssignment& inputs,
                           const FaultSource& faults, GlobalRound horizon) {
  TraceMeta meta;
  meta.p = params.p.str();
  meta.sync_epsilon = params.sync_epsilon.str();
  meta.decision_epsilon = params.decision_epsilon.str();
  meta.gamma = params.gamma;
  meta.x = params.x;
  meta.offsets = schedule.offsets();
  meta.inputs = inputs.values();
  meta.value_set = inputs.value_set();
  meta.faults = faults.describe();
  if (const auto* s = std::get_if<FaultSource::Seeded>(&faults.mode())) meta.seed = s->seed;
  meta.horizon = horizon;
  return meta;
}

inline void check_horizon(const Params& params, const InputAssignment& inputs, GlobalRound horizon) {
  const GlobalRound need = minimum_horizon(params, inputs);
  if (horizon < need)
    throw HorizonTooSmall("horizon " + std::to_string(horizon) + " is below the minimum " + std::to_string(need));
}

}  // namespace detail

/// Runs one trial over rounds 0..horizon-1, stopping early once everybody
/// has output. With `record_rounds` false the trace keeps only summaries.
inline TrialResult run_trial(const Params& params, const WakeupSchedule& schedule, const InputAssignment& inputs,
                             const FaultSource& faults, GlobalRound horizon, bool record_rounds = true) {
  detail::check_horizon(params, inputs, horizon);
  Network net(params, schedule, inputs);
  TrialResult result;
  result.trace.meta = detail::make_meta(params, schedule, inputs, faults, horizon);
  while (net.round() < horizon && !net.all_done()) {
    const bool fault = faults.next_fault(net.round());
    RoundRecord rec = net.commit(net.plan(), fault);
    if (record_rounds) result.trace.records.push_back(std::move(rec));
  }
  for (const auto& p : net.processors()) result.trace.processors.push_back(p.summary);
  result.outcome = classify(result.trace, inputs, schedule.size());
  return result;
}

}  // namespace beepmac
