#pragma once

// Trace-level checks: channel rules, alarm-beep arithmetic of lonely
// processors, and silence right after the first good round t*.

#include <beepmac/adversary.hpp>
#include <beepmac/channel.hpp>
#include <beepmac/protocol/constants.hpp>

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace beepmac {

struct Violation {
  std::string check;  // "channel", "alarm-schedule", "alarm-count", "silence"
  GlobalRound round = 0;
  std::string detail;
};

namespace detail {

inline bool contains(const std::vector<ProcId>& v, ProcId id) { return std::ranges::find(v, id) != v.end(); }

inline bool dormant_at(const ProcessorSummary& s, GlobalRound t) {
  if (!s.wake_round) return true;
  return t < *s.wake_round || (t == *s.wake_round && s.woken_by_beep);
}

inline bool done_at(const ProcessorSummary& s, GlobalRound t) { return s.output && t >= s.output->round; }

inline bool in_global_sync(const ProcessorSummary& s, GlobalRound t) {
  return s.wake_round && t >= *s.wake_round && (!s.sync_round || t <= *s.sync_round);
}

inline void check_channel(const Trace& trace, std::vector<Violation>& out) {
  auto fail = [&](GlobalRound t, std::string msg) { out.push_back({"channel", t, std::move(msg)}); };
  const auto& procs = trace.processors;

  bool anchor = false;
  for (const auto& s : procs) anchor |= s.wake_round == GlobalRound{0} && !s.woken_by_beep;
  if (!procs.empty() && !anchor) fail(0, "no spontaneous wake-up in global round 0");

  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const RoundRecord& rec = trace.records[i];
    const GlobalRound t = rec.global_round;
    if (t != static_cast<GlobalRound>(i)) fail(t, "records are not contiguous from round 0");
    if (rec.fault && (!rec.hearers.empty() || !rec.woken.empty())) fail(t, "faulty round with hearers or woken");
    for (ProcId id : rec.beepers) {
      if (contains(rec.hearers, id)) fail(t, "processor " + std::to_string(id) + " both beeps and hears");
      if (id >= procs.size() || dormant_at(procs[id], t) || done_at(procs[id], t))
        fail(t, "processor " + std::to_string(id) + " beeps while not active");
    }
    for (ProcId id : rec.woken)
      if (id >= procs.size() || procs[id].wake_round != t || !procs[id].woken_by_beep)
        fail(t, "processor " + std::to_string(id) + " woken but not dormant at round start");
    for (ProcId id : rec.hearers)
      if (id >= procs.size() || dormant_at(procs[id], t) || done_at(procs[id], t))
        fail(t, "processor " + std::to_string(id) + " hears while not an awake listener");
    if (rec.fault || rec.beepers.empty()) {
      if (!rec.hearers.empty() || !rec.woken.empty()) fail(t, "beep heard without a fault-free beeper");
      continue;
    }
    for (ProcId id = 0; id < procs.size(); ++id) {
      if (contains(rec.beepers, id)) continue;
      if (dormant_at(procs[id], t)) {
        if (!contains(rec.woken, id)) fail(t, "dormant processor " + std::to_string(id) + " not woken by beep");
      } else if (!done_at(procs[id], t) && !contains(rec.hearers, id)) {
        fail(t, "listener " + std::to_string(id) + " missed a fault-free beep");
      }
    }
  }
  for (ProcId id = 0; id < procs.size(); ++id)
    if (procs[id].output && procs[id].output->round > trace.last_round())
      fail(procs[id].output->round, "output of processor " + std::to_string(id) + " after the last recorded round");
}

inline void check_alarm_arithmetic(const Trace& trace, int gamma, std::vector<Violation>& out) {
  const GlobalRound last = trace.last_round();
  const GlobalRound window = simultaneous_sync_round(gamma);
  std::set<GlobalRound> alarms;
  for (int i = 0; i < 3 * gamma; ++i) alarms.insert(alarm_round(gamma, i));

  for (ProcId id = 0; id < trace.processors.size(); ++id) {
    const auto& s = trace.processors[id];
    if (!s.wake_round || s.woken_by_beep) continue;
    const GlobalRound wake = *s.wake_round;
    GlobalRound first_heard = last + 1;
    for (GlobalRound t = wake; t <= last; ++t)
      if (detail::contains(trace.records[t].hearers, id)) {
        first_heard = t;
        break;
      }
    // While lonely and still looping, beeps fall exactly on the alarm rounds.
    for (GlobalRound t = wake; t < std::min({first_heard, wake + window, last + 1}); ++t) {
      const bool beeps = detail::contains(trace.records[t].beepers, id);
      if (beeps != alarms.contains(t - wake))
        out.push_back({"alarm-schedule", t,
                       "processor " + std::to_string(id) + (beeps ? " beeps off" : " silent on") +
                           " its alarm schedule at local round " + std::to_string(t - wake)});
    }
    // Lonely at wake + 4*gamma*i + i(i+1)/2 implies exactly i earlier beeps.
    for (int i = 0; i <= 3 * gamma; ++i) {
      const GlobalRound t = wake + alarm_round(gamma, i);
      if (t > last || first_heard <= t) break;
      std::int64_t count = 0;
      for (GlobalRound u = wake; u < t; ++u) count += detail::contains(trace.records[u].beepers, id);
      if (count != i)
        out.push_back({"alarm-count", t,
                       "processor " + std::to_string(id) + " beeped " + std::to_string(count) + " times, expected " +
                           std::to_string(i)});
    }
  }
}

/// t*: first fault-free round with a beeper and somebody to reach, before any
/// processor has left GlobalSync.
inline std::optional<GlobalRound> first_good_round(const Trace& trace) {
  for (const RoundRecord& rec : trace.records) {
    const GlobalRound t = rec.global_round;
    const bool someone_left = std::ranges::any_of(
        trace.processors, [&](const ProcessorSummary& s) { return s.sync_round && *s.sync_round < t; });
    if (someone_left) return std::nullopt;
    if (!rec.fault && !rec.beepers.empty() && (!rec.hearers.empty() || !rec.woken.empty())) return t;
  }
  return std::nullopt;
}

inline void check_silence(const Trace& trace, int gamma, const WakeupSchedule& schedule, std::vector<Violation>& out) {
  if (schedule.simultaneous()) return;
  const auto t_star = first_good_round(trace);
  if (!t_star) return;
  for (GlobalRound t = *t_star + 1; t <= *t_star + 2 * gamma && t <= trace.last_round(); ++t) {
    for (ProcId id : trace.records[t].beepers) {
      // Decision beeps are exempt.
      if (id < trace.processors.size() && in_global_sync(trace.processors[id], t))
        out.push_back({"silence", t,
                       "processor " + std::to_string(id) + " beeps " + std::to_string(t - *t_star) +
                           " rounds after t*=" + std::to_string(*t_star)});
    }
  }
}

}  // namespace detail

/// Empty result iff every check passes.
inline std::vector<Violation> verify_trace_invariants(const Trace& trace, int gamma, const WakeupSchedule& schedule) {
  std::vector<Violation> out;
  detail::check_channel(trace, out);
  for (std::size_t i = 0; i < trace.records.size(); ++i)
    if (trace.records[i].global_round != static_cast<GlobalRound>(i)) return out;
  detail::check_alarm_arithmetic(trace, gamma, out);
  detail::check_silence(trace, gamma, schedule, out);
  return out;
}

inline std::vector<Violation> verify_trace_invariants(const Trace& trace, const Params& params,
                                                      const WakeupSchedule& schedule) {
  return verify_trace_invariants(trace, params.gamma, schedule);
}

}  // namespace beepmac
