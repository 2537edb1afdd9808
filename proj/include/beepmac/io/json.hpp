#pragma once

// JSON serialisation: trace files (JSON lines), experiment configuration
// documents, and Monte Carlo / exact result documents.

#include <beepmac/adversary.hpp>
#include <beepmac/channel.hpp>
#include <beepmac/harness/exact.hpp>
#include <beepmac/harness/monte_carlo.hpp>
#include <beepmac/harness/trial.hpp>

#include <nlohmann/json.hpp>

#include <istream>
#include <ostream>
#include <string>

namespace beepmac::io {

using nlohmann::json;

inline constexpr int trace_schema_version = 1;
inline constexpr int result_schema_version = 1;

inline json offsets_to_json(const std::vector<std::optional<GlobalRound>>& offsets) {
  json arr = json::array();
  for (const auto& o : offsets) arr.push_back(o ? json(*o) : json(nullptr));
  return arr;
}

inline std::vector<std::optional<GlobalRound>> offsets_from_json(const json& arr) {
  std::vector<std::optional<GlobalRound>> out;
  for (const auto& v : arr) {
    if (v.is_null())
      out.emplace_back();
    else
      out.emplace_back(v.get<GlobalRound>());
  }
  return out;
}

// ---- schedule / inputs configuration document ----

inline json adversary_to_json(const WakeupSchedule& schedule, const InputAssignment& inputs) {
  return {{"processors", schedule.size()},
          {"offsets", offsets_to_json(schedule.offsets())},
          {"values", inputs.values()},
          {"value_set", inputs.value_set()}};
}

struct AdversaryConfig {
  WakeupSchedule schedule;
  InputAssignment inputs;
};

inline AdversaryConfig adversary_from_json(const json& doc) {
  const auto offsets = offsets_from_json(doc.at("offsets"));
  const auto values = doc.at("values").get<std::vector<Value>>();
  const auto value_set = doc.value("value_set", std::vector<Value>{});
  if (doc.contains("processors") && doc.at("processors").get<std::size_t>() != offsets.size())
    throw DomainError("'processors' disagrees with the number of offsets");
  if (values.size() != offsets.size()) throw DomainError("'values' and 'offsets' differ in length");
  return {WakeupSchedule::from_offsets(offsets), InputAssignment(values, value_set)};
}

// ---- trace (JSON lines) ----

inline json meta_to_json(const TraceMeta& m) {
  return {{"p", m.p},
          {"sync_epsilon", m.sync_epsilon},
          {"decision_epsilon", m.decision_epsilon},
          {"gamma", m.gamma},
          {"x", m.x},
          {"offsets", offsets_to_json(m.offsets)},
          {"inputs", m.inputs},
          {"value_set", m.value_set},
          {"faults", m.faults},
          {"seed", m.seed},
          {"horizon", m.horizon}};
}

inline TraceMeta meta_from_json(const json& j) {
  TraceMeta m;
  m.p = j.at("p").get<std::string>();
  m.sync_epsilon = j.at("sync_epsilon").get<std::string>();
  m.decision_epsilon = j.at("decision_epsilon").get<std::string>();
  m.gamma = j.at("gamma").get<int>();
  m.x = j.at("x").get<int>();
  m.offsets = offsets_from_json(j.at("offsets"));
  m.inputs = j.at("inputs").get<std::vector<Value>>();
  m.value_set = j.at("value_set").get<std::vector<Value>>();
  m.faults = j.at("faults").get<std::string>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.horizon = j.at("horizon").get<GlobalRound>();
  return m;
}

inline json record_to_json(const RoundRecord& r) {
  return {{"type", "round"},   {"round", r.global_round}, {"fault", r.fault},
          {"beepers", r.beepers}, {"hearers", r.hearers},    {"woken", r.woken}};
}

inline json output_to_json(const std::optional<Output>& o) {
  if (!o) return nullptr;
  return {{"value", o->value}, {"round", o->round}};
}

/// Writes a trace as JSON lines: a header with the schema version and the
/// configuration echo, one object per round, then the outputs object.
inline void write_trace(std::ostream& os, const Trace& trace, const TrialOutcome& outcome) {
  os << json{{"type", "header"}, {"schema", "beepmac.trace"}, {"schema_version", trace_schema_version},
             {"meta", meta_to_json(trace.meta)}}
            .dump()
     << '\n';
  for (const auto& r : trace.records) os << record_to_json(r).dump() << '\n';
  json procs = json::array();
  json outputs = json::object();
  for (ProcId id = 0; id < trace.processors.size(); ++id) {
    const auto& s = trace.processors[id];
    procs.push_back({{"id", id},
                     {"wake_round", s.wake_round ? json(*s.wake_round) : json(nullptr)},
                     {"woken_by_beep", s.woken_by_beep},
                     {"sync_round", s.sync_round ? json(*s.sync_round) : json(nullptr)},
                     {"output", output_to_json(s.output)}});
    if (s.output) outputs[std::to_string(id)] = output_to_json(s.output);
  }
  os << json{{"type", "outputs"},
             {"outputs", outputs},
             {"processors", procs},
             {"outcome", {{"kind", to_string(outcome.kind)}, {"missing", outcome.missing}}}}
            .dump()
     << '\n';
}

struct ParsedTrace {
  Trace trace;
  std::optional<OutcomeKind> outcome;
};

inline ParsedTrace read_trace(std::istream& is) {
  ParsedTrace out;
  std::string line;
  bool header = false, footer = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      if (j.at("schema_version").get<int>() != trace_schema_version)
        throw DomainError("unsupported trace schema version");
      out.trace.meta = meta_from_json(j.at("meta"));
      header = true;
    } else if (type == "round") {
      RoundRecord r;
      r.global_round = j.at("round").get<GlobalRound>();
      r.fault = j.at("fault").get<bool>();
      r.beepers = j.at("beepers").get<std::vector<ProcId>>();
      r.hearers = j.at("hearers").get<std::vector<ProcId>>();
      r.woken = j.at("woken").get<std::vector<ProcId>>();
      out.trace.records.push_back(std::move(r));
    } else if (type == "outputs") {
      for (const auto& p : j.at("processors")) {
        ProcessorSummary s;
        if (!p.at("wake_round").is_null()) s.wake_round = p.at("wake_round").get<GlobalRound>();
        s.woken_by_beep = p.at("woken_by_beep").get<bool>();
        if (!p.at("sync_round").is_null()) s.sync_round = p.at("sync_round").get<GlobalRound>();
        if (!p.at("output").is_null())
          s.output = Output{p.at("output").at("value").get<Value>(), p.at("output").at("round").get<GlobalRound>()};
        out.trace.processors.push_back(s);
      }
      if (j.contains("outcome")) out.outcome = outcome_kind_from_string(j.at("outcome").at("kind").get<std::string>());
      footer = true;
    } else {
      throw DomainError("unknown trace line type '" + type + "'");
    }
  }
  if (!header || !footer) throw DomainError("trace is missing its header or outputs line");
  return out;
}

// ---- result documents ----

inline json outcome_counts_to_json(const std::array<std::uint64_t, 5>& by_kind) {
  json j = json::object();
  for (std::size_t k = 0; k < by_kind.size(); ++k) j[to_string(static_cast<OutcomeKind>(k))] = by_kind[k];
  return j;
}

inline json params_to_json(const Params& prm) {
  return {{"p", prm.p.str()},
          {"epsilon", prm.epsilon.str()},
          {"sync_epsilon", prm.sync_epsilon.str()},
          {"decision_epsilon", prm.decision_epsilon.str()},
          {"gamma", prm.gamma},
          {"x", prm.x}};
}

inline json estimate_to_json(const Params& prm, const WakeupSchedule& schedule, const InputAssignment& inputs,
                             std::uint64_t seed, GlobalRound horizon, const MonteCarloResult& r) {
  json j = params_to_json(prm);
  j["schema"] = "beepmac.estimate";
  j["schema_version"] = result_schema_version;
  j["n"] = schedule.size();
  j["schedule"] = {{"kind", schedule.kind()}, {"offsets", offsets_to_json(schedule.offsets())}};
  j["inputs"] = inputs.values();
  j["value_set"] = inputs.value_set();
  j["w"] = inputs.w();
  j["seed"] = seed;
  j["horizon"] = horizon;
  j["trials"] = r.estimate.trials;
  j["failures"] = r.estimate.failures;
  j["point"] = r.estimate.point;
  j["ci_low"] = r.estimate.ci_low;
  j["ci_high"] = r.estimate.ci_high;
  j["confidence"] = 0.99;
  j["outcomes"] = outcome_counts_to_json(r.by_kind);
  j["max_rounds_to_output"] = r.max_success_round ? json(*r.max_success_round) : json(nullptr);
  j["round_bound"] = round_bound(prm.gamma, prm.x, inputs.w());
  return j;
}

inline json exact_to_json(const Params& prm, const WakeupSchedule& schedule, const InputAssignment& inputs,
                          GlobalRound horizon, int budget, const ExactResult& r) {
  json j = params_to_json(prm);
  j["schema"] = "beepmac.exact";
  j["schema_version"] = result_schema_version;
  j["n"] = schedule.size();
  j["schedule"] = {{"kind", schedule.kind()}, {"offsets", offsets_to_json(schedule.offsets())}};
  j["inputs"] = inputs.values();
  j["value_set"] = inputs.value_set();
  j["horizon"] = horizon;
  j["branch_budget"] = budget;
  j["failure_probability"] = Probability::render(r.failure_probability);
  j["failure_probability_decimal"] = r.failure_probability.convert_to<double>();
  json kinds = json::object();
  for (std::size_t k = 1; k < r.by_kind.size(); ++k)
    kinds[to_string(static_cast<OutcomeKind>(k))] = Probability::render(r.by_kind[k]);
  j["by_kind"] = kinds;
  j["total_mass"] = Probability::render(r.total_mass);
  j["branch_count"] = r.branch_count;
  j["leaves"] = r.leaves;
  j["states"] = r.states;
  return j;
}

}  // namespace beepmac::io
