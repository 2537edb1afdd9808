#pragma once

// Command-line front end: run, montecarlo, exact, sweep, check.

#include <beepmac/beepmac.hpp>
#include <beepmac/io/json.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace beepmac::cli {

using io::json;

/// Exit codes.
inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_budget = 3;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string p;
  std::string epsilon;
  std::optional<std::string> sync_epsilon;
  std::optional<std::string> decision_epsilon;
  std::optional<std::size_t> n;
  std::string schedule = "simultaneous";
  std::vector<Value> inputs;
  std::vector<Value> value_set;
  std::uint64_t trials = 1;
  std::optional<std::uint64_t> seed;
  std::optional<GlobalRound> horizon;
  std::string faults = "seeded";
  unsigned threads = 1;
  int budget = default_branch_budget;
  std::string format = "json";
  std::string output;
  std::vector<std::string> grid_p;
  std::vector<std::string> grid_epsilon;
  std::vector<std::size_t> grid_n;
  std::vector<Value> grid_w;
  std::string w_mode = "same";
  std::string trace_path;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  if (s.empty()) return out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

template <class T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw UsageError(std::string("invalid ") + what + ": '" + s + "'");
  return v;
}

inline std::vector<Value> parse_values(const std::string& s) {
  std::vector<Value> out;
  for (const auto& item : split(s)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<Value>(item, "value"));
      continue;
    }
    const Value lo = parse_number<Value>(item.substr(0, dots), "range start");
    const Value hi = parse_number<Value>(item.substr(dots + 2), "range end");
    if (hi < lo || hi - lo > 1'000'000) throw UsageError("value range '" + item + "' is empty or too large");
    for (Value v = lo; v <= hi; ++v) out.push_back(v);
  }
  return out;
}

inline std::string fmt_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <class T>
std::vector<T> cycle_to(const std::vector<T>& base, std::size_t n) {
  std::vector<T> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(base[i % base.size()]);
  return out;
}

}  // namespace detail

/// Applies a JSON configuration document; keys mirror the long flag names.
inline void apply_config(ExperimentConfig& c, const json& doc) {
  auto str = [&](const char* key, std::string& dst) {
    if (!doc.contains(key)) return;
    const auto& v = doc.at(key);
    dst = v.is_string() ? v.get<std::string>() : v.dump();
  };
  str("p", c.p);
  str("epsilon", c.epsilon);
  if (doc.contains("sync_epsilon")) c.sync_epsilon = doc.at("sync_epsilon").get<std::string>();
  if (doc.contains("decision_epsilon")) c.decision_epsilon = doc.at("decision_epsilon").get<std::string>();
  if (doc.contains("processors")) c.n = doc.at("processors").get<std::size_t>();
  str("schedule", c.schedule);
  if (doc.contains("offsets")) {
    std::string desc = "staggered:";
    bool first = true;
    for (const auto& o : doc.at("offsets")) {
      desc += (first ? "" : ",") + (o.is_null() ? std::string("-") : std::to_string(o.get<GlobalRound>()));
      first = false;
    }
    c.schedule = desc;
  }
  if (doc.contains("values")) c.inputs = doc.at("values").get<std::vector<Value>>();
  if (doc.contains("value_set")) c.value_set = doc.at("value_set").get<std::vector<Value>>();
  if (doc.contains("trials")) c.trials = doc.at("trials").get<std::uint64_t>();
  if (doc.contains("seed")) c.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("horizon")) c.horizon = doc.at("horizon").get<GlobalRound>();
  str("faults", c.faults);
  if (doc.contains("threads")) c.threads = doc.at("threads").get<unsigned>();
  if (doc.contains("budget")) c.budget = doc.at("budget").get<int>();
  str("format", c.format);
  str("output", c.output);
  str("w_mode", c.w_mode);
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    auto strings = [](const json& arr) {
      std::vector<std::string> out;
      for (const auto& v : arr) out.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      return out;
    };
    if (g.contains("p")) c.grid_p = strings(g.at("p"));
    if (g.contains("epsilon")) c.grid_epsilon = strings(g.at("epsilon"));
    if (g.contains("n")) c.grid_n = g.at("n").get<std::vector<std::size_t>>();
    if (g.contains("w")) c.grid_w = g.at("w").get<std::vector<Value>>();
  }
}

/// Everything a single experiment needs, validated.
struct Experiment {
  Params params;
  WakeupSchedule schedule;
  InputAssignment inputs;
  GlobalRound horizon = 0;
};

inline Params build_params(const std::string& p_text, const std::string& eps_text, const ExperimentConfig& c) {
  if (p_text.empty()) throw UsageError("--p is required");
  if (eps_text.empty()) throw UsageError("--epsilon is required");
  const Probability p = Probability::parse(p_text);
  const Probability eps = Probability::parse(eps_text);
  if (!c.sync_epsilon && !c.decision_epsilon) return Params::composed(p, eps);
  const Probability half(eps.exact() / 2);
  return Params::with_budgets(p, eps, c.sync_epsilon ? Probability::parse(*c.sync_epsilon) : half,
                              c.decision_epsilon ? Probability::parse(*c.decision_epsilon) : half);
}

/// "simultaneous", "staggered:3,5,-", "alignment", "random:<max_offset>".
inline WakeupSchedule build_schedule(const std::string& desc, std::size_t n, int gamma, std::uint64_t seed) {
  const auto colon = desc.find(':');
  const std::string kind = desc.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : desc.substr(colon + 1);
  if (kind == "simultaneous") return schedule_simultaneous(n);
  if (kind == "alignment") return schedule_alignment_attack(gamma, n);
  if (kind == "random") {
    const GlobalRound max_offset = args.empty() ? 0 : detail::parse_number<GlobalRound>(args, "max offset");
    return schedule_random(n, max_offset, seed);
  }
  if (kind == "staggered") {
    std::vector<std::optional<GlobalRound>> offsets;
    for (const auto& item : detail::split(args)) {
      if (item == "-" || item == "none")
        offsets.emplace_back();
      else
        offsets.emplace_back(detail::parse_number<GlobalRound>(item, "offset"));
    }
    if (offsets.empty()) throw UsageError("staggered schedule needs offsets, e.g. staggered:0,3,-");
    if (offsets.size() != n) offsets = detail::cycle_to(offsets, n);
    return schedule_staggered(std::move(offsets));
  }
  throw UsageError("unknown schedule '" + desc + "'");
}

inline Experiment build_experiment(const ExperimentConfig& c, const std::string& p, const std::string& eps,
                                   std::optional<std::size_t> n_override = std::nullopt,
                                   std::optional<Value> w = std::nullopt, bool cycle_inputs = false) {
  Experiment e;
  e.params = build_params(p, eps, c);
  std::vector<Value> values = c.inputs;
  std::size_t n = n_override ? *n_override : c.n ? *c.n : values.size();
  if (w) {
    if (n == 0) n = values.empty() ? 2 : values.size();
    values.assign(n, *w);
    if (c.w_mode == "spread")
      for (std::size_t j = 1; j < n; ++j) values[j] = 2 * *w + 1;
    else if (c.w_mode != "same")
      throw UsageError("unknown --w-mode '" + c.w_mode + "'");
  }
  if (values.empty()) throw UsageError("--inputs is required");
  if (n == 0) throw UsageError("need at least one processor");
  if (values.size() != n) {
    if (!cycle_inputs) throw UsageError("--n disagrees with the number of --inputs");
    values = detail::cycle_to(values, n);
  }
  e.inputs = InputAssignment(values, c.value_set);
  e.schedule = build_schedule(c.schedule, n, e.params.gamma, c.seed.value_or(0));
  e.horizon = c.horizon ? *c.horizon : default_horizon(e.params, e.schedule, e.inputs);
  return e;
}

inline FaultSource build_faults(const std::string& desc, std::optional<std::uint64_t> seed, const Params& prm) {
  if (desc == "none") return FaultSource::none();
  if (desc == "seeded") {
    if (!seed) throw UsageError("--seed is required for seeded faults");
    return FaultSource::seeded(*seed, prm.p.value());
  }
  if (desc.rfind("explicit:", 0) == 0) {
    std::vector<bool> bits;
    for (char ch : desc.substr(9)) {
      if (ch != '0' && ch != '1') throw UsageError("explicit faults take 0/1 digits");
      bits.push_back(ch == '1');
    }
    return FaultSource::explicit_bits(std::move(bits));
  }
  throw UsageError("unknown fault source '" + desc + "'");
}

/// Writes to the configured path, or to `out` when no path is set.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      os_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw UsageError("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline const char* csv_header() {
  return "p,epsilon,gamma,x,n,schedule_kind,w,trials,failures,point,ci_low,ci_high,max_rounds_to_output";
}

inline std::string csv_row(const ExperimentConfig& c, const std::string& p, const std::string& eps,
                           const Experiment& e, const MonteCarloResult& r) {
  (void)c;
  std::ostringstream os;
  os << p << ',' << eps << ',' << e.params.gamma << ',' << e.params.x << ',' << e.schedule.size() << ','
     << e.schedule.kind() << ',' << e.inputs.w() << ',' << r.estimate.trials << ',' << r.estimate.failures << ','
     << detail::fmt_double(r.estimate.point) << ',' << detail::fmt_double(r.estimate.ci_low) << ','
     << detail::fmt_double(r.estimate.ci_high) << ','
     << (r.max_success_round ? std::to_string(*r.max_success_round) : std::string());
  return os.str();
}

inline int cmd_run(const ExperimentConfig& c, std::ostream& out) {
  const Experiment e = build_experiment(c, c.p, c.epsilon);
  const FaultSource faults = build_faults(c.faults, c.seed, e.params);
  const TrialResult r = run_trial(e.params, e.schedule, e.inputs, faults, e.horizon);
  Sink sink(c.output, out);
  io::write_trace(sink.stream(), r.trace, r.outcome);
  return r.outcome.success() ? exit_ok : exit_failure;
}

inline int cmd_montecarlo(const ExperimentConfig& c, std::ostream& out) {
  if (!c.seed) throw UsageError("--seed is required");
  if (c.trials == 0) throw UsageError("--trials must be at least 1");
  const Experiment e = build_experiment(c, c.p, c.epsilon);
  const MonteCarloResult r = monte_carlo(e.params, e.schedule, e.inputs, c.trials, *c.seed, e.horizon, c.threads);
  Sink sink(c.output, out);
  if (c.format == "csv") {
    sink.stream() << csv_header() << '\n' << csv_row(c, c.p, c.epsilon, e, r) << '\n';
  } else {
    sink.stream() << io::estimate_to_json(e.params, e.schedule, e.inputs, *c.seed, e.horizon, r).dump(2) << '\n';
  }
  return exit_ok;
}

inline int cmd_exact(const ExperimentConfig& c, std::ostream& out) {
  const Experiment e = build_experiment(c, c.p, c.epsilon);
  const ExactResult r = exact_failure_probability(e.params, e.schedule, e.inputs, e.horizon, c.budget);
  Sink sink(c.output, out);
  sink.stream() << io::exact_to_json(e.params, e.schedule, e.inputs, e.horizon, c.budget, r).dump(2) << '\n';
  return exit_ok;
}

inline int cmd_sweep(const ExperimentConfig& c, std::ostream& out) {
  if (c.grid_p.empty() && c.grid_epsilon.empty() && c.grid_n.empty() && c.grid_w.empty())
    throw UsageError("sweep needs a non-empty grid (--grid-p, --grid-epsilon, --grid-n or --grid-w)");
  if (!c.seed) throw UsageError("--seed is required");
  const std::vector<std::string> ps = c.grid_p.empty() ? std::vector{c.p} : c.grid_p;
  const std::vector<std::string> epss = c.grid_epsilon.empty() ? std::vector{c.epsilon} : c.grid_epsilon;
  std::vector<std::optional<std::size_t>> ns;
  for (auto n : c.grid_n) ns.emplace_back(n);
  if (ns.empty()) ns.emplace_back();
  std::vector<std::optional<Value>> ws;
  for (auto w : c.grid_w) ws.emplace_back(w);
  if (ws.empty()) ws.emplace_back();

  Sink sink(c.output, out);
  json docs = json::array();
  if (c.format == "csv") sink.stream() << csv_header() << '\n';
  for (const auto& p : ps)
    for (const auto& eps : epss)
      for (const auto& n : ns)
        for (const auto& w : ws) {
          const Experiment e = build_experiment(c, p, eps, n, w, true);
          const auto r = monte_carlo(e.params, e.schedule, e.inputs, c.trials, *c.seed, e.horizon, c.threads);
          if (c.format == "csv")
            sink.stream() << csv_row(c, p, eps, e, r) << '\n';
          else
            docs.push_back(io::estimate_to_json(e.params, e.schedule, e.inputs, *c.seed, e.horizon, r));
        }
  if (c.format != "csv") sink.stream() << docs.dump(2) << '\n';
  return exit_ok;
}

inline int cmd_check(const ExperimentConfig& c, std::ostream& out) {
  if (c.trace_path.empty()) throw UsageError("check needs a trace file");
  std::ifstream in(c.trace_path);
  if (!in) throw UsageError("cannot open trace file '" + c.trace_path + "'");
  const io::ParsedTrace parsed = io::read_trace(in);
  const WakeupSchedule schedule = WakeupSchedule::from_offsets(parsed.trace.meta.offsets);
  const auto violations = verify_trace_invariants(parsed.trace, parsed.trace.meta.gamma, schedule);
  json doc = {{"schema", "beepmac.check"}, {"schema_version", io::result_schema_version},
              {"ok", violations.empty()}, {"violations", json::array()}};
  for (const auto& v : violations)
    doc["violations"].push_back({{"check", v.check}, {"round", v.round}, {"detail", v.detail}});
  Sink sink(c.output, out);
  sink.stream() << doc.dump(2) << '\n';
  return violations.empty() ? exit_ok : exit_failure;
}

/// Parses `args` (without the program name) and runs the chosen command.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consensus over a fault-prone beeping multiple access channel"};
  app.require_subcommand(1);

  ExperimentConfig flags;
  std::string config_path, inputs_text, value_set_text, grid_p, grid_eps, grid_n, grid_w;
  std::string sync_eps, decision_eps;
  std::uint64_t seed = 0;
  GlobalRound horizon = 0;
  std::size_t n = 0;

  std::vector<CLI::App*> subs;
  for (const char* name : {"run", "montecarlo", "exact", "sweep", "check"}) subs.push_back(app.add_subcommand(name));
  subs[0]->description("simulate one trial and print its trace as JSON lines");
  subs[1]->description("estimate the failure probability by Monte Carlo");
  subs[2]->description("compute the exact failure probability by exhaustive fault branching");
  subs[3]->description("Monte Carlo over a parameter grid, one row per grid point");
  subs[4]->description("verify round and protocol invariants of a trace file");

  for (CLI::App* sub : subs) {
    sub->add_option("--config", config_path, "JSON configuration document; flags override it");
    sub->add_option("-o,--output", flags.output, "output path (default stdout)");
    if (sub == subs[4]) {
      sub->add_option("trace", flags.trace_path, "trace file (JSON lines)")->required();
      continue;
    }
    sub->add_option("--p", flags.p, "channel fault probability, decimal or num/den");
    sub->add_option("--epsilon", flags.epsilon, "target error bound, decimal or num/den");
    sub->add_option("--sync-epsilon", sync_eps, "GlobalSync budget (default epsilon/2)");
    sub->add_option("--decision-epsilon", decision_eps, "Decision budget (default epsilon/2)");
    sub->add_option("--n", n, "number of processors");
    sub->add_option("--schedule", flags.schedule, "simultaneous | staggered:O1,O2,- | alignment | random:MAX");
    sub->add_option("--inputs", inputs_text, "comma-separated input values");
    sub->add_option("--value-set", value_set_text, "value set V, e.g. 0,3,5 or 0..100 (default: the inputs)");
    sub->add_option("--horizon", horizon, "round limit");
    sub->add_option("--seed", seed, "64-bit seed (required for seeded randomness)");
    if (sub == subs[0]) sub->add_option("--faults", flags.faults, "seeded | none | explicit:0101...");
    if (sub == subs[1] || sub == subs[3]) {
      sub->add_option("--trials", flags.trials, "number of trials");
      sub->add_option("--threads", flags.threads, "worker threads (does not affect results)");
      sub->add_option("--format", flags.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    }
    if (sub == subs[2]) sub->add_option("--budget", flags.budget, "maximum fault-relevant branch depth");
    if (sub == subs[3]) {
      sub->add_option("--grid-p", grid_p, "comma-separated p values");
      sub->add_option("--grid-epsilon", grid_eps, "comma-separated epsilon values");
      sub->add_option("--grid-n", grid_n, "comma-separated processor counts");
      sub->add_option("--grid-w", grid_w, "comma-separated smallest input values");
      sub->add_option("--w-mode", flags.w_mode, "same: every input is w; spread: others get 2w+1");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    ExperimentConfig c;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("cannot open config file '" + config_path + "'");
      apply_config(c, json::parse(in));
    }
    auto given = [&](const char* opt) { return chosen->get_option_no_throw(opt) && chosen->count(opt) > 0; };
    if (given("--p")) c.p = flags.p;
    if (given("--epsilon")) c.epsilon = flags.epsilon;
    if (given("--sync-epsilon")) c.sync_epsilon = sync_eps;
    if (given("--decision-epsilon")) c.decision_epsilon = decision_eps;
    if (given("--n")) c.n = n;
    if (given("--schedule")) c.schedule = flags.schedule;
    if (given("--inputs")) c.inputs = detail::parse_values(inputs_text);
    if (given("--value-set")) c.value_set = detail::parse_values(value_set_text);
    if (given("--horizon")) c.horizon = horizon;
    if (given("--seed")) c.seed = seed;
    if (given("--faults")) c.faults = flags.faults;
    if (given("--trials")) c.trials = flags.trials;
    if (given("--threads")) c.threads = flags.threads;
    if (given("--format")) c.format = flags.format;
    if (given("--budget")) c.budget = flags.budget;
    if (given("--output")) c.output = flags.output;
    if (given("--w-mode")) c.w_mode = flags.w_mode;
    if (given("--grid-p")) c.grid_p = detail::split(grid_p);
    if (given("--grid-epsilon")) c.grid_epsilon = detail::split(grid_eps);
    if (given("--grid-n"))
      for (const auto& s : detail::split(grid_n)) c.grid_n.push_back(detail::parse_number<std::size_t>(s, "n"));
    if (given("--grid-w")) c.grid_w = detail::parse_values(grid_w);
    c.trace_path = flags.trace_path;

    const std::string name = chosen->get_name();
    if (name == "run") return cmd_run(c, out);
    if (name == "montecarlo") return cmd_montecarlo(c, out);
    if (name == "exact") return cmd_exact(c, out);
    if (name == "sweep") return cmd_sweep(c, out);
    return cmd_check(c, out);
  } catch (const BranchBudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return exit_budget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

}  // namespace beepmac::cli
