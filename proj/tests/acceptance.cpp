// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>

namespace beepmac {
namespace {

using Clock = std::chrono::steady_clock;

Probability P(const char* s) { return Probability::parse(s); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- 1 ----

Verdict simultaneous_exactness() {
  struct Case {
    const char* p;
    int gamma;
    GlobalRound expected;
  };
  const Case cases[] = {{"0.05", 1, 18}, {"0.3", 2, 69}, {"0.45", 3, 153}};
  std::mt19937_64 rng(1);
  Verdict v;
  std::string seen;
  for (const Case& c : cases) {
    const auto prm = Params::with_budgets(P(c.p), P("0.99"), P("0.5"), P("0.49"));
    if (prm.gamma != c.gamma) return {false, fmt("p=%s gives gamma=%d", c.p, prm.gamma)};
    std::set<GlobalRound> rounds;
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 2 + rng() % 4;
      std::vector<Value> values;
      for (std::size_t j = 0; j < n; ++j) values.push_back(rng() % 100);
      const InputAssignment in(values);
      const auto sched = schedule_simultaneous(n);
      const double fault_rate = t % 2 ? 0.5 : prm.p.value();
      const auto r = run_trial(prm, sched, in, FaultSource::seeded(rng(), fault_rate), default_horizon(prm, sched, in));
      for (const auto& s : r.trace.processors) {
        rounds.insert(s.sync_round.value_or(-1));
        if (s.sync_round != c.expected) v.pass = false;
      }
    }
    for (GlobalRound r : rounds) seen += fmt("%sg%d:%lld", seen.empty() ? "" : " ", c.gamma, static_cast<long long>(r));
  }
  v.detail = "sync rounds " + seen + " (expected 18, 69, 153)";
  return v;
}

// ---- 2 ----

Verdict fault_free_totality() {
  std::mt19937_64 rng(2);
  const char* ps[] = {"0.05", "0.1", "0.3", "0.5"};
  int success = 0;
  for (int t = 0; t < 1000; ++t) {
    const auto prm = Params::composed(P(ps[t % 4]), P("0.2"));
    const std::size_t n = 1 + rng() % 5;
    std::vector<std::optional<GlobalRound>> offsets;
    std::vector<Value> values;
    for (std::size_t j = 0; j < n; ++j) {
      if (j > 0 && rng() % 4 == 0)
        offsets.emplace_back();
      else
        offsets.emplace_back(static_cast<GlobalRound>(rng() % 51));
      values.push_back(rng() % 65536);
    }
    const auto sched = schedule_staggered(offsets);
    const InputAssignment in(values);
    const auto h = default_horizon(prm, sched, in);
    const auto r = run_trial(prm, sched, in, FaultSource::explicit_bits(std::vector<bool>(h, false)), h, false);
    success += r.outcome.success();
  }
  return {success == 1000, fmt("%d/1000 Success", success)};
}

// ---- 3 ----

Verdict identical_input_determinism() {
  std::mt19937_64 rng(3);
  int success = 0, simultaneous = 0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng() % 3;
    const Value v = 1 + rng() % 1000;
    const InputAssignment in(std::vector<Value>(n, v), {0, v, v + 1});
    Params prm;
    WakeupSchedule sched;
    double fault_rate;
    if (t % 2 == 0) {
      prm = Params::composed(P(t % 4 ? "0.3" : "0.5"), P("0.2"));
      sched = schedule_simultaneous(n);
      fault_rate = rng() % 2 ? 0.5 : prm.p.value();
      ++simultaneous;
    } else {
      prm = Params::composed(P("0.1"), P("0.0001"));
      fault_rate = prm.p.value();
      switch (t % 3) {
        case 0: sched = schedule_random(n, 50, rng()); break;
        case 1: sched = schedule_alignment_attack(prm.gamma, n); break;
        default: {
          std::vector<std::optional<GlobalRound>> o{0};
          for (std::size_t j = 1; j < n; ++j)
            o.push_back(rng() % 2 ? std::nullopt : std::optional<GlobalRound>(rng() % 30));
          sched = schedule_staggered(o);
        }
      }
    }
    const auto r = run_trial(prm, sched, in, FaultSource::seeded(rng(), fault_rate), default_horizon(prm, sched, in),
                             false);
    const bool ok = r.outcome.success() && r.outcome.outputs[0]->value == v;
    success += ok;
  }
  return {success == 500, fmt("%d/500 Success with the common input (%d simultaneous, %d staggered)", success,
                              simultaneous, 500 - simultaneous)};
}

// ---- 4 and 5 ----

struct OracleCase {
  Params params;
  WakeupSchedule schedule;
  InputAssignment inputs;
};

std::vector<OracleCase> oracle_cases() {
  struct Row {
    const char* p;
    const char* eps;
    const char* sync;
    const char* dec;
    std::optional<GlobalRound> second;
    Value a, b;
  };
  const Row rows[] = {
      {"1/20", "1/2", nullptr, nullptr, std::nullopt, 5, 3},
      {"1/20", "1/2", nullptr, nullptr, 2, 5, 3},
      {"1/20", "1/2", nullptr, nullptr, 4, 6, 1},
      {"1/20", "1/2", nullptr, nullptr, 9, 2, 7},
      {"1/10", "1/2", nullptr, nullptr, std::nullopt, 5, 3},
      {"1/10", "1/2", nullptr, nullptr, 3, 4, 5},
      {"1/10", "1/2", nullptr, nullptr, 6, 1, 2},
      {"1/10", "1/2", nullptr, nullptr, 0, 9, 3},
      {"1/50", "1/5", nullptr, nullptr, std::nullopt, 3, 12},
      {"1/50", "1/5", nullptr, nullptr, 1, 8, 5},
      {"1/50", "1/5", nullptr, nullptr, 5, 3, 3},
      {"3/25", "9/10", nullptr, nullptr, std::nullopt, 2, 1},
      {"3/25", "9/10", nullptr, nullptr, 2, 6, 5},
      {"1/25", "3/10", nullptr, nullptr, 7, 5, 3},
      {"1/25", "3/10", nullptr, nullptr, std::nullopt, 1, 4},
      {"1/10", "3/5", "1/2", "1/10", std::nullopt, 5, 3},
      {"1/10", "3/5", "1/2", "1/10", 3, 2, 3},
      {"1/10", "3/5", "1/2", "1/10", 0, 4, 1},
      {"1/5", "9/10", "4/5", "1/10", std::nullopt, 3, 2},
      {"1/5", "9/10", "4/5", "1/10", 5, 1, 6},
  };
  std::vector<OracleCase> out;
  for (const Row& s : rows) {
    const auto prm = s.sync ? Params::with_budgets(P(s.p), P(s.eps), P(s.sync), P(s.dec))
                            : Params::composed(P(s.p), P(s.eps));
    out.push_back({prm, schedule_staggered({0, s.second}), InputAssignment({s.a, s.b})});
  }
  return out;
}

struct OracleRun {
  Verdict safety;
  Verdict agreement;
};

OracleRun oracle_criteria() {
  OracleRun out;
  const auto t0 = Clock::now();
  const auto cases = oracle_cases();
  std::vector<ExactResult> exact;
  std::set<std::pair<int, int>> regimes;
  int within = 0, max_depth = 0;
  Rational worst_ratio = 0;
  for (const auto& c : cases) {
    const auto h = default_horizon(c.params, c.schedule, c.inputs);
    try {
      exact.push_back(exact_failure_probability(c.params, c.schedule, c.inputs, h, 30));
    } catch (const BranchBudgetExceeded& e) {
      out.safety = {false, fmt("branch budget exceeded (%d) for a configuration", e.reached())};
      out.agreement = {false, "oracle unavailable"};
      return out;
    }
    const auto& r = exact.back();
    within += r.failure_probability <= c.params.epsilon.exact();
    max_depth = std::max(max_depth, r.branch_count);
    worst_ratio = std::max(worst_ratio, Rational(r.failure_probability / c.params.epsilon.exact()));
    regimes.insert({c.params.gamma, c.params.x});
  }
  const double exact_time = seconds_since(t0);
  std::string regime_text;
  for (auto [g, x] : regimes) regime_text += fmt("%s(%d,%d)", regime_text.empty() ? "" : " ", g, x);
  const int n = static_cast<int>(cases.size());
  out.safety = {within == n && n >= 20 && exact_time < 60,
                fmt("%d/%d exact <= epsilon, worst ratio %.3f, max depth %d, (gamma,x) in {%s}, %.2fs", within, n,
                    worst_ratio.convert_to<double>(), max_depth, regime_text.c_str(), exact_time)};

  const auto t1 = Clock::now();
  int contained = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    const auto h = default_horizon(c.params, c.schedule, c.inputs);
    const auto mc = monte_carlo(c.params, c.schedule, c.inputs, 10000, 500 + i, h);
    contained += mc.estimate.contains(exact[i].failure_probability.convert_to<double>());
  }
  const double mc_time = seconds_since(t1);
  out.agreement = {contained >= n - n / 20 && mc_time < 60,
                   fmt("%d/%d Monte Carlo 99%% CIs contain the exact value, %.2fs", contained, n, mc_time)};
  return out;
}

// ---- 6 ----

Verdict round_bound_growth() {
  const auto t0 = Clock::now();
  const auto prm = Params::composed(P("0.3"), P("0.2"));
  const Value ws[] = {1, 1 << 4, 1 << 8, 1 << 12, 1 << 16};
  std::vector<double> xs, ys;
  bool bounded = true;
  std::uint64_t successes = 0;
  for (Value w : ws) {
    const InputAssignment in({w, 2 * w + 1, w});
    const auto sched = schedule_staggered({0, 7, std::nullopt});
    const auto h = default_horizon(prm, sched, in);
    const auto r = monte_carlo(prm, sched, in, 2000, 606, h);
    if (!r.max_success_round) return {false, fmt("no successful trial for w=%llu", static_cast<unsigned long long>(w))};
    bounded &= *r.max_success_round <= round_bound(prm.gamma, prm.x, w);
    successes += r.by_kind[0];
    xs.push_back(Codeword::bit_length(w));
    ys.push_back(static_cast<double>(*r.max_success_round));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i] / n, my += ys[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double r2 = syy == 0 ? 0 : sxy * sxy / (sxx * syy);
  const double slope = sxy / sxx;
  const double secs = seconds_since(t0);
  std::string maxima;
  for (double y : ys) maxima += fmt("%s%.0f", maxima.empty() ? "" : ",", y);
  return {bounded && r2 >= 0.99 && secs < 30,
          fmt("max rounds [%s] within bound=%s over %llu successful trials, slope %.2f/bit, R^2=%.5f, %.2fs",
              maxima.c_str(), bounded ? "yes" : "no", static_cast<unsigned long long>(successes), slope, r2, secs)};
}

// ---- 7 ----

Verdict protocol_arithmetic() {
  std::mt19937_64 rng(7);
  const char* ps[] = {"0.05", "0.2", "0.5"};
  std::size_t traces = 0, violations = 0;
  std::map<std::string, int> by_check;
  for (int t = 0; t < 1500; ++t) {
    const auto prm = Params::composed(P(ps[t % 3]), P("0.5"));
    const std::size_t n = 1 + rng() % 4;
    WakeupSchedule sched;
    switch (t % 4) {
      case 0: sched = schedule_simultaneous(n); break;
      case 1: sched = schedule_random(n, 40, rng()); break;
      case 2: sched = n >= 2 ? schedule_alignment_attack(prm.gamma, n) : schedule_simultaneous(1); break;
      default: {
        std::vector<std::optional<GlobalRound>> o{0};
        for (std::size_t j = 1; j < n; ++j)
          o.push_back(rng() % 2 ? std::nullopt : std::optional<GlobalRound>(rng() % 25));
        sched = schedule_staggered(o);
      }
    }
    std::vector<Value> values;
    for (std::size_t j = 0; j < n; ++j) values.push_back(rng() % 200);
    const InputAssignment in(values);
    const auto r = run_trial(prm, sched, in, FaultSource::seeded(rng(), prm.p.value()),
                             default_horizon(prm, sched, in));
    const auto v = verify_trace_invariants(r.trace, prm, sched);
    ++traces;
    violations += v.size();
    for (const auto& x : v) ++by_check[x.check];
  }

  std::size_t prefix_clashes = 0;
  auto prefix = [](const Codeword& a, const Codeword& b) { return b.str().rfind(a.str(), 0) == 0; };
  for (Value a = 0; a < 256; ++a)
    for (Value b = 0; b < 256; ++b)
      if (a != b && prefix(Codeword(a), Codeword(b))) ++prefix_clashes;
  std::mt19937_64 prng(77);
  for (int i = 0; i < 10000; ++i) {
    const Value a = prng() >> (prng() % 64), b = prng() >> (prng() % 64);
    if (a != b && (prefix(Codeword(a), Codeword(b)) || prefix(Codeword(b), Codeword(a)))) ++prefix_clashes;
  }
  std::string checks;
  for (const auto& [k, c] : by_check) checks += fmt(" %s=%d", k.c_str(), c);
  return {violations == 0 && prefix_clashes == 0,
          fmt("%zu traces, %zu invariant violations%s; %zu prefix clashes (exhaustive < 256 plus 10^4 random pairs)",
              traces, violations, checks.c_str(), prefix_clashes)};
}

// ---- 8 ----

Verdict reproducibility() {
  using Args = std::vector<std::string>;
  const std::string trace = (std::filesystem::temp_directory_path() / "beepmac_acceptance_trace.jsonl").string();
  auto call = [](const Args& a) {
    std::ostringstream out, err;
    const int code = cli::run_cli(a, out, err);
    return std::to_string(code) + "\n" + out.str();
  };
  const Args commands[] = {
      {"run", "--p", "0.2", "--epsilon", "0.5", "--inputs", "5,3,9", "--schedule", "random:20", "--seed", "31"},
      {"montecarlo", "--p", "0.2", "--epsilon", "0.5", "--inputs", "5,3", "--schedule", "staggered:0,3", "--seed", "8",
       "--trials", "3000"},
      {"montecarlo", "--p", "0.3", "--epsilon", "0.2", "--inputs", "5,3", "--schedule", "alignment", "--seed", "8",
       "--trials", "1000", "--format", "csv"},
      {"exact", "--p", "1/10", "--epsilon", "1/2", "--inputs", "5,3", "--schedule", "staggered:0,2"},
      {"sweep", "--grid-p", "0.1,0.3", "--grid-w", "1,300", "--epsilon", "0.3", "--inputs", "1,2", "--seed", "4",
       "--trials", "200", "--format", "csv"},
  };
  int identical = 0, total = 0;
  for (const auto& c : commands) {
    ++total;
    identical += call(c) == call(c);
  }
  {
    std::ofstream(trace) << call(commands[0]).substr(2);
    const Args check{"check", trace};
    ++total;
    const auto a = call(check);
    identical += a == call(check) && a.rfind("0\n", 0) == 0;
    std::filesystem::remove(trace);
  }
  int invariant = 0, thread_runs = 0;
  const auto prm = Params::composed(P("0.2"), P("0.5"));
  const auto sched = schedule_random(4, 30, 12);
  const InputAssignment in({5, 3, 8, 3});
  const auto h = default_horizon(prm, sched, in);
  const auto base = monte_carlo(prm, sched, in, 5000, 99, h, 1);
  for (unsigned threads : {2u, 3u, 4u, 8u, 16u}) {
    ++thread_runs;
    invariant += monte_carlo(prm, sched, in, 5000, 99, h, threads) == base;
  }
  Args mc{"montecarlo", "--p", "0.2", "--epsilon", "0.5", "--inputs", "5,3", "--seed", "8", "--trials", "2000",
          "--schedule", "random:9"};
  const auto one = call(mc);
  mc.insert(mc.end(), {"--threads", "6"});
  ++thread_runs;
  invariant += call(mc) == one;
  return {identical == total && invariant == thread_runs,
          fmt("%d/%d commands byte-identical on re-run, %d/%d thread counts give the same aggregate", identical, total,
              invariant, thread_runs)};
}

}  // namespace
}  // namespace beepmac

int main() {
  using namespace beepmac;
  int failed = 0;
  auto report = [&](int id, const char* name, const Verdict& v) {
    std::printf("%s %d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
    std::fflush(stdout);
    failed += !v.pass;
  };
  auto timed = [](auto fn, double limit) {
    const auto t0 = Clock::now();
    Verdict v = fn();
    const double secs = seconds_since(t0);
    v.detail += fmt(" [%.2fs]", secs);
    if (limit > 0 && secs >= limit) {
      v.pass = false;
      v.detail += fmt(" exceeds %.0fs", limit);
    }
    return v;
  };
  report(1, "simultaneous-wake exactness", timed(simultaneous_exactness, 1));
  report(2, "fault-free totality", timed(fault_free_totality, 10));
  report(3, "identical-input determinism", timed(identical_input_determinism, 0));
  const auto oracle = oracle_criteria();
  report(4, "epsilon-safety via exact oracle", oracle.safety);
  report(5, "Monte Carlo agrees with exact oracle", oracle.agreement);
  report(6, "round bound and logarithmic growth in w", round_bound_growth());
  report(7, "protocol arithmetic and prefix-freeness", timed(protocol_arithmetic, 0));
  report(8, "reproducibility", timed(reproducibility, 0));
  return failed == 0 ? 0 : 1;
}
