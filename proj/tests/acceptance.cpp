// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace matchkit;
using namespace testing_support;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome golden_trace() {
  const auto t0 = Clock::now();
  const auto inst = example1();
  const auto ada = run_ada(inst);
  const auto da = run_da(inst);
  const auto id = identity_matching(5);
  bool ok = ada.metrics.total_rounds == 2 && ada.metrics.total_proposals == 7 && ada.metrics.idle_rounds == 0 &&
            da.metrics.total_rounds == 4 && da.metrics.total_proposals == 10 && da.metrics.idle_rounds == 1 &&
            da.rounds.size() == 4 && da.rounds[1].idle && ada.final_matching == id && da.final_matching == id;
  const auto pre = rejections_of(ada.rounds.at(0), RejectionKind::Preemptive);
  ok = ok && pre == sorted({P(2, 4), P(1, 4), P(3, 4), P(5, 4), P(1, 5), P(3, 5), P(4, 5), P(2, 5)});
  const double secs = seconds_since(t0);
  return {ok && secs < 1.0, fmt("ADA %d rounds/%lld proposals, DA %d rounds/%lld proposals/%d idle, %.3fs",
                                ada.metrics.total_rounds, static_cast<long long>(ada.metrics.total_proposals),
                                da.metrics.total_rounds, static_cast<long long>(da.metrics.total_proposals),
                                da.metrics.idle_rounds, secs)};
}

Outcome exhaustive_n3() {
  const auto t0 = Clock::now();
  std::vector<std::vector<int>> perms;
  std::vector<int> p{0, 1, 2};
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  int checked = 0, bad = 0;
  for (int code = 0; code < 46656; ++code) {
    RawInstance raw{3, {}, {}};
    int x = code;
    for (int r = 0; r < 6; ++r, x /= 6) (r < 3 ? raw.men : raw.women).push_back(perms[x % 6]);
    const auto inst = validate_instance(raw);
    const auto da = run_da(inst, {false}).final_matching;
    const auto ada = run_ada(inst, {false}).final_matching;
    const auto stable = oracle::enumerate_stable(inst);
    const auto mo = oracle::man_optimal(inst);
    const bool ok = !stable.empty() && da == mo && ada == mo && is_stable(inst, da) && normal_form(inst).mu_m == mo &&
                    blocking_pairs_by_definition(inst, da.pairs()).empty();
    bad += !ok;
    ++checked;
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && checked == 46656 && secs < 120,
          fmt("%d instances, %d disagreements, %.1fs", checked, bad, secs)};
}

Outcome dominance_suite() {
  const auto t0 = Clock::now();
  const int ns[] = {4, 16, 64, 256};
  const double cs[] = {0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
  constexpr int kReps = 417;  // 4 * 6 * 417 = 10,008 paired runs
  long long runs = 0, violations = 0;
  std::string first;
  for (int ni = 0; ni < 4; ++ni)
    for (int ci = 0; ci < 6; ++ci)
      for (int rep = 0; rep < kReps; ++rep) {
        const auto seed = derive_rep_seed(0xACCE55, ni, ci, rep);
        const auto inst = generate({ns[ni], cs[ci], seed});
        const auto lock = run_lockstep(inst);
        auto v = audit_trace(inst, lock.da);
        for (auto& s : audit_trace(inst, lock.ada)) v.push_back(s);
        for (auto& s : audit_pair(inst, lock.da, lock.ada)) v.push_back(s);
        if (!lock.all_contained) v.push_back("lockstep containment");
        if (!is_stable(inst, lock.da.final_matching)) v.push_back("unstable output");
        if (!v.empty() && first.empty()) first = v.front() + " at " + matchkit::detail::cell_label(ns[ni], cs[ci], seed);
        violations += static_cast<long long>(v.size());
        ++runs;
      }
  const double secs = seconds_since(t0);
  return {violations == 0 && runs >= 10000 && secs < 600,
          fmt("%lld paired runs, %lld violations, %.1fs%s%s", runs, violations, secs, first.empty() ? "" : "; first: ",
              first.c_str())};
}

Outcome closed_form() {
  std::string detail;
  bool ok = true;
  for (int n : {2, 10, 100, 1000}) {
    const auto inst = universal_ranking(n);
    const std::int64_t want = static_cast<std::int64_t>(n) * (n + 1) / 2;
    for (auto a : {Algorithm::DA, Algorithm::ADA}) {
      const auto t = run(a, inst, {false});
      ok = ok && t.metrics.total_proposals == want && t.metrics.total_rounds == n;
    }
    const auto g = generate({n, 1.0, static_cast<std::uint64_t>(n)});
    for (auto a : {Algorithm::DA, Algorithm::ADA}) {
      const auto t = run(a, g, {false});
      ok = ok && t.metrics.total_proposals == want && t.metrics.total_rounds == n;
    }
    detail += fmt("%sn=%d:%lld", detail.empty() ? "" : " ", n, static_cast<long long>(want));
  }
  return {ok, detail + " proposals, n rounds"};
}

struct TrendData {
  std::vector<ExperimentRecord> c0, c09;
};

const TrendData& trend_data() {
  static const TrendData data = [] {
    TrendData d;
    SweepSpec s;
    s.n_values = {256};
    s.reps = 100;
    s.base_seed = 20240601;
    s.c_values = {0.0};
    d.c0 = collect_sweep(s);
    s.c_values = {0.9};
    d.c09 = collect_sweep(s);
    return d;
  }();
  return data;
}

double mean_of(const std::vector<ExperimentRecord>& rs, Algorithm a, const std::string& metric) {
  return find_summary(aggregate(rs, {GroupKey::Algorithm}), std::nullopt, std::nullopt, a, metric).mean;
}

Outcome proposal_trend() {
  const auto t0 = Clock::now();
  const auto& d = trend_data();
  const double da = mean_of(d.c09, Algorithm::DA, "proposals");
  const double ada = mean_of(d.c09, Algorithm::ADA, "proposals");
  const double ratio = ada / da;
  return {ratio <= 0.25, fmt("n=256 c=0.9: mean ADA %.0f vs DA %.0f proposals, ratio %.3f (%.1fs)", ada, da, ratio,
                             seconds_since(t0))};
}

Outcome round_trend() {
  const auto& d = trend_data();
  const double da = mean_of(d.c0, Algorithm::DA, "rounds");
  const double ada = mean_of(d.c0, Algorithm::ADA, "rounds");
  return {da / ada >= 3.0, fmt("n=256 c=0: mean DA %.1f vs ADA %.1f rounds, factor %.2f", da, ada, da / ada)};
}

// Mean DA progress at ADA's last round, plus curve shape checks.
std::pair<double, bool> crossing(const std::vector<ExperimentRecord>& rs) {
  double sum = 0;
  int k = 0;
  bool shapes = true;
  for (std::size_t i = 0; i + 1 < rs.size(); i += 2) {
    const auto& da = rs[i];
    const auto& ada = rs[i + 1];
    if (da.algorithm != Algorithm::DA || ada.algorithm != Algorithm::ADA || da.seed != ada.seed) return {-1, false};
    const auto dc = final_pair_curve(da.metrics);
    const auto ac = final_pair_curve(ada.metrics);
    for (const auto* c : {&dc, &ac})
      shapes = shapes && std::is_sorted(c->proportion.begin(), c->proportion.end()) && c->proportion.back() == 1.0;
    sum += dc.at(ada.metrics.total_rounds);
    ++k;
  }
  return {sum / k, shapes};
}

Outcome crossing_shape() {
  const auto& d = trend_data();
  const auto [p09, s09] = crossing(d.c09);
  const auto [p0, s0] = crossing(d.c0);
  return {p09 < 0.5 && p0 > 0.6 && s09 && s0,
          fmt("DA progress at ADA's end: c=0.9 %.3f, c=0 %.3f; curves %s", p09, p0,
              s09 && s0 ? "nondecreasing, end at 1" : "MALFORMED")};
}

Outcome strategy_probe() {
  int profitable = 0, reports = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto inst = generate({4, 0.0, seed});
    for (int m = 0; m < 4; ++m) {
      const auto r = oracle::probe_strategyproofness(inst, m);
      reports += r.reports_tried;
      profitable += static_cast<int>(r.profitable.size());
      if (!r.identity_matches_baseline) ++profitable;
    }
  }
  std::string found = "none";
  for (std::uint64_t seed = 1; seed < 5000 && found == "none"; ++seed) {
    const auto inst = generate({4, 0.0, seed});
    if (oracle::enumerate_stable(inst).size() < 2) continue;
    const auto t = oracle::probe_woman_truncation(inst);
    if (t.outcome_is_mu_w && !t.improved_women.empty())
      found = fmt("seed %llu, %zu women better off", static_cast<unsigned long long>(seed), t.improved_women.size());
  }
  return {profitable == 0 && reports == 50 * 4 * 24 && found != "none",
          fmt("%d male reports, %d profitable; woman truncation: %s", reports, profitable, found.c_str())};
}

Outcome determinism() {
  SweepSpec s;
  s.n_values = {8, 64};
  s.c_values = {0.0, 0.5, 0.9};
  s.reps = 20;
  s.base_seed = 7;
  auto csv = [&](int jobs) {
    std::ostringstream os;
    write_results_csv(os, collect_sweep(s, jobs));
    return os.str();
  };
  const auto a = csv(1);
  const auto b = csv(2);
  const auto c = csv(1);
  return {a == b && a == c, fmt("%zu-byte results CSV, identical across 3 executions (jobs 1, 2, 1)", a.size())};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"golden-trace", golden_trace},
      {"exhaustive-n3-oracle", exhaustive_n3},
      {"dominance-suite", dominance_suite},
      {"uniform-ranking-closed-form", closed_form},
      {"proposal-reduction-trend", proposal_trend},
      {"round-reduction-trend", round_trend},
      {"crossing-shape", crossing_shape},
      {"strategy-proofness-probe", strategy_probe},
      {"determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed ? 1 : 0;
}
