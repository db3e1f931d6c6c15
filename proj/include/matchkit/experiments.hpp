#pragma once

// Batch experiments: paired DA/ADA runs over (n, c) grids, grouped
// statistics, and the final-pairs-by-round curves.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "matchkit/audit.hpp"
#include "matchkit/core.hpp"
#include "matchkit/engines.hpp"
#include "matchkit/generator.hpp"
#include "matchkit/rng.hpp"

namespace matchkit {

struct SweepSpec {
  std::vector<int> n_values;
  std::vector<double> c_values;
  int reps = 1;
  std::uint64_t base_seed = 0;
  std::vector<Algorithm> algorithms{Algorithm::DA, Algorithm::ADA};
  // Off: wall_time is reported as 0 so that results are byte-reproducible.
  bool record_timing = false;
  // Per-seed dominance checks whenever both algorithms run.
  bool check_dominance = true;
};

inline void validate(const SweepSpec& s) {
  if (s.n_values.empty() || s.c_values.empty() || s.algorithms.empty())
    throw Error(Errc::InvalidParams, "sweep: n_values, c_values and algorithms must be nonempty");
  if (s.reps < 1) throw Error(Errc::InvalidParams, "sweep: reps must be at least 1");
  for (int n : s.n_values) validate(GeneratorParams{n, 0.0, 0});
  for (double c : s.c_values) validate(GeneratorParams{2, c, 0});
}

// Seed of one repetition: splitmix64 chain over (base, n index, c index, rep).
inline std::uint64_t derive_rep_seed(std::uint64_t base, int n_index, int c_index, int rep) {
  std::uint64_t k = rng::mix64(base);
  k = rng::mix64(k ^ static_cast<std::uint64_t>(n_index));
  k = rng::mix64(k ^ static_cast<std::uint64_t>(c_index));
  k = rng::mix64(k ^ static_cast<std::uint64_t>(rep));
  return k;
}

struct ExperimentRecord {
  int n = 0;
  double c = 0.0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::DA;
  int n_index = 0;
  int c_index = 0;
  int rep = 0;
  RunMetrics metrics;
};

inline auto record_key(const ExperimentRecord& r) {
  return std::tuple(r.n_index, r.c_index, r.rep, static_cast<int>(r.algorithm));
}

// Raised when a per-seed dominance check fails; carries the instance.
class DominanceViolation : public Error {
 public:
  DominanceViolation(const std::string& what, Instance inst)
      : Error(Errc::InvariantViolation, what), instance_(std::move(inst)) {}
  const Instance& instance() const noexcept { return instance_; }

 private:
  Instance instance_;
};

namespace detail {

inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string cell_label(int n, double c, std::uint64_t seed) {
  return "n=" + std::to_string(n) + " c=" + format_double(c) + " seed=" + std::to_string(seed);
}

}  // namespace detail

// Runs the sweep on `jobs` worker threads. `sink` receives each record
// under a lock; arrival order depends on scheduling, record content does
// not.
template <class Sink>
void run_sweep(const SweepSpec& spec, int jobs, Sink&& sink) {
  validate(spec);
  const std::size_t per_n = spec.c_values.size() * static_cast<std::size_t>(spec.reps);
  const std::size_t total = spec.n_values.size() * per_n;
  const bool paired = std::find(spec.algorithms.begin(), spec.algorithms.end(), Algorithm::DA) != spec.algorithms.end() &&
                      std::find(spec.algorithms.begin(), spec.algorithms.end(), Algorithm::ADA) != spec.algorithms.end();

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex sink_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    std::vector<RunTrace> traces;
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total || stop.load()) return;
      const int ni = static_cast<int>(task / per_n);
      const int ci = static_cast<int>((task % per_n) / spec.reps);
      const int rep = static_cast<int>(task % spec.reps);
      const int n = spec.n_values[ni];
      const double c = spec.c_values[ci];
      const std::uint64_t seed = derive_rep_seed(spec.base_seed, ni, ci, rep);
      try {
        const Instance inst = generate({n, c, seed});
        traces.clear();
        for (Algorithm a : spec.algorithms) traces.push_back(run(a, inst, RunOptions{false}));
        if (paired && spec.check_dominance) {
          const RunTrace* da = nullptr;
          const RunTrace* ada = nullptr;
          for (const auto& t : traces) (t.algorithm == Algorithm::DA ? da : ada) = &t;
          auto v = audit_pair(inst, *da, *ada);
          if (!v.empty()) throw DominanceViolation(detail::cell_label(n, c, seed) + ": " + v.front(), inst);
        }
        std::lock_guard lock(sink_mutex);
        for (auto& t : traces) {
          if (!spec.record_timing) t.metrics.wall_time = 0.0;
          sink(ExperimentRecord{n, c, seed, t.algorithm, ni, ci, rep, std::move(t.metrics)});
        }
      } catch (const DominanceViolation&) {
        std::lock_guard lock(sink_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      } catch (const Error& e) {
        std::lock_guard lock(sink_mutex);
        if (!failure) failure = std::make_exception_ptr(Error(e.code(), detail::cell_label(n, c, seed) + ": " + e.what()));
        stop = true;
      } catch (...) {
        std::lock_guard lock(sink_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };

  jobs = std::max(1, jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

// All records of a sweep, sorted by (n index, c index, rep, algorithm).
inline std::vector<ExperimentRecord> collect_sweep(const SweepSpec& spec, int jobs = 1) {
  std::vector<ExperimentRecord> out;
  run_sweep(spec, jobs, [&](ExperimentRecord r) { out.push_back(std::move(r)); });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return record_key(a) < record_key(b); });
  return out;
}

enum class GroupKey { N, C, Algorithm };

struct SummaryRow {
  std::optional<int> n;
  std::optional<double> c;
  std::optional<Algorithm> algorithm;
  std::string metric;
  double mean = 0, sd = 0, min = 0, max = 0;
  std::int64_t count = 0;
};

inline const std::vector<std::string>& summary_metrics() {
  static const std::vector<std::string> names{"rounds",          "proposals",   "direct_rejections",
                                              "preemptive_rejections", "total_rejections", "idle_rounds",
                                              "wall_time_s"};
  return names;
}

inline double metric_value(const RunMetrics& m, const std::string& name) {
  if (name == "rounds") return m.total_rounds;
  if (name == "proposals") return static_cast<double>(m.total_proposals);
  if (name == "direct_rejections") return static_cast<double>(m.direct_rejections);
  if (name == "preemptive_rejections") return static_cast<double>(m.preemptive_rejections);
  if (name == "total_rejections") return static_cast<double>(m.total_rejections);
  if (name == "idle_rounds") return m.idle_rounds;
  if (name == "wall_time_s") return m.wall_time;
  throw Error(Errc::InvalidParams, "unknown metric " + name);
}

// Mean, population standard deviation, min, max and count per metric and
// group. Values are sorted before summation, so input order is irrelevant.
inline std::vector<SummaryRow> aggregate(const std::vector<ExperimentRecord>& records,
                                         const std::vector<GroupKey>& keys) {
  if (records.empty()) throw Error(Errc::EmptyGroup, "aggregate: no records");
  auto has = [&](GroupKey k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
  using Key = std::tuple<int, double, int>;
  std::map<Key, std::vector<const ExperimentRecord*>> groups;
  for (const auto& r : records)
    groups[Key{has(GroupKey::N) ? r.n : 0, has(GroupKey::C) ? r.c : 0.0,
               has(GroupKey::Algorithm) ? static_cast<int>(r.algorithm) : 0}]
        .push_back(&r);

  std::vector<SummaryRow> out;
  std::vector<double> xs;
  for (const auto& [key, members] : groups) {
    for (const auto& metric : summary_metrics()) {
      xs.clear();
      for (const auto* r : members) xs.push_back(metric_value(r->metrics, metric));
      std::sort(xs.begin(), xs.end());
      double sum = 0;
      for (double x : xs) sum += x;
      const double mean = sum / static_cast<double>(xs.size());
      double ss = 0;
      for (double x : xs) ss += (x - mean) * (x - mean);
      SummaryRow row;
      if (has(GroupKey::N)) row.n = std::get<0>(key);
      if (has(GroupKey::C)) row.c = std::get<1>(key);
      if (has(GroupKey::Algorithm)) row.algorithm = static_cast<Algorithm>(std::get<2>(key));
      row.metric = metric;
      row.mean = mean;
      row.sd = std::sqrt(ss / static_cast<double>(xs.size()));
      row.min = xs.front();
      row.max = xs.back();
      row.count = static_cast<std::int64_t>(xs.size());
      out.push_back(std::move(row));
    }
  }
  return out;
}

// Looks up one aggregated value; throws EmptyGroup when absent.
inline const SummaryRow& find_summary(const std::vector<SummaryRow>& rows, std::optional<int> n, std::optional<double> c,
                                      std::optional<Algorithm> a, const std::string& metric) {
  for (const auto& r : rows)
    if (r.n == n && r.c == c && r.algorithm == a && r.metric == metric) return r;
  throw Error(Errc::EmptyGroup, "no summary row for metric " + metric);
}

// Proportion of final pairs already formed after each round.
struct FinalPairCurve {
  std::vector<int> rounds;
  std::vector<double> proportion;

  // Step-function value after round r.
  double at(int r) const {
    if (rounds.empty() || r < 1) return 0.0;
    if (r >= rounds.back()) return 1.0;
    return proportion[static_cast<std::size_t>(r - 1)];
  }
};

inline FinalPairCurve final_pair_curve(const RunMetrics& m) {
  const auto& fpr = m.final_pair_round;
  const int n = static_cast<int>(fpr.size());
  const int total = m.total_rounds;
  std::vector<int> formed_in(static_cast<std::size_t>(total) + 1, 0);
  for (int r : fpr) ++formed_in[static_cast<std::size_t>(r)];
  FinalPairCurve c;
  int cum = 0;
  for (int r = 1; r <= total; ++r) {
    cum += formed_in[static_cast<std::size_t>(r)];
    c.rounds.push_back(r);
    c.proportion.push_back(static_cast<double>(cum) / n);
  }
  return c;
}

inline FinalPairCurve final_pair_curve(const RunTrace& t) { return final_pair_curve(t.metrics); }

// Share of interior points with non-positive second difference; 1.0 means
// the curve is (discretely) concave. Reported, not asserted.
inline double concavity_score(const FinalPairCurve& c) {
  const auto& p = c.proportion;
  if (p.size() < 3) return 1.0;
  std::size_t ok = 0;
  for (std::size_t i = 1; i + 1 < p.size(); ++i)
    if (p[i + 1] - 2 * p[i] + p[i - 1] <= 1e-12) ++ok;
  return static_cast<double>(ok) / static_cast<double>(p.size() - 2);
}

struct CrossingReport {
  int ada_final_round = 0;
  double da_progress_at_ada_final = 0.0;
  int da_final_round = 0;
};

// DA's final-pair progress at the round where ADA terminated.
inline CrossingReport crossing_report(const RunTrace& da, const RunTrace& ada) {
  if (da.instance_digest != ada.instance_digest)
    throw Error(Errc::InstanceMismatch, "crossing_report: traces come from different instances");
  CrossingReport r;
  r.ada_final_round = ada.metrics.total_rounds;
  r.da_final_round = da.metrics.total_rounds;
  r.da_progress_at_ada_final = final_pair_curve(da).at(r.ada_final_round);
  return r;
}

inline constexpr const char* kResultsHeader =
    "n,c,seed,algorithm,rounds,proposals,direct_rejections,preemptive_rejections,total_rejections,idle_rounds,wall_time_s";

inline void write_results_csv(std::ostream& os, std::vector<ExperimentRecord> records) {
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return record_key(a) < record_key(b); });
  os << kResultsHeader << '\n';
  char wall[32];
  for (const auto& r : records) {
    const auto& m = r.metrics;
    std::snprintf(wall, sizeof wall, "%.9f", m.wall_time);
    os << r.n << ',' << detail::format_double(r.c) << ',' << r.seed << ',' << to_string(r.algorithm) << ','
       << m.total_rounds << ',' << m.total_proposals << ',' << m.direct_rejections << ',' << m.preemptive_rejections
       << ',' << m.total_rejections << ',' << m.idle_rounds << ',' << wall << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "n,c,algorithm,metric,mean,sd,min,max,count\n";
  for (const auto& r : rows) {
    os << (r.n ? std::to_string(*r.n) : "") << ',' << (r.c ? detail::format_double(*r.c) : "") << ','
       << (r.algorithm ? to_string(*r.algorithm) : "") << ',' << r.metric << ',' << detail::format_double(r.mean)
       << ',' << detail::format_double(r.sd) << ',' << detail::format_double(r.min) << ','
       << detail::format_double(r.max) << ',' << r.count << '\n';
  }
}

inline void write_curve_csv(std::ostream& os, const FinalPairCurve& c) {
  os << "round,proportion\n";
  for (std::size_t i = 0; i < c.rounds.size(); ++i)
    os << c.rounds[i] << ',' << detail::format_double(c.proportion[i]) << '\n';
}

}  // namespace matchkit
