#pragma once

// Brute-force ground truth for small markets. Stable matchings are found
// by enumerating every matching; misreport probes try every list.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "matchkit/audit.hpp"
#include "matchkit/core.hpp"
#include "matchkit/engines.hpp"
#include "matchkit/idua.hpp"

namespace matchkit::oracle {

inline constexpr int kMaxEnumerationSize = 8;
inline constexpr int kMaxProbeSize = 5;

inline void require_size(const Instance& inst, int limit, const char* what) {
  if (inst.size() > limit)
    throw Error(Errc::TooLarge, std::string(what) + ": n=" + std::to_string(inst.size()) + " exceeds limit " +
                                    std::to_string(limit));
}

// Every stable matching, in lexicographic order of the man->woman array.
inline std::vector<Matching> enumerate_stable(const Instance& inst) {
  require_size(inst, kMaxEnumerationSize, "enumerate_stable");
  const int n = inst.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Matching> out;
  do {
    Matching mu(perm);
    if (is_stable(inst, mu)) out.push_back(std::move(mu));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

namespace detail {

// The element of `stable` that every participant on `side` weakly prefers.
inline Matching side_optimal(const Instance& inst, const std::vector<Matching>& stable, Side side) {
  const int n = inst.size();
  for (const auto& cand : stable) {
    const auto cand_h = cand.husbands();
    bool best = true;
    for (const auto& other : stable) {
      const auto other_h = other.husbands();
      for (int p = 0; p < n && best; ++p) {
        if (side == Side::Men) best = inst.man_ranks()(p, cand.wife(p)) <= inst.man_ranks()(p, other.wife(p));
        else best = inst.woman_ranks()(p, cand_h[p]) <= inst.woman_ranks()(p, other_h[p]);
      }
      if (!best) break;
    }
    if (best) return cand;
  }
  throw Error(Errc::InvariantViolation, "no side-optimal stable matching found");
}

}  // namespace detail

inline Matching man_optimal(const Instance& inst) {
  return detail::side_optimal(inst, enumerate_stable(inst), Side::Men);
}

inline Matching woman_optimal(const Instance& inst) {
  return detail::side_optimal(inst, enumerate_stable(inst), Side::Women);
}

// Market whose lists may omit candidates (omitted = unacceptable).
struct RaggedMarket {
  int n = 0;
  std::vector<std::vector<int>> men;
  std::vector<std::vector<int>> women;
};

// Accelerated deferred acceptance on possibly incomplete lists, simulated
// directly with an explicit rejected-pair table. A woman's unacceptable
// men rank below a sentinel and are never held. Returns wife per man, -1
// for men left single.
inline std::vector<int> run_ada_ragged(const RaggedMarket& mk) {
  const int n = mk.n;
  std::vector<std::vector<int>> rank(n, std::vector<int>(n, 0));
  std::vector<int> sentinel(n);
  for (int w = 0; w < n; ++w) {
    sentinel[w] = static_cast<int>(mk.women[w].size());
    std::fill(rank[w].begin(), rank[w].end(), n + 1);
    for (int k = 0; k < sentinel[w]; ++k) rank[w][mk.women[w][k]] = k;
  }
  std::vector<std::vector<char>> rejected(n, std::vector<char>(n, 0));  // [w][m]
  std::vector<int> wife(n, -1), husband(n, -1);

  for (;;) {
    std::vector<std::vector<int>> proposers(n);
    bool any = false;
    for (int m = 0; m < n; ++m) {
      if (wife[m] >= 0) continue;
      for (int w : mk.men[m])
        if (!rejected[w][m]) {
          proposers[w].push_back(m);
          any = true;
          break;
        }
    }
    if (!any) break;
    for (int w = 0; w < n; ++w) {
      if (proposers[w].empty()) continue;
      int top = -1;
      for (int m : proposers[w])
        if (rank[w][m] < sentinel[w] && (top < 0 || rank[w][m] < rank[w][top])) top = m;
      if (top < 0 || (husband[w] >= 0 && rank[w][husband[w]] < rank[w][top])) {
        for (int m : proposers[w]) rejected[w][m] = 1;
        continue;
      }
      if (husband[w] >= 0) wife[husband[w]] = -1;
      husband[w] = top;
      wife[top] = w;
      for (int m = 0; m < n; ++m)
        if (rank[w][m] > rank[w][top]) rejected[w][m] = 1;
    }
  }
  return wife;
}

struct Misreport {
  std::vector<int> reported;
  int partner;
};

struct StrategyProbeReport {
  int man = 0;
  int truthful_partner = -1;
  int reports_tried = 0;
  bool identity_matches_baseline = false;
  std::vector<Misreport> profitable;  // strictly better under his true list
};

// Tries every list the man could report and judges each ADA outcome with
// his true preferences.
inline StrategyProbeReport probe_strategyproofness(const Instance& inst, int man) {
  require_size(inst, kMaxProbeSize, "probe_strategyproofness");
  const int n = inst.size();
  if (man < 0 || man >= n) throw Error(Errc::IndexOutOfRange, "man index out of range");
  const RunOptions quiet{false};
  const auto& truth = inst.man_ranks();

  StrategyProbeReport rep;
  rep.man = man;
  rep.truthful_partner = run_ada(inst, quiet).final_matching.wife(man);
  const auto true_list = inst.man_prefs(man);

  auto raw = inst.to_raw();
  std::vector<int> list(n);
  std::iota(list.begin(), list.end(), 0);
  do {
    raw.men[man] = list;
    const int got = run_ada(validate_instance(raw), quiet).final_matching.wife(man);
    ++rep.reports_tried;
    if (std::equal(list.begin(), list.end(), true_list.begin()))
      rep.identity_matches_baseline = got == rep.truthful_partner;
    if (truth(man, got) < truth(man, rep.truthful_partner)) rep.profitable.push_back({list, got});
  } while (std::next_permutation(list.begin(), list.end()));
  return rep;
}

struct TruncationReport {
  Matching mu_m;
  Matching mu_w;
  std::vector<int> outcome;         // wife per man under the truncated reports, -1 if single
  std::vector<int> improved_women;  // strictly better off than under truthful reports
  bool outcome_is_mu_w = false;
};

// Every woman reports only her partner in the woman-optimal stable
// matching; men report truthfully.
inline TruncationReport probe_woman_truncation(const Instance& inst) {
  require_size(inst, kMaxEnumerationSize, "probe_woman_truncation");
  const int n = inst.size();
  const auto stable = enumerate_stable(inst);
  TruncationReport rep;
  rep.mu_m = detail::side_optimal(inst, stable, Side::Men);
  rep.mu_w = detail::side_optimal(inst, stable, Side::Women);

  RaggedMarket mk;
  mk.n = n;
  const auto raw = inst.to_raw();
  mk.men = raw.men;
  mk.women.resize(n);
  const auto tau = rep.mu_w.husbands();
  for (int w = 0; w < n; ++w) mk.women[w] = {tau[w]};
  rep.outcome = run_ada_ragged(mk);
  rep.outcome_is_mu_w = rep.outcome == rep.mu_w.pairs();

  const auto truthful_h = run_ada(inst, RunOptions{false}).final_matching.husbands();
  std::vector<int> got_h(n, -1);
  for (int m = 0; m < n; ++m)
    if (rep.outcome[m] >= 0) got_h[rep.outcome[m]] = m;
  for (int w = 0; w < n; ++w)
    if (got_h[w] >= 0 && inst.woman_ranks()(w, got_h[w]) < inst.woman_ranks()(w, truthful_h[w]))
      rep.improved_women.push_back(w);
  return rep;
}

// Everything we can cross-check on one instance. Brute-force extremes are
// included only when enumeration is cheap enough.
inline Violations verify_agreement(const Instance& inst) {
  Violations v;
  const auto lock = run_lockstep(inst);
  for (auto& s : audit_trace(inst, lock.da)) v.push_back(std::move(s));
  for (auto& s : audit_trace(inst, lock.ada)) v.push_back(std::move(s));
  for (auto& s : audit_pair(inst, lock.da, lock.ada)) v.push_back(std::move(s));
  if (!lock.all_contained) v.push_back("lockstep: ADA pair set escaped DA pair set");

  const auto nf = normal_form(inst);
  if (!(nf.mu_m == lock.da.final_matching)) v.push_back("IDUA mu_M differs from DA output");
  if (!is_stable(inst, nf.mu_w)) v.push_back("IDUA mu_W is not stable");

  if (inst.size() <= kMaxEnumerationSize) {
    const auto stable = enumerate_stable(inst);
    const auto mo = detail::side_optimal(inst, stable, Side::Men);
    const auto wo = detail::side_optimal(inst, stable, Side::Women);
    if (!(mo == lock.da.final_matching)) v.push_back("DA output is not the man-optimal stable matching");
    if (!(mo == nf.mu_m)) v.push_back("IDUA mu_M is not the man-optimal stable matching");
    if (!(wo == nf.mu_w)) v.push_back("IDUA mu_W is not the woman-optimal stable matching");
  }
  return v;
}

}  // namespace matchkit::oracle
