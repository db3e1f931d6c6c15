#pragma once

// Executable invariants over run traces. Each check returns a list of
// human-readable violations; an empty list means the run is clean.

#include <algorithm>
#include <string>
#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/engines.hpp"

namespace matchkit {

using Violations = std::vector<std::string>;

namespace detail {

inline std::string pair_str(int m, int w) { return "(m" + std::to_string(m + 1) + ",w" + std::to_string(w + 1) + ")"; }

}  // namespace detail

// Invariants of a single run. Event checks are skipped when the trace was
// recorded without events.
inline Violations audit_trace(const Instance& inst, const RunTrace& t) {
  Violations v;
  const int n = inst.size();
  const auto& mr = inst.man_ranks();
  const auto& wr = inst.woman_ranks();
  const auto& met = t.metrics;
  const char* name = to_string(t.algorithm);
  auto fail = [&](std::string s) { v.push_back(std::string(name) + ": " + std::move(s)); };

  if (!t.final_matching.is_valid(n)) {
    fail("final matching is not a perfect matching");
    return v;
  }
  if (!is_stable(inst, t.final_matching)) fail("final matching is not stable");
  if (met.total_rejections != met.direct_rejections + met.preemptive_rejections) fail("rejection totals disagree");
  if (t.algorithm == Algorithm::DA && met.preemptive_rejections != 0) fail("DA produced pre-emptive rejections");
  if (static_cast<int>(met.final_pair_round.size()) != n) fail("final_pair_round has wrong length");
  else if (*std::max_element(met.final_pair_round.begin(), met.final_pair_round.end()) != met.total_rounds)
    fail("last final pair did not form in the last round");

  if (t.rounds.empty()) return v;
  if (static_cast<int>(t.rounds.size()) != met.total_rounds) fail("round count disagrees with event log");

  std::vector<int> husband(n, -1);
  std::vector<int> last_rank(n, -1);  // rank of the man's previous proposee
  std::vector<int> formed(n, 0);      // round (m, final wife) formed
  std::int64_t props = 0, direct = 0, pre = 0;
  int idle = 0;
  for (const auto& ev : t.rounds) {
    props += static_cast<std::int64_t>(ev.proposals.size());
    const auto husband_at_start = husband;
    std::vector<int> proposee(n, -1);
    for (const auto& p : ev.proposals) {
      proposee[p.man] = p.woman;
      if (mr(p.man, p.woman) <= last_rank[p.man])
        fail("man m" + std::to_string(p.man + 1) + " did not move down his list in round " + std::to_string(ev.round));
      last_rank[p.man] = mr(p.man, p.woman);
      const int h = husband_at_start[p.woman];
      if (t.algorithm == Algorithm::ADA && h >= 0 && wr(p.woman, p.man) > wr(p.woman, h))
        fail("proposal " + detail::pair_str(p.man, p.woman) + " cannot improve her partner");
    }

    std::vector<char> accepted_woman(n, 0);
    for (const auto& a : ev.acceptances) {
      if (proposee[a.man] != a.woman) fail("acceptance " + detail::pair_str(a.man, a.woman) + " without a proposal");
      if (accepted_woman[a.woman]) fail("woman accepted twice in one round");
      accepted_woman[a.woman] = 1;
      const int h = husband[a.woman];
      if (h >= 0 && wr(a.woman, a.man) >= wr(a.woman, h))
        fail("woman w" + std::to_string(a.woman + 1) + " traded down in round " + std::to_string(ev.round));
      husband[a.woman] = a.man;
      if (a.woman == t.final_matching.wife(a.man)) {
        if (formed[a.man]) fail("final pair " + detail::pair_str(a.man, a.woman) + " formed twice");
        formed[a.man] = ev.round;
      }
    }

    std::vector<char> rejected_directly(n, 0);
    for (const auto& r : ev.rejections) {
      (r.kind == RejectionKind::Direct ? direct : pre) += 1;
      if (r.kind == RejectionKind::Direct) {
        const bool proposer = proposee[r.man] == r.woman;
        const bool displaced = husband_at_start[r.woman] == r.man;
        if (!proposer && !displaced) fail("direct rejection " + detail::pair_str(r.man, r.woman) + " of a non-proposer");
        if (proposer) rejected_directly[r.man] = 1;
      }
      if (husband[r.woman] >= 0 && wr(r.woman, r.man) <= wr(r.woman, husband[r.woman]))
        fail("rejection " + detail::pair_str(r.man, r.woman) + " not below her partner");
      if (formed[r.man] && t.final_matching.wife(r.man) == r.woman) fail("final pair broke");
    }

    const bool idle_now = !ev.proposals.empty() && ev.acceptances.empty();
    if (ev.idle != idle_now) fail("idle flag wrong in round " + std::to_string(ev.round));
    if (ev.idle) {
      ++idle;
      for (const auto& p : ev.proposals)
        if (!rejected_directly[p.man]) fail("idle round with an unrejected proposal");
    }
  }

  const auto& last = t.rounds.back();
  for (const auto& r : last.rejections)
    if (r.kind == RejectionKind::Direct) fail("last round contains a direct rejection");
  for (int w = 0; w < n; ++w)
    if (husband[w] < 0 || t.final_matching.wife(husband[w]) != w) fail("replayed matching differs from the result");
  for (int m = 0; m < n; ++m)
    if (formed[m] != met.final_pair_round[m]) fail("final_pair_round disagrees with the event log");
  if (props != met.total_proposals) fail("proposal count disagrees with event log");
  if (direct != met.direct_rejections || pre != met.preemptive_rejections) fail("rejection counts disagree with event log");
  if (idle != met.idle_rounds) fail("idle round count disagrees with event log");
  return v;
}

// Dominance relations between a DA run and an ADA run on the same instance.
inline Violations audit_pair(const Instance& inst, const RunTrace& da, const RunTrace& ada) {
  Violations v;
  const int n = inst.size();
  if (da.algorithm != Algorithm::DA || ada.algorithm != Algorithm::ADA) {
    v.push_back("audit_pair expects (DA, ADA) traces");
    return v;
  }
  if (da.instance_digest != ada.instance_digest) {
    v.push_back("traces come from different instances");
    return v;
  }
  const auto& d = da.metrics;
  const auto& a = ada.metrics;
  if (!(da.final_matching == ada.final_matching)) v.push_back("DA and ADA returned different matchings");
  if (a.total_proposals > d.total_proposals) v.push_back("ADA used more proposals than DA");
  if (a.total_rounds > d.total_rounds) v.push_back("ADA used more rounds than DA");
  if (a.idle_rounds != 0) v.push_back("ADA had an idle round");
  if (d.preemptive_rejections != 0) v.push_back("DA produced pre-emptive rejections");
  if (a.total_rejections < d.total_rejections) v.push_back("ADA rejected fewer pairs than DA");
  for (int m = 0; m < n && m < static_cast<int>(a.final_pair_round.size()); ++m)
    if (a.final_pair_round[m] > d.final_pair_round[m]) {
      v.push_back("final pair of m" + std::to_string(m + 1) + " formed later under ADA");
      break;
    }

  if (da.rounds.empty() || ada.rounds.empty()) return v;

  const auto cells = static_cast<std::size_t>(n) * n;
  std::vector<int> da_round(cells, 0);
  std::vector<char> da_deleted(cells, 0), ada_deleted(cells, 0);
  for (const auto& ev : da.rounds) {
    for (const auto& p : ev.proposals) da_round[static_cast<std::size_t>(p.man) * n + p.woman] = ev.round;
    for (const auto& r : ev.rejections) da_deleted[static_cast<std::size_t>(r.man) * n + r.woman] = 1;
  }
  for (const auto& ev : ada.rounds) {
    for (const auto& p : ev.proposals) {
      const int k = da_round[static_cast<std::size_t>(p.man) * n + p.woman];
      if (k == 0) v.push_back("ADA proposal " + detail::pair_str(p.man, p.woman) + " never made by DA");
      else if (k < ev.round) v.push_back("ADA proposal " + detail::pair_str(p.man, p.woman) + " came later than under DA");
    }
    for (const auto& r : ev.rejections) ada_deleted[static_cast<std::size_t>(r.man) * n + r.woman] = 1;
  }
  for (std::size_t i = 0; i < cells; ++i)
    if (da_deleted[i] && !ada_deleted[i]) {
      v.push_back("pair deleted by DA survives ADA");
      break;
    }

  auto first_round = [](const RunTrace& t) {
    std::vector<Pair> props = t.rounds.front().proposals;
    std::vector<Pair> rej;
    for (const auto& r : t.rounds.front().rejections)
      if (r.kind == RejectionKind::Direct) rej.push_back({r.man, r.woman});
    auto less = [](const Pair& x, const Pair& y) { return std::pair(x.man, x.woman) < std::pair(y.man, y.woman); };
    std::sort(props.begin(), props.end(), less);
    std::sort(rej.begin(), rej.end(), less);
    return std::pair(props, rej);
  };
  if (first_round(da) != first_round(ada)) v.push_back("round-1 proposals or direct rejections differ");
  return v;
}

}  // namespace matchkit
