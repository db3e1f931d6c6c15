#pragma once

// Iterated deletion of unattractive alternatives.
//
// Man m is unattractive to woman w when some man she prefers to m currently
// has w at the top of his list; the pair (m, w) is then removed from both
// lists. The mirror rule applies to women. Repeating until nothing changes
// yields the normal form, whose list heads give the man-optimal and
// woman-optimal stable matchings.

#include <algorithm>
#include <vector>

#include "matchkit/core.hpp"

namespace matchkit {

// Surviving candidates per participant, in original preference order.
struct CandidateSets {
  std::vector<std::vector<int>> men;
  std::vector<std::vector<int>> women;

  friend bool operator==(const CandidateSets&, const CandidateSets&) = default;
};

inline CandidateSets full_candidate_sets(const Instance& inst) {
  CandidateSets s;
  const auto raw = inst.to_raw();
  s.men = raw.men;
  s.women = raw.women;
  return s;
}

struct NormalForm {
  CandidateSets sets;
  int iterations = 0;  // number of sweeps that deleted something
  Matching mu_m;       // each man with the head of his list
  Matching mu_w;       // each woman with the head of hers
};

// One simultaneous sweep: every deletion implied by the current list heads
// is collected first and then applied to both sides.
inline CandidateSets delete_unattractive_step(const Instance& inst, const CandidateSets& sets) {
  const int n = inst.size();
  const auto& mr = inst.man_ranks();
  const auto& wr = inst.woman_ranks();

  // best_suitor[w]: the man w likes most among those whose list head is w.
  std::vector<int> best_suitor(n, -1), best_admirer(n, -1);
  for (int m = 0; m < n; ++m) {
    if (sets.men[m].empty()) throw Error(Errc::EmptiedList, "man " + std::to_string(m) + " has an empty list");
    const int w = sets.men[m].front();
    if (best_suitor[w] < 0 || wr(w, m) < wr(w, best_suitor[w])) best_suitor[w] = m;
  }
  for (int w = 0; w < n; ++w) {
    if (sets.women[w].empty()) throw Error(Errc::EmptiedList, "woman " + std::to_string(w) + " has an empty list");
    const int m = sets.women[w].front();
    if (best_admirer[m] < 0 || mr(m, w) < mr(m, best_admirer[m])) best_admirer[m] = w;
  }

  auto deleted = [&](int m, int w) {
    return (best_suitor[w] >= 0 && wr(w, m) > wr(w, best_suitor[w])) ||
           (best_admirer[m] >= 0 && mr(m, w) > mr(m, best_admirer[m]));
  };

  CandidateSets out;
  out.men.resize(n);
  out.women.resize(n);
  for (int m = 0; m < n; ++m)
    for (int w : sets.men[m])
      if (!deleted(m, w)) out.men[m].push_back(w);
  for (int w = 0; w < n; ++w)
    for (int m : sets.women[w])
      if (!deleted(m, w)) out.women[w].push_back(m);

  for (int i = 0; i < n; ++i)
    if (out.men[i].empty() || out.women[i].empty())
      throw Error(Errc::EmptiedList, "deletion emptied the list of participant " + std::to_string(i));
  return out;
}

inline NormalForm normal_form(const Instance& inst) {
  const int n = inst.size();
  NormalForm nf;
  nf.sets = full_candidate_sets(inst);
  for (;;) {
    auto next = delete_unattractive_step(inst, nf.sets);
    if (next == nf.sets) break;
    nf.sets = std::move(next);
    ++nf.iterations;
  }

  std::vector<int> wife(n), wife_w(n, -1);
  for (int m = 0; m < n; ++m) wife[m] = nf.sets.men[m].front();
  for (int w = 0; w < n; ++w) wife_w[nf.sets.women[w].front()] = w;
  nf.mu_m = Matching(std::move(wife));
  nf.mu_w = Matching(std::move(wife_w));
  if (!nf.mu_m.is_valid(n) || !nf.mu_w.is_valid(n))
    throw Error(Errc::InvariantViolation, "normal-form list heads do not form matchings");
  return nf;
}

// True iff every pair of mu survives in the candidate sets.
inline bool uses_only_surviving_pairs(const CandidateSets& sets, const Matching& mu) {
  for (int m = 0; m < mu.size(); ++m) {
    const auto& row = sets.men[m];
    if (std::find(row.begin(), row.end(), mu.wife(m)) == row.end()) return false;
  }
  return true;
}

}  // namespace matchkit
