#pragma once

// Round-synchronous man-proposing deferred acceptance (DA) and its
// accelerated variant (ADA), instrumented with a per-round event log.
//
// Both engines share one loop. They differ only in what a woman does once
// she has picked her best proposer m*: DA rejects the other proposers (and
// a displaced partner); ADA additionally rejects every man she ranks below
// m* who has not been rejected by her yet. ADA's rejections are realised
// as a per-woman cutoff rank, so "has w rejected m" is a single comparison.

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <vector>

#include "matchkit/core.hpp"

namespace matchkit {

enum class Algorithm { DA, ADA };

inline const char* to_string(Algorithm a) { return a == Algorithm::DA ? "da" : "ada"; }

enum class RejectionKind { Direct, Preemptive };

inline const char* to_string(RejectionKind k) { return k == RejectionKind::Direct ? "direct" : "preemptive"; }

struct Pair {
  int man;
  int woman;
  friend bool operator==(const Pair&, const Pair&) = default;
};

struct Rejection {
  int man;
  int woman;
  RejectionKind kind;
  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct RoundEvents {
  int round = 0;  // 1-based
  std::vector<Pair> proposals;
  std::vector<Pair> acceptances;
  std::vector<Rejection> rejections;
  bool idle = false;  // proposals made, none accepted
};

struct RunMetrics {
  int total_rounds = 0;
  std::int64_t total_proposals = 0;
  std::int64_t direct_rejections = 0;
  std::int64_t preemptive_rejections = 0;
  std::int64_t total_rejections = 0;
  int idle_rounds = 0;
  // Round in which man i was first paired with his final partner.
  std::vector<int> final_pair_round;
  double wall_time = 0.0;  // seconds, engine loop only
};

struct RunTrace {
  Algorithm algorithm = Algorithm::DA;
  std::uint64_t instance_digest = 0;
  std::vector<RoundEvents> rounds;  // empty when events are not recorded
  Matching final_matching;
  RunMetrics metrics;
};

struct RunOptions {
  bool record_events = true;
};

struct DeferredAcceptance {
  static constexpr Algorithm algorithm = Algorithm::DA;
  static constexpr bool preemptive = false;
};

struct AcceleratedDeferredAcceptance {
  static constexpr Algorithm algorithm = Algorithm::ADA;
  static constexpr bool preemptive = true;
};

template <class Policy>
class ProposalEngine {
 public:
  explicit ProposalEngine(const Instance& inst, RunOptions opts = {})
      : inst_(&inst), opts_(opts), n_(inst.size()),
        next_(n_, 0), wife_(n_, -1), husband_(n_, -1), accept_round_(n_, 0),
        best_(n_, -1), prop_head_(n_, -1), prop_next_(n_, -1), prop_round_(n_, 0), prop_woman_(n_, -1) {
    singles_.reserve(n_);
    for (int m = 0; m < n_; ++m) singles_.push_back(m);
  }

  bool finished() const noexcept { return singles_.empty(); }
  int rounds_completed() const noexcept { return round_; }
  int wife(int man) const noexcept { return wife_[man]; }
  int husband(int woman) const noexcept { return husband_[woman]; }

  // Runs one round. The returned reference is valid until the next call and
  // is empty apart from `round` when events are not recorded.
  const RoundEvents& step() {
    assert(!finished());
    const auto t0 = std::chrono::steady_clock::now();
    const auto& wr = inst_->woman_ranks();
    ++round_;
    current_ = RoundEvents{};
    current_.round = round_;
    const bool rec = opts_.record_events;

    // 1. every single man proposes to his best woman who has not rejected him
    std::sort(singles_.begin(), singles_.end());
    touched_.clear();
    for (int m : singles_) {
      const auto prefs = inst_->man_prefs(m);
      int k = next_[m];
      if constexpr (Policy::preemptive) {
        while (wr(prefs[k], m) > cutoff(prefs[k])) ++k;
        next_[m] = k;
      }
      assert(k < n_);
      const int w = prefs[k];
      if (best_[w] < 0) {
        touched_.push_back(w);
        best_[w] = m;
        prop_head_[w] = -1;
      } else if (wr(w, m) < wr(w, best_[w])) {
        best_[w] = m;
      }
      prop_next_[m] = prop_head_[w];
      prop_head_[w] = m;
      prop_round_[m] = round_;
      prop_woman_[m] = w;
      if (rec) current_.proposals.push_back({m, w});
    }
    metrics_.total_proposals += static_cast<std::int64_t>(singles_.size());
    const bool any_proposals = !singles_.empty();
    singles_.clear();

    // 2. each woman holds her top proposer and rejects men below him
    std::sort(touched_.begin(), touched_.end());
    for (int w : touched_) {
      const int top = best_[w];
      best_[w] = -1;
      const int held = husband_[w];
      const int held_rank = held >= 0 ? wr(w, held) : n_;
      const int top_rank = wr(w, top);
      if constexpr (Policy::preemptive) assert(top_rank < held_rank);

      if (top_rank < held_rank) {
        husband_[w] = top;
        wife_[top] = w;
        accept_round_[top] = round_;
        if (rec) current_.acceptances.push_back({top, w});
        if (held >= 0) reject_into_singles(held);
      }

      if constexpr (Policy::preemptive) {
        // Every proposer sits above the old cutoff, so the rank window
        // (top_rank, held_rank) covers all rejected proposers.
        for (int m = prop_head_[w]; m >= 0; m = prop_next_[m])
          if (m != top) reject_into_singles(m);
        if (rec) {
          const auto order = inst_->woman_prefs(w);
          for (int r = top_rank + 1; r <= held_rank && r < n_; ++r) {
            const int m = order[r];
            const bool direct = m == held || proposed_to(m, w);
            current_.rejections.push_back({m, w, direct ? RejectionKind::Direct : RejectionKind::Preemptive});
          }
        }
        const std::int64_t window = held_rank - top_rank - 1;
        std::int64_t direct = 0;
        for (int m = prop_head_[w]; m >= 0; m = prop_next_[m])
          if (m != top) ++direct;
        metrics_.direct_rejections += direct + (held >= 0 ? 1 : 0);
        metrics_.preemptive_rejections += window - direct;
      } else {
        scratch_.clear();
        for (int m = prop_head_[w]; m >= 0; m = prop_next_[m])
          if (m != husband_[w]) scratch_.push_back(m);
        if (held >= 0 && husband_[w] != held) scratch_.push_back(held);
        for (int m : scratch_)
          if (m != held) reject_into_singles(m);
        metrics_.direct_rejections += static_cast<std::int64_t>(scratch_.size());
        if (rec) {
          std::sort(scratch_.begin(), scratch_.end(), [&](int a, int b) { return wr(w, a) < wr(w, b); });
          for (int m : scratch_) current_.rejections.push_back({m, w, RejectionKind::Direct});
        }
      }
    }

    bool accepted_any = false;
    if (rec) {
      accepted_any = !current_.acceptances.empty();
    } else {
      for (int w : touched_)
        if (accept_round_[husband_[w]] == round_) accepted_any = true;
    }
    current_.idle = any_proposals && !accepted_any;
    if (current_.idle) ++metrics_.idle_rounds;
    if (rec) rounds_.push_back(current_);

    metrics_.wall_time += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return current_;
  }

  RunTrace run() {
    while (!finished()) step();
    return take_trace();
  }

  // Finalises metrics; call once the engine has finished.
  RunTrace take_trace() {
    if (!finished()) throw Error(Errc::InvariantViolation, "engine has not terminated");
    RunTrace t;
    t.algorithm = Policy::algorithm;
    t.instance_digest = inst_->digest();
    t.rounds = std::move(rounds_);
    for (int m = 0; m < n_; ++m)
      if (wife_[m] < 0) throw Error(Errc::InvariantViolation, "terminated with an unmatched man");
    t.final_matching = Matching(wife_);
    metrics_.total_rounds = round_;
    metrics_.total_rejections = metrics_.direct_rejections + metrics_.preemptive_rejections;
    metrics_.final_pair_round = accept_round_;
    t.metrics = metrics_;
    return t;
  }

 private:
  int cutoff(int w) const noexcept {
    return husband_[w] >= 0 ? inst_->woman_ranks()(w, husband_[w]) : n_;
  }

  bool proposed_to(int m, int w) const noexcept {
    return prop_round_[m] == round_ && prop_woman_[m] == w;
  }

  // m was rejected by the woman at next_[m]; he moves past her.
  void reject_into_singles(int m) {
    if (wife_[m] >= 0 && husband_[wife_[m]] == m) husband_[wife_[m]] = -1;
    wife_[m] = -1;
    ++next_[m];
    singles_.push_back(m);
  }

  const Instance* inst_;
  RunOptions opts_;
  int n_;
  int round_ = 0;
  std::vector<int> next_;          // index into the man's list of his next candidate
  std::vector<int> wife_;
  std::vector<int> husband_;
  std::vector<int> accept_round_;  // round the man's current partner accepted him
  std::vector<int> best_;          // per-round scratch: top proposer per woman
  std::vector<int> prop_head_;     // per-round proposer lists, threaded through prop_next_
  std::vector<int> prop_next_;
  std::vector<int> prop_round_;    // last round the man proposed, and to whom
  std::vector<int> prop_woman_;
  std::vector<int> singles_;
  std::vector<int> touched_;
  std::vector<int> scratch_;
  RoundEvents current_;
  std::vector<RoundEvents> rounds_;
  RunMetrics metrics_;
};

using DaEngine = ProposalEngine<DeferredAcceptance>;
using AdaEngine = ProposalEngine<AcceleratedDeferredAcceptance>;

inline RunTrace run_da(const Instance& inst, RunOptions opts = {}) { return DaEngine(inst, opts).run(); }
inline RunTrace run_ada(const Instance& inst, RunOptions opts = {}) { return AdaEngine(inst, opts).run(); }

inline RunTrace run(Algorithm a, const Instance& inst, RunOptions opts = {}) {
  return a == Algorithm::DA ? run_da(inst, opts) : run_ada(inst, opts);
}

struct ContainmentRound {
  int round = 0;
  bool contained = true;  // A_k ⊆ D_k: every pair alive under ADA is alive under DA
  std::int64_t ada_deleted = 0;
  std::int64_t da_deleted = 0;
};

struct LockstepResult {
  RunTrace da;
  RunTrace ada;
  std::vector<ContainmentRound> rounds;
  bool all_contained = true;
};

// Advances both engines one round at a time and tracks, after each round,
// whether the pairs ADA has not deleted are a subset of those DA has not
// deleted. An engine that has terminated keeps its pair set fixed.
inline LockstepResult run_lockstep(const Instance& inst) {
  const int n = inst.size();
  DaEngine da(inst);
  AdaEngine ada(inst);
  std::vector<char> gone_da(static_cast<std::size_t>(n) * n, 0);
  std::vector<char> gone_ada(static_cast<std::size_t>(n) * n, 0);
  std::int64_t da_only = 0;  // deleted by DA, still alive under ADA
  LockstepResult out;
  ContainmentRound cr;
  while (!da.finished() || !ada.finished()) {
    ++cr.round;
    if (!da.finished()) {
      for (const auto& r : da.step().rejections) {
        const auto idx = static_cast<std::size_t>(r.man) * n + r.woman;
        if (gone_da[idx]) continue;
        gone_da[idx] = 1;
        ++cr.da_deleted;
        if (!gone_ada[idx]) ++da_only;
      }
    }
    if (!ada.finished()) {
      for (const auto& r : ada.step().rejections) {
        const auto idx = static_cast<std::size_t>(r.man) * n + r.woman;
        if (gone_ada[idx]) continue;
        gone_ada[idx] = 1;
        ++cr.ada_deleted;
        if (gone_da[idx]) --da_only;
      }
    }
    cr.contained = da_only == 0;
    out.all_contained = out.all_contained && cr.contained;
    out.rounds.push_back(cr);
  }
  out.da = da.take_trace();
  out.ada = ada.take_trace();
  return out;
}

}  // namespace matchkit
