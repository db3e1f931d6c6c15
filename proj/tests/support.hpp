#pragma once

// Shared test helpers. The reference algorithms here are deliberately
// naive and written without looking at the engine internals; tests use
// them as independent oracles.

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "matchkit/matchkit.hpp"

namespace testing_support {

using namespace matchkit;

inline std::string fixture_path(const std::string& name) { return std::string(MATCHKIT_FIXTURE_DIR) + "/" + name; }

inline Instance load_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  return io::read_instance(in).instance;
}

inline Instance example1() { return load_fixture("example1.txt"); }

// 1-based rows, as printed in the worked example.
inline Instance from_one_based(int n, std::vector<std::vector<int>> men, std::vector<std::vector<int>> women) {
  for (auto& r : men)
    for (auto& x : r) --x;
  for (auto& r : women)
    for (auto& x : r) --x;
  return validate_instance(RawInstance{n, std::move(men), std::move(women)});
}

// Every man ranks women 0..n-1 in order; every woman ranks men 0..n-1.
inline Instance universal_ranking(int n) {
  std::vector<int> row(n);
  std::iota(row.begin(), row.end(), 0);
  return validate_instance(RawInstance{n, std::vector(n, row), std::vector(n, row)});
}

// Quadratic scan straight from the definition: (m, w) blocks mu iff each
// strictly prefers the other to their partner.
inline std::set<std::pair<int, int>> blocking_pairs_by_definition(const Instance& inst, const std::vector<int>& wife) {
  const int n = inst.size();
  std::vector<int> husband(n);
  for (int m = 0; m < n; ++m) husband[wife[m]] = m;
  auto pos = [](std::span<const int> list, int x) {
    return static_cast<int>(std::find(list.begin(), list.end(), x) - list.begin());
  };
  std::set<std::pair<int, int>> out;
  for (int m = 0; m < n; ++m)
    for (int w = 0; w < n; ++w) {
      if (wife[m] == w) continue;
      const bool man_wants = pos(inst.man_prefs(m), w) < pos(inst.man_prefs(m), wife[m]);
      const bool woman_wants = pos(inst.woman_prefs(w), m) < pos(inst.woman_prefs(w), husband[w]);
      if (man_wants && woman_wants) out.emplace(m, w);
    }
  return out;
}

struct ReferenceRun {
  std::vector<int> wife;
  int rounds = 0;
  long long proposals = 0;
  std::vector<int> final_pair_round;
};

// Round-synchronous proposal algorithm over explicit "crossed off" tables.
// With preemptive = true, a woman who takes a new partner crosses off
// every man she ranks below him.
inline ReferenceRun reference_run(const Instance& inst, bool preemptive) {
  const int n = inst.size();
  std::vector<std::vector<bool>> crossed(n, std::vector<bool>(n, false));  // [m][w]
  std::vector<int> wife(n, -1), husband(n, -1), since(n, 0);
  ReferenceRun out;
  for (;;) {
    std::vector<std::vector<int>> offers(n);
    bool any = false;
    for (int m = 0; m < n; ++m) {
      if (wife[m] != -1) continue;
      for (int w : inst.man_prefs(m))
        if (!crossed[m][w]) {
          offers[w].push_back(m);
          ++out.proposals;
          any = true;
          break;
        }
    }
    if (!any) break;
    ++out.rounds;
    for (int w = 0; w < n; ++w) {
      if (offers[w].empty()) continue;
      auto candidates = offers[w];
      if (husband[w] != -1) candidates.push_back(husband[w]);
      const auto list = inst.woman_prefs(w);
      int best = -1;
      for (int m : list)
        if (std::find(candidates.begin(), candidates.end(), m) != candidates.end()) {
          best = m;
          break;
        }
      for (int m : candidates)
        if (m != best) crossed[m][w] = true;
      if (best != husband[w]) {
        if (husband[w] != -1) wife[husband[w]] = -1;
        husband[w] = best;
        wife[best] = w;
        since[best] = out.rounds;
      }
      if (preemptive) {
        bool below = false;
        for (int m : list) {
          if (below) crossed[m][w] = true;
          if (m == best) below = true;
        }
      }
    }
  }
  out.wife = wife;
  out.final_pair_round = since;
  return out;
}

// Stable matchings by brute force over all n! matchings, using the
// definition-level blocking-pair scan.
inline std::vector<std::vector<int>> stable_by_definition(const Instance& inst) {
  std::vector<int> p(inst.size());
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do
    if (blocking_pairs_by_definition(inst, p).empty()) out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::vector<Pair> sorted(std::vector<Pair> v) {
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return std::tie(a.man, a.woman) < std::tie(b.man, b.woman); });
  return v;
}

// Rejections of one kind as (man, woman) pairs, sorted.
inline std::vector<Pair> rejections_of(const RoundEvents& ev, RejectionKind kind) {
  std::vector<Pair> out;
  for (const auto& r : ev.rejections)
    if (r.kind == kind) out.push_back({r.man, r.woman});
  return sorted(out);
}

// 1-based (man, woman) shorthand.
inline Pair P(int m, int w) { return {m - 1, w - 1}; }

}  // namespace testing_support
