#pragma once

// Domain types for one-to-one two-sided markets: instances, matchings,
// preference comparison and stability predicates.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace matchkit {

enum class Side { Men, Women };

inline const char* to_string(Side side) { return side == Side::Men ? "men" : "women"; }

enum class Errc {
  RowNotPermutation,
  SizeMismatch,
  NTooSmall,
  IndexOutOfRange,
  Precondition,
  InvalidMatching,
  EmptiedList,
  TooLarge,
  InvalidParams,
  EmptyGroup,
  InstanceMismatch,
  Parse,
  InvariantViolation,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Error(Errc code, const std::string& what, Side side, int row)
      : std::runtime_error(what), code_(code), side_(side), row_(row) {}

  Errc code() const noexcept { return code_; }
  std::optional<Side> side() const noexcept { return side_; }
  // First offending row (0-based), or -1.
  int row() const noexcept { return row_; }

 private:
  Errc code_;
  std::optional<Side> side_;
  int row_ = -1;
};

// Unvalidated preference data, as read from a file or built by hand.
struct RawInstance {
  int n = 0;
  std::vector<std::vector<int>> men;
  std::vector<std::vector<int>> women;
};

// ranks[p][q]: position of candidate q in participant p's list (0 = best).
class RankMatrix {
 public:
  RankMatrix() = default;

  explicit RankMatrix(int n, std::span<const int> prefs) : n_(n), ranks_(prefs.size()) {
    for (int p = 0; p < n; ++p)
      for (int k = 0; k < n; ++k) ranks_[static_cast<std::size_t>(p) * n + prefs[p * n + k]] = k;
  }

  int size() const noexcept { return n_; }
  int operator()(int participant, int candidate) const noexcept {
    return ranks_[static_cast<std::size_t>(participant) * n_ + candidate];
  }
  std::span<const int> row(int participant) const noexcept {
    return {ranks_.data() + static_cast<std::size_t>(participant) * n_, static_cast<std::size_t>(n_)};
  }

 private:
  int n_ = 0;
  std::vector<int> ranks_;
};

class Instance;
Instance validate_instance(const RawInstance& raw);

// A validated market with complete strict preferences on both sides.
// Immutable once built; rank matrices are computed at construction.
class Instance {
 public:
  int size() const noexcept { return n_; }

  std::span<const int> man_prefs(int man) const noexcept { return row(men_, man); }
  std::span<const int> woman_prefs(int woman) const noexcept { return row(women_, woman); }
  std::span<const int> prefs(Side side, int participant) const noexcept {
    return side == Side::Men ? man_prefs(participant) : woman_prefs(participant);
  }

  const RankMatrix& man_ranks() const noexcept { return men_ranks_; }
  const RankMatrix& woman_ranks() const noexcept { return women_ranks_; }
  const RankMatrix& ranks(Side side) const noexcept {
    return side == Side::Men ? men_ranks_ : women_ranks_;
  }

  // Flat row-major copies, for hashing and serialization.
  const std::vector<int>& men_flat() const noexcept { return men_; }
  const std::vector<int>& women_flat() const noexcept { return women_; }

  RawInstance to_raw() const {
    RawInstance raw{n_, {}, {}};
    for (int i = 0; i < n_; ++i) {
      raw.men.emplace_back(man_prefs(i).begin(), man_prefs(i).end());
      raw.women.emplace_back(woman_prefs(i).begin(), woman_prefs(i).end());
    }
    return raw;
  }

  // FNV-1a over n and both preference matrices.
  std::uint64_t digest() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint32_t v) {
      for (int b = 0; b < 4; ++b) {
        h ^= (v >> (8 * b)) & 0xffu;
        h *= 0x100000001b3ULL;
      }
    };
    mix(static_cast<std::uint32_t>(n_));
    for (int v : men_) mix(static_cast<std::uint32_t>(v));
    for (int v : women_) mix(static_cast<std::uint32_t>(v));
    return h;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.n_ == b.n_ && a.men_ == b.men_ && a.women_ == b.women_;
  }

 private:
  friend Instance validate_instance(const RawInstance& raw);

  Instance(int n, std::vector<int> men, std::vector<int> women)
      : n_(n), men_(std::move(men)), women_(std::move(women)),
        men_ranks_(n_, men_), women_ranks_(n_, women_) {}

  std::span<const int> row(const std::vector<int>& m, int i) const noexcept {
    return {m.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }

  int n_;
  std::vector<int> men_;
  std::vector<int> women_;
  RankMatrix men_ranks_;
  RankMatrix women_ranks_;
};

namespace detail {

inline std::vector<int> flatten_side(const std::vector<std::vector<int>>& rows, int n, Side side) {
  if (static_cast<int>(rows.size()) != n)
    throw Error(Errc::SizeMismatch,
                std::string(to_string(side)) + ": expected " + std::to_string(n) + " rows, got " +
                    std::to_string(rows.size()));
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  std::vector<char> seen(n);
  for (int r = 0; r < n; ++r) {
    const auto& row = rows[r];
    if (static_cast<int>(row.size()) != n)
      throw Error(Errc::SizeMismatch,
                  std::string(to_string(side)) + " row " + std::to_string(r) + ": expected " +
                      std::to_string(n) + " entries, got " + std::to_string(row.size()),
                  side, r);
    std::fill(seen.begin(), seen.end(), 0);
    for (int v : row) {
      if (v < 0 || v >= n || seen[v])
        throw Error(Errc::RowNotPermutation,
                    std::string(to_string(side)) + " row " + std::to_string(r) +
                        " is not a permutation of 0.." + std::to_string(n - 1),
                    side, r);
      seen[v] = 1;
      flat.push_back(v);
    }
  }
  return flat;
}

}  // namespace detail

inline Instance validate_instance(const RawInstance& raw) {
  if (raw.n < 2) throw Error(Errc::NTooSmall, "market size must be at least 2, got " + std::to_string(raw.n));
  auto men = detail::flatten_side(raw.men, raw.n, Side::Men);
  auto women = detail::flatten_side(raw.women, raw.n, Side::Women);
  return Instance(raw.n, std::move(men), std::move(women));
}

struct Participant {
  Side side;
  int index;
};

// True iff the participant ranks candidate a strictly above candidate b.
inline bool prefers(const Instance& inst, Participant who, int a, int b) {
  const int n = inst.size();
  if (who.index < 0 || who.index >= n || a < 0 || a >= n || b < 0 || b >= n)
    throw Error(Errc::IndexOutOfRange, "participant or candidate index out of range");
  if (a == b) throw Error(Errc::Precondition, "prefers() needs two distinct candidates");
  const auto& r = inst.ranks(who.side);
  return r(who.index, a) < r(who.index, b);
}

// wife[m] is the woman matched to man m. The inverse is derived on demand.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::vector<int> wife) : wife_(std::move(wife)) {}

  int size() const noexcept { return static_cast<int>(wife_.size()); }
  int wife(int man) const noexcept { return wife_[man]; }
  const std::vector<int>& pairs() const noexcept { return wife_; }

  std::vector<int> husbands() const {
    std::vector<int> h(wife_.size(), -1);
    for (std::size_t m = 0; m < wife_.size(); ++m) h[wife_[m]] = static_cast<int>(m);
    return h;
  }

  bool is_valid(int n) const {
    if (size() != n) return false;
    std::vector<char> seen(n);
    for (int w : wife_) {
      if (w < 0 || w >= n || seen[w]) return false;
      seen[w] = 1;
    }
    return true;
  }

  friend bool operator==(const Matching&, const Matching&) = default;
  friend auto operator<=>(const Matching&, const Matching&) = default;

 private:
  std::vector<int> wife_;
};

inline Matching identity_matching(int n) {
  std::vector<int> w(n);
  for (int i = 0; i < n; ++i) w[i] = i;
  return Matching(std::move(w));
}

struct BlockingPair {
  int man;
  int woman;
  friend bool operator==(const BlockingPair&, const BlockingPair&) = default;
};

inline void require_valid_matching(const Instance& inst, const Matching& mu) {
  if (!mu.is_valid(inst.size()))
    throw Error(Errc::InvalidMatching, "matching is not a permutation of 0.." + std::to_string(inst.size() - 1));
}

// All blocking pairs in (man, woman) row-major order.
inline std::vector<BlockingPair> find_blocking_pairs(const Instance& inst, const Matching& mu) {
  require_valid_matching(inst, mu);
  const int n = inst.size();
  const auto husband = mu.husbands();
  const auto& mr = inst.man_ranks();
  const auto& wr = inst.woman_ranks();
  std::vector<BlockingPair> out;
  for (int m = 0; m < n; ++m) {
    const int current = mr(m, mu.wife(m));
    // Only women he ranks above his partner can block with him.
    for (int w = 0; w < n; ++w)
      if (mr(m, w) < current && wr(w, m) < wr(w, husband[w])) out.push_back({m, w});
  }
  return out;
}

inline bool is_stable(const Instance& inst, const Matching& mu) {
  require_valid_matching(inst, mu);
  const int n = inst.size();
  const auto husband = mu.husbands();
  const auto& wr = inst.woman_ranks();
  for (int m = 0; m < n; ++m) {
    for (int w : inst.man_prefs(m)) {
      if (w == mu.wife(m)) break;
      if (wr(w, m) < wr(w, husband[w])) return false;
    }
  }
  return true;
}

// "m1-w1 m2-w2 ..." with 1-based ids.
inline std::string format_matching(const Matching& mu) {
  std::string s;
  for (int m = 0; m < mu.size(); ++m) {
    if (m) s += ' ';
    s += 'm' + std::to_string(m + 1) + "-w" + std::to_string(mu.wife(m) + 1);
  }
  return s;
}

}  // namespace matchkit
