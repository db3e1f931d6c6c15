#pragma once

// Random instances with a tunable similarity bias c in [0, 1].
//
// For each side independently: draw one "universal" permutation p, then for
// every row a noise vector v with entries uniform in [0, n-1]. The row's
// preference list is the ascending argsort of (1-c)*v + c*p. c = 0 gives
// uniformly random lists; c = 1 gives identical lists on each side.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "matchkit/core.hpp"
#include "matchkit/rng.hpp"

namespace matchkit {

struct GeneratorParams {
  int n = 2;
  double c = 0.0;
  std::uint64_t seed = 0;
};

inline void validate(const GeneratorParams& p) {
  if (p.n < 2) throw Error(Errc::InvalidParams, "generator: n must be at least 2, got " + std::to_string(p.n));
  if (!(p.c >= 0.0 && p.c <= 1.0))
    throw Error(Errc::InvalidParams, "generator: c must lie in [0, 1], got " + std::to_string(p.c));
}

namespace detail {

// Uniform permutation of 0..n-1 (Fisher-Yates).
inline std::vector<int> random_permutation(int n, rng::Xoshiro256ss& g) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(p[i], p[static_cast<int>(g.below(static_cast<std::uint64_t>(i) + 1))]);
  return p;
}

inline std::vector<std::vector<int>> generate_side(int n, double c, std::uint64_t seed, std::uint64_t side) {
  auto perm_stream = rng::stream(seed, side, 0);
  const auto universal = random_permutation(n, perm_stream);
  const double scale = static_cast<double>(n - 1);

  std::vector<std::vector<int>> rows(n);
  std::vector<double> u(n);
  for (int i = 0; i < n; ++i) {
    auto g = rng::stream(seed, side, static_cast<std::uint64_t>(i) + 1);
    for (int j = 0; j < n; ++j) u[j] = (1.0 - c) * (g.uniform01() * scale) + c * universal[j];
    auto& row = rows[i];
    row.resize(n);
    std::iota(row.begin(), row.end(), 0);
    // ties: smaller index first
    std::sort(row.begin(), row.end(), [&](int a, int b) { return u[a] < u[b] || (u[a] == u[b] && a < b); });
  }
  return rows;
}

}  // namespace detail

inline Instance generate(const GeneratorParams& p) {
  validate(p);
  RawInstance raw;
  raw.n = p.n;
  raw.men = detail::generate_side(p.n, p.c, p.seed, 0);
  raw.women = detail::generate_side(p.n, p.c, p.seed, 1);
  return validate_instance(raw);
}

}  // namespace matchkit
