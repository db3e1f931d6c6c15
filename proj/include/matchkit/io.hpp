#pragma once

// File formats. All ids in files are 1-based.
//
// Instance file (line oriented):
//
//   # key: value          optional metadata / comments
//   n
//   n lines, man i's list of women, most preferred first
//   <blank line>
//   n lines, woman j's list of men
//
// Traces are JSON lines: one {"type":"round",...} object per round and a
// closing {"type":"summary",...} object.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "matchkit/core.hpp"
#include "matchkit/engines.hpp"
#include "matchkit/experiments.hpp"
#include "matchkit/rng.hpp"

namespace matchkit::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

struct InstanceFile {
  Instance instance;
  Metadata metadata;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] inline void parse_error(int line, const std::string& msg) {
  throw Error(Errc::Parse, "line " + std::to_string(line) + ": " + msg);
}

inline std::vector<int> parse_ids(const std::string& text, int line) {
  std::istringstream in(text);
  std::vector<int> ids;
  std::string tok;
  while (in >> tok) {
    int v = 0;
    std::size_t used = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      parse_error(line, "expected an integer, got '" + tok + "'");
    }
    if (used != tok.size()) parse_error(line, "expected an integer, got '" + tok + "'");
    ids.push_back(v - 1);
  }
  return ids;
}

}  // namespace detail

inline InstanceFile read_instance(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);

  Metadata meta;
  std::size_t i = 0;
  auto lineno = [&] { return static_cast<int>(i) + 1; };
  auto skip_comments_and_blanks = [&] {
    while (i < lines.size()) {
      const auto t = detail::trim(lines[i]);
      if (!t.empty() && t[0] != '#') break;
      if (!t.empty()) {
        const auto body = detail::trim(t.substr(1));
        const auto colon = body.find(':');
        if (colon != std::string::npos)
          meta.emplace_back(detail::trim(body.substr(0, colon)), detail::trim(body.substr(colon + 1)));
      }
      ++i;
    }
  };

  skip_comments_and_blanks();
  if (i >= lines.size()) throw Error(Errc::Parse, "line " + std::to_string(lineno()) + ": missing market size");
  const auto size_ids = detail::parse_ids(detail::trim(lines[i]), lineno());
  if (size_ids.size() != 1) detail::parse_error(lineno(), "first line must hold the market size alone");
  RawInstance raw;
  raw.n = size_ids[0] + 1;
  if (raw.n < 2) detail::parse_error(lineno(), "market size must be at least 2");
  ++i;

  std::vector<int> row_line[2];
  auto read_block = [&](std::vector<std::vector<int>>& rows, std::vector<int>& where, const char* side) {
    for (int r = 0; r < raw.n; ++r) {
      while (i < lines.size() && detail::trim(lines[i]).starts_with('#')) ++i;
      if (i >= lines.size() || detail::trim(lines[i]).empty())
        detail::parse_error(lineno(), std::string("expected ") + std::to_string(raw.n) + " rows for " + side +
                                          ", found " + std::to_string(r));
      where.push_back(lineno());
      rows.push_back(detail::parse_ids(lines[i], lineno()));
      ++i;
    }
  };

  read_block(raw.men, row_line[0], "men");
  if (i >= lines.size() || !detail::trim(lines[i]).empty())
    detail::parse_error(lineno(), "expected a blank line between the men's and women's lists");
  while (i < lines.size() && detail::trim(lines[i]).empty()) ++i;
  read_block(raw.women, row_line[1], "women");
  while (i < lines.size()) {
    const auto t = detail::trim(lines[i]);
    if (!t.empty() && t[0] != '#') detail::parse_error(lineno(), "unexpected content after the women's lists");
    ++i;
  }

  try {
    return InstanceFile{validate_instance(raw), std::move(meta)};
  } catch (const Error& e) {
    if (e.side() && e.row() >= 0) {
      const int line = row_line[*e.side() == Side::Men ? 0 : 1][static_cast<std::size_t>(e.row())];
      throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what(), *e.side(), e.row());
    }
    throw;
  }
}

inline void write_lists(std::ostream& os, const std::vector<std::vector<int>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << row[k] + 1;
    os << '\n';
  }
}

inline void write_instance(std::ostream& os, const Instance& inst, const Metadata& meta = {}) {
  for (const auto& [k, v] : meta) os << "# " << k << ": " << v << '\n';
  const auto raw = inst.to_raw();
  os << raw.n << '\n';
  write_lists(os, raw.men);
  os << '\n';
  write_lists(os, raw.women);
}

inline std::string to_instance_text(const Instance& inst, const Metadata& meta = {}) {
  std::ostringstream os;
  write_instance(os, inst, meta);
  return os.str();
}

inline Metadata generator_metadata(int n, double c, std::uint64_t seed) {
  return {{"generator", rng::kGeneratorId},
          {"n", std::to_string(n)},
          {"c", matchkit::detail::format_double(c)},
          {"seed", std::to_string(seed)}};
}

namespace detail {

inline nlohmann::json pairs_json(const std::vector<Pair>& ps) {
  auto arr = nlohmann::json::array();
  for (const auto& p : ps) arr.push_back({{"man", p.man + 1}, {"woman", p.woman + 1}});
  return arr;
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace detail

inline nlohmann::json round_json(const RoundEvents& ev) {
  auto rej = nlohmann::json::array();
  for (const auto& r : ev.rejections) rej.push_back({{"man", r.man + 1}, {"woman", r.woman + 1}, {"kind", to_string(r.kind)}});
  return {{"type", "round"},
          {"round", ev.round},
          {"proposals", detail::pairs_json(ev.proposals)},
          {"acceptances", detail::pairs_json(ev.acceptances)},
          {"rejections", std::move(rej)},
          {"idle", ev.idle}};
}

inline nlohmann::json summary_json(const RunTrace& t) {
  const auto& m = t.metrics;
  auto matching = nlohmann::json::array();
  for (int i = 0; i < t.final_matching.size(); ++i) matching.push_back({i + 1, t.final_matching.wife(i) + 1});
  return {{"type", "summary"},
          {"algorithm", to_string(t.algorithm)},
          {"instance_digest", detail::hex64(t.instance_digest)},
          {"total_rounds", m.total_rounds},
          {"total_proposals", m.total_proposals},
          {"direct_rejections", m.direct_rejections},
          {"preemptive_rejections", m.preemptive_rejections},
          {"total_rejections", m.total_rejections},
          {"idle_rounds", m.idle_rounds},
          {"final_pair_round", m.final_pair_round},
          {"wall_time_s", m.wall_time},
          {"final_matching", std::move(matching)}};
}

inline void write_trace_jsonl(std::ostream& os, const RunTrace& t) {
  for (const auto& ev : t.rounds) os << round_json(ev).dump() << '\n';
  os << summary_json(t).dump() << '\n';
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "da" || s == "DA") return Algorithm::DA;
  if (s == "ada" || s == "ADA") return Algorithm::ADA;
  throw Error(Errc::InvalidParams, "unknown algorithm '" + s + "' (expected da or ada)");
}

// {"n_values":[...], "c_values":[...], "reps":R, "base_seed":S,
//  "algorithms":["da","ada"], "record_timing":false}
inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  SweepSpec s;
  try {
    s.n_values = j.at("n_values").get<std::vector<int>>();
    s.c_values = j.at("c_values").get<std::vector<double>>();
    s.reps = j.at("reps").get<int>();
    s.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("algorithms")) {
      s.algorithms.clear();
      for (const auto& a : j.at("algorithms")) s.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (j.contains("record_timing")) s.record_timing = j.at("record_timing").get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, std::string("sweep spec: ") + e.what());
  }
  validate(s);
  return s;
}

inline nlohmann::json sweep_spec_to_json(const SweepSpec& s) {
  std::vector<std::string> algos;
  for (auto a : s.algorithms) algos.emplace_back(to_string(a));
  return {{"n_values", s.n_values}, {"c_values", s.c_values},       {"reps", s.reps},
          {"base_seed", s.base_seed}, {"algorithms", algos}, {"record_timing", s.record_timing}};
}

inline constexpr const char* kVersion = "matchkit 1.0.0";

inline nlohmann::json sweep_metadata(const SweepSpec& s) {
  return {{"spec", sweep_spec_to_json(s)},
          {"generator", rng::kGeneratorId},
          {"seed_derivation", "splitmix64 chain over (base_seed, n_index, c_index, rep)"},
          {"version", kVersion}};
}

}  // namespace matchkit::io
