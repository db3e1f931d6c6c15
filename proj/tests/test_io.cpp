#include <gtest/gtest.h>

#include <sstream>

#include "support.hpp"

using namespace matchkit;
using namespace testing_support;

namespace {

Error parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    io::read_instance(in);
  } catch (const Error& e) {
    return e;
  }
  return Error(Errc::Precondition, "no error");
}

}  // namespace

TEST(Read, FixtureWithMetadata) {
  std::istringstream in("# source: hand written\n# n: 2\n\n2\n1 2\n2 1\n\n1 2\n2 1\n# trailing comment\n");
  const auto f = io::read_instance(in);
  EXPECT_EQ(f.instance.size(), 2);
  ASSERT_EQ(f.metadata.size(), 2u);
  EXPECT_EQ(f.metadata[0].first, "source");
  EXPECT_EQ(f.metadata[0].second, "hand written");
  EXPECT_EQ(f.instance.man_prefs(1)[0], 1);
}

TEST(Read, RoundTrip) {
  const auto inst = generate({8, 0.4, 5});
  const auto text = io::to_instance_text(inst, io::generator_metadata(8, 0.4, 5));
  std::istringstream in(text);
  const auto back = io::read_instance(in);
  EXPECT_EQ(back.instance, inst);
  EXPECT_EQ(back.metadata, io::generator_metadata(8, 0.4, 5));
  EXPECT_EQ(io::to_instance_text(back.instance, back.metadata), text);
}

TEST(Read, ErrorsCarryLineNumbers) {
  auto e = parse_error("2\n1 2\n2 x\n\n1 2\n2 1\n");
  EXPECT_EQ(e.code(), Errc::Parse);
  EXPECT_TRUE(std::string(e.what()).starts_with("line 3:")) << e.what();

  e = parse_error("2\n1 2\n2 1\n1 2\n2 1\n");
  EXPECT_EQ(e.code(), Errc::Parse);
  EXPECT_TRUE(std::string(e.what()).starts_with("line 4:")) << e.what();

  e = parse_error("2\n1 2\n2 1\n\n1 2\n");
  EXPECT_EQ(e.code(), Errc::Parse);

  e = parse_error("# only comments\n");
  EXPECT_EQ(e.code(), Errc::Parse);

  e = parse_error("2\n1 2\n2 1\n\n1 2\n1 1\n");
  EXPECT_EQ(e.code(), Errc::RowNotPermutation);
  EXPECT_TRUE(std::string(e.what()).starts_with("line 6:")) << e.what();

  e = parse_error("2\n1 2 3\n2 1\n\n1 2\n2 1\n");
  EXPECT_EQ(e.code(), Errc::SizeMismatch);
  EXPECT_TRUE(std::string(e.what()).starts_with("line 2:")) << e.what();

  e = parse_error("1\n1\n\n1\n");
  EXPECT_EQ(e.code(), Errc::Parse);

  e = parse_error("2\n1 2\n2 1\n\n1 2\n2 1\n3 1\n");
  EXPECT_EQ(e.code(), Errc::Parse);
}

TEST(Trace, JsonLinesShape) {
  const auto t = run_ada(example1());
  std::ostringstream os;
  io::write_trace_jsonl(os, t);
  std::istringstream in(os.str());
  std::vector<nlohmann::json> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(nlohmann::json::parse(l));
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0]["type"], "round");
  EXPECT_EQ(lines[0]["round"], 1);
  EXPECT_EQ(lines[0]["proposals"].size(), 5u);
  EXPECT_EQ(lines[0]["rejections"].size(), 10u);
  EXPECT_EQ(lines[0]["idle"], false);
  const auto& s = lines[2];
  EXPECT_EQ(s["type"], "summary");
  EXPECT_EQ(s["algorithm"], "ada");
  EXPECT_EQ(s["total_rounds"], 2);
  EXPECT_EQ(s["total_proposals"], 7);
  EXPECT_EQ(s["final_pair_round"], (std::vector<int>{1, 2, 2, 1, 1}));
  EXPECT_EQ(s["final_matching"][1], (std::vector<int>{2, 2}));

  int preemptive = 0;
  for (const auto& r : lines[0]["rejections"]) preemptive += r["kind"] == "preemptive";
  EXPECT_EQ(preemptive, 8);
}

TEST(SweepSpecJson, RoundTripAndErrors) {
  SweepSpec s;
  s.n_values = {4, 16};
  s.c_values = {0.0, 0.9};
  s.reps = 3;
  s.base_seed = 99;
  s.algorithms = {Algorithm::ADA};
  const auto back = io::sweep_spec_from_json(io::sweep_spec_to_json(s));
  EXPECT_EQ(back.n_values, s.n_values);
  EXPECT_EQ(back.c_values, s.c_values);
  EXPECT_EQ(back.reps, 3);
  EXPECT_EQ(back.base_seed, 99u);
  EXPECT_EQ(back.algorithms, s.algorithms);

  EXPECT_THROW(io::sweep_spec_from_json(nlohmann::json{{"n_values", {4}}}), Error);
  EXPECT_THROW(io::sweep_spec_from_json(
                   nlohmann::json{{"n_values", {4}}, {"c_values", {0.0}}, {"reps", 1}, {"base_seed", 1},
                                  {"algorithms", {"gs"}}}),
               Error);
  EXPECT_EQ(io::parse_algorithm("ada"), Algorithm::ADA);
}
