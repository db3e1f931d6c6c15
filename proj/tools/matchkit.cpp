// matchkit command-line tool. One subcommand per task; see --help.
//
// Exit codes: 0 success, 1 invariant or verification failure, 2 usage,
// parse or I/O error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#ifdef MATCHKIT_CLI11_PACKAGED
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "matchkit/matchkit.hpp"

namespace fs = std::filesystem;
using namespace matchkit;

namespace {

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

io::InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file " + path);
  try {
    return io::read_instance(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

template <class Fn>
void write_file(const fs::path& path, Fn&& fn) {
  auto out = open_out(path);
  fn(out);
  if (!out) throw IoError("write failed: " + path.string());
}

void print_violations(const Violations& v) {
  for (const auto& s : v) std::cerr << "violation: " << s << '\n';
}

void emit_reproducer(const Instance& inst, const std::string& path) {
  const auto text = io::to_instance_text(inst, {{"reproducer", "invariant violation"}});
  if (path.empty()) {
    std::cerr << "--- reproducer ---\n" << text << "--- end reproducer ---\n";
  } else {
    open_out(path) << text;
    std::cerr << "reproducer written to " << path << '\n';
  }
}

std::string summary_line(const RunTrace& t) {
  std::ostringstream os;
  const auto& m = t.metrics;
  os << to_string(t.algorithm) << ' ' << m.total_rounds << ' ' << m.total_proposals << ' ' << m.total_rejections << ' '
     << m.idle_rounds << ' ' << format_matching(t.final_matching);
  return os.str();
}

// ---- gen -------------------------------------------------------------------

struct GenArgs {
  int n = 0;
  double c = 0.0;
  std::uint64_t seed = 0;
  int count = 1;
  std::string out = ".";
};

int cmd_gen(const GenArgs& a) {
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t seed = a.seed + static_cast<std::uint64_t>(i);
    const auto inst = generate({a.n, a.c, seed});
    const auto name = "inst_n" + std::to_string(a.n) + "_c" + matchkit::detail::format_double(a.c) + "_seed" +
                      std::to_string(seed) + ".txt";
    const auto path = fs::path(a.out) / name;
    write_file(path, [&](std::ostream& os) { io::write_instance(os, inst, io::generator_metadata(a.n, a.c, seed)); });
    std::cout << path.string() << '\n';
  }
  return kOk;
}

// ---- run -------------------------------------------------------------------

struct RunArgs {
  std::string algo;
  std::string instance;
  std::string trace;
  std::string curve;
  bool quiet = false;
};

int cmd_run(const RunArgs& a) {
  const auto file = load_instance(a.instance);
  const auto t = run(io::parse_algorithm(a.algo), file.instance, RunOptions{!a.quiet});
  std::cout << summary_line(t) << '\n';
  if (!a.trace.empty()) write_file(a.trace, [&](std::ostream& os) { io::write_trace_jsonl(os, t); });
  if (!a.curve.empty()) write_file(a.curve, [&](std::ostream& os) { write_curve_csv(os, final_pair_curve(t)); });
  return kOk;
}

// ---- compare ---------------------------------------------------------------

int cmd_compare(const std::string& path) {
  const auto file = load_instance(path);
  const auto& inst = file.instance;
  const auto lock = run_lockstep(inst);
  const auto& d = lock.da.metrics;
  const auto& a = lock.ada.metrics;

  auto row = [](const char* name, auto dv, auto av) {
    std::cout << std::left << std::setw(24) << name << std::right << std::setw(12) << dv << std::setw(12) << av << '\n';
  };
  std::cout << std::left << std::setw(24) << "metric" << std::right << std::setw(12) << "da" << std::setw(12) << "ada"
            << '\n';
  row("rounds", d.total_rounds, a.total_rounds);
  row("proposals", d.total_proposals, a.total_proposals);
  row("direct_rejections", d.direct_rejections, a.direct_rejections);
  row("preemptive_rejections", d.preemptive_rejections, a.preemptive_rejections);
  row("total_rejections", d.total_rejections, a.total_rejections);
  row("idle_rounds", d.idle_rounds, a.idle_rounds);
  row("concavity_score", concavity_score(final_pair_curve(lock.da)), concavity_score(final_pair_curve(lock.ada)));

  const auto cr = crossing_report(lock.da, lock.ada);
  std::cout << "crossing: ada ends at round " << cr.ada_final_round << "; da has formed "
            << cr.da_progress_at_ada_final * 100.0 << "% of final pairs by then and ends at round " << cr.da_final_round
            << '\n';
  std::cout << "containment: " << (lock.all_contained ? "OK" : "FAILED") << " (" << lock.rounds.size() << " rounds)\n";
  std::cout << "matching: " << format_matching(lock.da.final_matching) << '\n';

  Violations v = audit_trace(inst, lock.da);
  for (auto& s : audit_trace(inst, lock.ada)) v.push_back(std::move(s));
  for (auto& s : audit_pair(inst, lock.da, lock.ada)) v.push_back(std::move(s));
  if (!lock.all_contained) v.push_back("lockstep containment failed");
  if (!v.empty()) {
    print_violations(v);
    return kViolation;
  }
  std::cout << "invariants: OK\n";
  return kOk;
}

// ---- sweep -----------------------------------------------------------------

struct SweepArgs {
  std::string spec_file;
  std::vector<int> n_values;
  std::vector<double> c_values;
  int reps = 1;
  std::uint64_t seed = 0;
  std::vector<std::string> algos{"da", "ada"};
  std::string out;
  std::string curves;
  int jobs = 1;
  bool timing = false;
};

fs::path sibling(const fs::path& out, const std::string& suffix) {
  auto p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

int cmd_sweep(const SweepArgs& a, bool seed_given) {
  SweepSpec spec;
  if (!a.spec_file.empty()) {
    std::ifstream in(a.spec_file);
    if (!in) throw IoError("cannot open sweep spec " + a.spec_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::Parse, a.spec_file + ": " + e.what());
    }
    spec = io::sweep_spec_from_json(j);
  } else {
    if (!seed_given) throw Error(Errc::InvalidParams, "sweep: --seed is required without --spec");
    spec.n_values = a.n_values;
    spec.c_values = a.c_values;
    spec.reps = a.reps;
    spec.base_seed = a.seed;
    spec.algorithms.clear();
    for (const auto& s : a.algos) spec.algorithms.push_back(io::parse_algorithm(s));
  }
  if (a.timing) spec.record_timing = true;

  std::vector<ExperimentRecord> records;
  try {
    records = collect_sweep(spec, a.jobs);
  } catch (const DominanceViolation& e) {
    std::cerr << "violation: " << e.what() << '\n';
    emit_reproducer(e.instance(), sibling(a.out, ".reproducer.txt").string());
    return kViolation;
  }

  const fs::path out(a.out);
  write_file(out, [&](std::ostream& os) { write_results_csv(os, records); });
  const auto summary = aggregate(records, {GroupKey::N, GroupKey::C, GroupKey::Algorithm});
  write_file(sibling(out, ".summary.csv"), [&](std::ostream& os) { write_summary_csv(os, summary); });
  open_out(sibling(out, ".meta.json")) << io::sweep_metadata(spec).dump(2) << '\n';
  if (!a.curves.empty()) {
    for (const auto& r : records) {
      const auto name = "curve_n" + std::to_string(r.n) + "_c" + matchkit::detail::format_double(r.c) + "_seed" +
                        std::to_string(r.seed) + "_" + to_string(r.algorithm) + ".csv";
      write_file(fs::path(a.curves) / name, [&](std::ostream& os) { write_curve_csv(os, final_pair_curve(r.metrics)); });
    }
  }
  std::cout << records.size() << " records written to " << out.string() << '\n';
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string instance;
  bool exhaustive_n3 = false;
  std::vector<int> sample;
  double c = 0.0;
  std::uint64_t seed = 0;
  std::string reproducer;
};

int report(const Instance& inst, const Violations& v, const std::string& reproducer) {
  print_violations(v);
  emit_reproducer(inst, reproducer);
  return kViolation;
}

int cmd_verify(const VerifyArgs& a, bool seed_given) {
  if (!a.instance.empty()) {
    const auto file = load_instance(a.instance);
    const auto v = oracle::verify_agreement(file.instance);
    if (!v.empty()) return report(file.instance, v, a.reproducer);
    std::cout << "verify: OK\n";
    return kOk;
  }
  if (a.exhaustive_n3) {
    // all (3!)^6 instances: each of the six rows picks one of the six permutations
    std::vector<std::vector<int>> perms;
    std::vector<int> p{0, 1, 2};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::int64_t checked = 0;
    for (int code = 0; code < 46656; ++code) {
      RawInstance raw{3, {}, {}};
      int x = code;
      for (int r = 0; r < 6; ++r, x /= 6) (r < 3 ? raw.men : raw.women).push_back(perms[x % 6]);
      const auto inst = validate_instance(raw);
      const auto v = oracle::verify_agreement(inst);
      if (!v.empty()) return report(inst, v, a.reproducer);
      ++checked;
    }
    std::cout << "verify: " << checked << " instances OK\n";
    return kOk;
  }
  if (a.sample.size() == 2) {
    if (!seed_given) throw Error(Errc::InvalidParams, "verify --sample requires --seed");
    const int n = a.sample[0];
    const int reps = a.sample[1];
    for (int r = 0; r < reps; ++r) {
      const auto inst = generate({n, a.c, a.seed + static_cast<std::uint64_t>(r)});
      const auto v = oracle::verify_agreement(inst);
      if (!v.empty()) return report(inst, v, a.reproducer);
    }
    std::cout << "verify: " << reps << " sampled instances OK\n";
    return kOk;
  }
  throw Error(Errc::InvalidParams, "verify: pass --instance, --exhaustive-n3 or --sample N REPS");
}

// ---- reduce ----------------------------------------------------------------

int cmd_reduce(const std::string& path) {
  const auto file = load_instance(path);
  const auto nf = normal_form(file.instance);
  std::cout << "# normal form\n# iterations: " << nf.iterations << '\n' << file.instance.size() << '\n';
  io::write_lists(std::cout, nf.sets.men);
  std::cout << '\n';
  io::write_lists(std::cout, nf.sets.women);
  std::cout << "\nmu_M: " << format_matching(nf.mu_m) << "\nmu_W: " << format_matching(nf.mu_w) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchkit: deferred acceptance and accelerated deferred acceptance toolkit"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate random instances");
  g->add_option("--n", gen.n, "Market size")->required()->check(CLI::Range(2, 1 << 20));
  g->add_option("--c", gen.c, "Similarity bias in [0, 1]")->required()->check(CLI::Range(0.0, 1.0));
  g->add_option("--seed", gen.seed, "Seed of the first instance")->required();
  g->add_option("--count", gen.count, "Number of instances (seeds seed, seed+1, ...)")->check(CLI::PositiveNumber);
  g->add_option("--out", gen.out, "Output directory");

  RunArgs runa;
  auto* r = app.add_subcommand("run", "Run DA or ADA on an instance file");
  r->add_option("--algo", runa.algo, "da or ada")->required()->check(CLI::IsMember({"da", "ada"}));
  r->add_option("--instance", runa.instance, "Instance file")->required();
  r->add_option("--trace", runa.trace, "Write a JSON-lines trace here");
  r->add_option("--curve", runa.curve, "Write the final-pairs-by-round curve (CSV) here");
  r->add_flag("--quiet", runa.quiet, "Do not record per-round events");

  std::string compare_path;
  auto* cmp = app.add_subcommand("compare", "Run both algorithms in lockstep and check every invariant");
  cmp->add_option("--instance", compare_path, "Instance file")->required();

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Run a benchmark sweep and write CSV results");
  auto* spec_opt = s->add_option("--spec", sw.spec_file, "Sweep spec (JSON)");
  auto* n_opt = s->add_option("--n", sw.n_values, "Market sizes")->delimiter(',');
  s->add_option("--c", sw.c_values, "Bias values")->delimiter(',')->excludes(spec_opt);
  s->add_option("--reps", sw.reps, "Repetitions per cell")->excludes(spec_opt);
  auto* sweep_seed = s->add_option("--seed", sw.seed, "Base seed")->excludes(spec_opt);
  s->add_option("--algos", sw.algos, "Algorithms")->delimiter(',')->excludes(spec_opt);
  n_opt->excludes(spec_opt);
  s->add_option("--out", sw.out, "Results CSV path")->required();
  s->add_option("--curves", sw.curves, "Directory for per-run final-pair curves");
  s->add_option("--jobs", sw.jobs, "Worker threads")->envname("MATCHKIT_JOBS")->check(CLI::PositiveNumber);
  s->add_flag("--timing", sw.timing, "Record wall time (results are then not byte-reproducible)");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "Check engines against the brute-force oracle");
  auto* vi = v->add_option("--instance", ver.instance, "Instance file");
  auto* ve = v->add_flag("--exhaustive-n3", ver.exhaustive_n3, "All 46,656 instances with n = 3");
  auto* vs = v->add_option("--sample", ver.sample, "N REPS: sampled generated instances")->expected(2);
  vi->excludes(ve)->excludes(vs);
  ve->excludes(vs);
  v->add_option("--c", ver.c, "Bias for --sample")->check(CLI::Range(0.0, 1.0));
  auto* verify_seed = v->add_option("--seed", ver.seed, "Seed for --sample");
  v->add_option("--reproducer", ver.reproducer, "Where to write a failing instance");

  std::string reduce_path;
  auto* red = app.add_subcommand("reduce", "Print the normal form and the extremal stable matchings");
  red->add_option("--instance", reduce_path, "Instance file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*r) return cmd_run(runa);
    if (*cmp) return cmd_compare(compare_path);
    if (*s) return cmd_sweep(sw, sweep_seed->count() > 0);
    if (*v) return cmd_verify(ver, verify_seed->count() > 0);
    if (*red) return cmd_reduce(reduce_path);
  } catch (const DominanceViolation& e) {
    std::cerr << "violation: " << e.what() << '\n';
    emit_reproducer(e.instance(), {});
    return kViolation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == Errc::InvariantViolation || e.code() == Errc::EmptiedList ? kViolation : kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
