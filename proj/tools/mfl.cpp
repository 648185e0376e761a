// Command-line driver. Talks to the library only through the C interface.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mfl/mfl.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitBreach = 3;
constexpr int kExitUsage = 64;

int exit_code(mfl_status s) {
  switch (s) {
    case MFL_OK: return kExitOk;
    case MFL_MISMATCH: return kExitMismatch;
    case MFL_ERR_BREACH: return kExitBreach;
    case MFL_ERR_ARGUMENT: return kExitUsage;
    default: return kExitError;
  }
}

int report(const std::string& where, mfl_status s) {
  std::cerr << where << ": " << mfl_last_error() << "\n";
  return exit_code(s);
}

struct Owned {
  char* p = nullptr;
  ~Owned() { mfl_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct Program {
  mfl_program* p = nullptr;
  ~Program() { mfl_program_free(p); }
};

struct Result {
  mfl_result* r = nullptr;
  ~Result() { mfl_result_free(r); }
};

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
  return static_cast<bool>(out);
}

// Parses and typechecks `path`; on failure prints the diagnostic and sets `code`.
bool load(const std::string& path, Program& prog, int& code) {
  std::string src;
  if (!read_file(path, src)) {
    std::cerr << path << ": io error: cannot read file\n";
    code = kExitError;
    return false;
  }
  mfl_status s = mfl_parse(src.data(), src.size(), &prog.p);
  if (s == MFL_OK) s = mfl_check(prog.p, nullptr);
  if (s != MFL_OK) {
    code = report(path, s);
    return false;
  }
  return true;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  std::uint64_t seed;
  if (flag) {
    seed = *flag;
  } else if (const char* env = std::getenv("MFL_SEED"); env && *env) {
    seed = std::stoull(env, nullptr, 0);
  } else {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::cerr << "seed: " << seed << "\n";
  return seed;
}

const std::map<std::string, mfl_fault> kFaults = {
    {"none", MFL_FAULT_NONE},
    {"skip-insert", MFL_FAULT_SKIP_INSERT},
    {"wrong-branch", MFL_FAULT_WRONG_BRANCH},
};

const std::map<std::string, mfl_semantics> kSemantics = {{"memo", MFL_MEMO}, {"pure", MFL_PURE}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MFL: selective memoization toolchain"};
  app.require_subcommand(1);

  std::string file;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_steps = 0;
  std::uint64_t max_depth = 1'000'000;
  bool cold = false;
  bool checked = false;
  std::string out_path;

  auto* check = app.add_subcommand("check", "Parse and typecheck a program");
  check->add_option("file", file, "Source file")->required();

  auto* run = app.add_subcommand("run", "Evaluate a program and print the value of main");
  mfl_semantics semantics = MFL_MEMO;
  std::string stats_path;
  run->add_option("file", file, "Source file")->required();
  run->add_option("--semantics", semantics, "memo or pure")
      ->transform(CLI::CheckedTransformer(kSemantics, CLI::ignore_case));
  run->add_flag("--cold", cold, "Pay for every lookup but never reuse a result");
  run->add_flag("--checked", checked, "Assert evaluator invariants at every return");
  run->add_option("--seed", seed, "Memo-table hash seed");
  run->add_option("--stats", stats_path, "Write evaluation statistics as JSON");
  run->add_option("--max-steps", max_steps, "Step limit, 0 for none");
  run->add_option("--max-depth", max_depth, "Recursion depth limit");

  auto* diff = app.add_subcommand("diff", "Compare the memoizing and pure semantics");
  diff->add_option("file", file, "Source file")->required();
  diff->add_flag("--cold", cold, "Run the memoizing side in cold mode");
  diff->add_option("--seed", seed, "Memo-table hash seed");
  diff->add_option("--max-steps", max_steps, "Step limit, 0 for none");
  diff->add_option("--max-depth", max_depth, "Recursion depth limit");
  diff->add_option("--out", out_path, "Write the report as JSON");

  auto* fuzz = app.add_subcommand("fuzz", "Differential testing on random programs");
  std::uint64_t count = 500;
  std::string out_dir = "fuzz-failures";
  mfl_fault fault = MFL_FAULT_NONE;
  fuzz->add_option("--count", count, "Programs that must reach a verdict");
  fuzz->add_option("--seed", seed, "Generator seed");
  fuzz->add_option("--out-dir", out_dir, "Directory for counterexamples");
  fuzz->add_option("--fault", fault, "Inject an evaluator fault: none, skip-insert, wrong-branch")
      ->transform(CLI::CheckedTransformer(kFaults, CLI::ignore_case));
  fuzz->add_flag("--cold", cold, "Run the memoizing side in cold mode");
  std::uint64_t fuzz_max_steps = 200'000;
  fuzz->add_option("--max-steps", fuzz_max_steps, "Per-program step limit");

  auto* bench = app.add_subcommand("bench", "Cost benchmarks");
  bench->require_subcommand(1);
  std::vector<std::int64_t> sizes;
  std::size_t trials = 20;
  unsigned jobs = 1;
  auto* qs = bench->add_subcommand("quicksort", "Sort, insert one key, sort again");
  qs->add_option("--sizes", sizes, "List lengths")->delimiter(',')->default_str("128,256,512,1024");
  qs->add_option("--trials", trials, "Trials per size");
  qs->add_option("--seed", seed, "Benchmark seed");
  qs->add_option("--out", out_path, "Write results as JSON");
  qs->add_option("--jobs", jobs, "Worker threads");
  auto* ov = bench->add_subcommand("overhead", "Cold memoization cost against pure evaluation");
  ov->add_option("--sizes", sizes, "fib arguments")->delimiter(',')->default_str("10,14,18,22");
  ov->add_option("--seed", seed, "Memo-table hash seed");
  ov->add_option("--out", out_path, "Write results as JSON");

  auto* trace = app.add_subcommand("trace", "Evaluate with memoization and dump lookups and tables");
  trace->add_option("file", file, "Source file")->required();
  trace->add_option("--seed", seed, "Memo-table hash seed");
  trace->add_option("--out", out_path, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    if (e.get_exit_code() != 0) std::cerr << app.help();
    return kExitUsage;
  }

  auto emit = [&](const std::string& text) {
    if (out_path.empty()) {
      std::cout << text << "\n";
      return true;
    }
    if (!write_file(out_path, text)) {
      std::cerr << out_path << ": io error: cannot write file\n";
      return false;
    }
    return true;
  };

  int code = kExitOk;
  Program prog;

  if (check->parsed()) {
    if (!load(file, prog, code)) return code;
    Owned ty;
    mfl_check(prog.p, &ty.p);
    std::cout << "main : " << ty.str() << "\n";
    return kExitOk;
  }

  if (run->parsed() || trace->parsed()) {
    if (!load(file, prog, code)) return code;
    mfl_run_options o;
    mfl_run_options_init(&o);
    o.checked = checked ? 1 : 0;
    if (run->parsed()) {
      o.semantics = semantics;
      o.cold = cold ? 1 : 0;
      o.max_steps = max_steps;
      o.max_depth = max_depth;
    } else {
      o.trace = 1;
    }
    if (o.semantics == MFL_MEMO) o.seed = resolve_seed(seed);
    Result r;
    mfl_status s = mfl_run(prog.p, &o, &r.r);
    if (s != MFL_OK) return report(file, s);
    if (trace->parsed()) return emit(mfl_result_trace_json(r.r)) ? kExitOk : kExitError;
    std::cout << mfl_result_value(r.r) << "\n";
    if (!stats_path.empty() && !write_file(stats_path, mfl_result_stats_json(r.r))) {
      std::cerr << stats_path << ": io error: cannot write file\n";
      return kExitError;
    }
    return kExitOk;
  }

  if (diff->parsed()) {
    if (!load(file, prog, code)) return code;
    mfl_run_options o;
    mfl_run_options_init(&o);
    o.cold = cold ? 1 : 0;
    o.seed = resolve_seed(seed);
    o.max_steps = max_steps;
    o.max_depth = max_depth;
    Owned rep;
    mfl_status s = mfl_diff(prog.p, &o, &rep.p);
    if (rep.p && !emit(rep.str())) return kExitError;
    if (s != MFL_OK) return report(file, s);
    return kExitOk;
  }

  if (fuzz->parsed()) {
    mfl_fuzz_options o;
    mfl_fuzz_options_init(&o);
    o.count = count;
    o.seed = resolve_seed(seed);
    o.fault = fault;
    o.cold = cold ? 1 : 0;
    o.max_steps = fuzz_max_steps;
    o.out_dir = out_dir.c_str();
    Owned summary;
    mfl_status s = mfl_fuzz(&o, &summary.p);
    if (summary.p) std::cout << summary.str() << "\n";
    if (s != MFL_OK) return report("fuzz", s);
    return kExitOk;
  }

  if (qs->parsed()) {
    if (sizes.empty()) sizes = {128, 256, 512, 1024};
    std::vector<std::size_t> sz;
    for (auto n : sizes) {
      if (n < 0) {
        std::cerr << "bench: sizes must be non-negative\n";
        return kExitUsage;
      }
      sz.push_back(static_cast<std::size_t>(n));
    }
    Owned json;
    mfl_status s = mfl_bench_quicksort(sz.data(), sz.size(), trials, resolve_seed(seed), jobs, &json.p);
    if (s != MFL_OK) return report("bench", s);
    return emit(json.str()) ? kExitOk : kExitError;
  }

  if (ov->parsed()) {
    if (sizes.empty()) sizes = {10, 14, 18, 22};
    Owned json;
    mfl_status s = mfl_bench_overhead(sizes.data(), sizes.size(), resolve_seed(seed), &json.p);
    if (s != MFL_OK) return report("bench", s);
    return emit(json.str()) ? kExitOk : kExitError;
  }

  std::cerr << app.help();
  return kExitUsage;
}
