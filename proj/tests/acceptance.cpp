// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>

#include "mfl/diff.hpp"
#include "mfl/gen.hpp"
#include "mfl/instrument.hpp"
#include "mfl/prelude.hpp"
#include "support.hpp"

using namespace mfl;
using mfl::testing::run_memo;
using mfl::testing::run_pure;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, x);
  return buf;
}

int failures = 0;

void criterion(int n, const std::string& title, const std::function<Outcome(std::string&)>& body) {
  std::string info;
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    o = body(info);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  if (!o.pass) ++failures;
  std::printf("%s criterion %d (%s): %s [%.1f s]%s%s\n", o.pass ? "PASS" : "FAIL", n, title.c_str(),
              info.c_str(), seconds_since(t0), o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
}

bool prefix_free(const Store& st) {
  for (std::uint64_t l = 1; l <= st.size(); ++l) {
    auto es = st.table(Location{l}).entries();
    for (std::size_t i = 0; i < es.size(); ++i)
      for (std::size_t j = 0; j < es.size(); ++j) {
        if (i == j || es[i].first.size() > es[j].first.size()) continue;
        if (std::equal(es[i].first.begin(), es[i].first.end(), es[j].first.begin(),
                       [](const Event& a, const Event& b) { return encode_event(a) == encode_event(b); }))
          return false;
      }
  }
  return true;
}

}  // namespace

int main() {
  std::printf("seed %llu\n", static_cast<unsigned long long>(kSeed));

  criterion(1, "soundness", [](std::string& info) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    int corpus_ok = 0;
    for (const auto& c : corpus()) {
      DiffOptions d;
      d.seed = kSeed;
      DiffReport r = with_big_stack([&] { return diff_check(parse(c.source), d); });
      o.require(r.verdict == Verdict::Ok, c.name + " " + to_string(r.verdict));
      corpus_ok += r.verdict == Verdict::Ok;
    }
    FuzzOptions f;
    f.count = 500;
    f.seed = kSeed;
    f.checked = true;
    FuzzSummary s = with_big_stack([&] { return fuzz(f); });
    const double secs = seconds_since(t0);
    o.require(corpus_ok == 5, "corpus");
    o.require(s.ok >= 500, "only " + std::to_string(s.ok) + " generated programs ok");
    o.require(s.mismatches == 0 && s.breaches == 0 && s.ill_typed == 0, "mismatch or breach");
    o.require(secs < 120.0, "took " + fmt(secs, 1) + " s");
    info = "corpus " + std::to_string(corpus_ok) + "/5 ok, generated " + std::to_string(s.ok) +
           " ok / " + std::to_string(s.mismatches) + " mismatches / " + std::to_string(s.breaches) +
           " breaches (" + std::to_string(s.skipped) + " skipped), " + fmt(secs, 1) + " s";
    return o;
  });

  criterion(2, "fibonacci reuse", [](std::string& info) {
    Outcome o;
    const Program fib = corpus_program("fib");
    std::uint64_t memo20 = 0, pure20 = 0;
    for (std::int64_t n : {5, 10, 20}) {
      Program p = with_main(fib, mk::apply(mk::var("mfib"), mk::bang(mk::integer(n))));
      auto r = run_memo(p, kSeed);
      auto c = mfl::testing::oracle::fib_counts(n);
      o.require(c.misses == static_cast<std::uint64_t>(n + 1) && c.hits == static_cast<std::uint64_t>(n - 2),
                "call-tree oracle disagrees with n+1/n-2 at n=" + std::to_string(n));
      o.require(r.stats.memo_misses == static_cast<std::uint64_t>(n + 1),
                "n=" + std::to_string(n) + " misses " + std::to_string(r.stats.memo_misses));
      o.require(r.stats.memo_hits == static_cast<std::uint64_t>(n - 2),
                "n=" + std::to_string(n) + " hits " + std::to_string(r.stats.memo_hits));
      o.require(r.printed == std::to_string(mfl::testing::oracle::fib(n)), "wrong value");
      info += "n=" + std::to_string(n) + " misses " + std::to_string(r.stats.memo_misses) + " hits " +
              std::to_string(r.stats.memo_hits) + "; ";
      if (n == 20) {
        memo20 = r.stats.steps;
        pure20 = run_pure(p).stats.steps;
      }
    }
    const double sep = static_cast<double>(pure20) / static_cast<double>(memo20);
    o.require(sep >= 100.0, "pure/memo steps " + fmt(sep, 1));
    info += "pure/memo steps at n=20: " + std::to_string(pure20) + "/" + std::to_string(memo20) + " = " +
            fmt(sep, 1);
    return o;
  });

  criterion(3, "bounded overhead", [](std::string& info) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    auto rows = with_big_stack([] { return fib_overhead({10, 14, 18, 22}, kSeed); });
    const double secs = seconds_since(t0);
    double lo = rows[0].ratio, hi = rows[0].ratio;
    for (const auto& r : rows) {
      lo = std::min(lo, r.ratio);
      hi = std::max(hi, r.ratio);
      info += r.label + " " + fmt(r.ratio) + "; ";
    }
    info += "max/min " + fmt(hi / lo, 4);
    o.require(hi / lo <= 2.0, "max/min " + fmt(hi / lo, 4));
    o.require(secs < 30.0, "took " + fmt(secs, 1) + " s");
    return o;
  });

  criterion(4, "quicksort rerun", [](std::string& info) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    QuicksortBench b = bench_quicksort({128, 256, 512, 1024}, 20, kSeed, jobs);
    const double secs = seconds_since(t0);
    for (std::size_t i = 1; i < b.rows.size(); ++i) {
      const double g = b.rows[i].rerun_steps / b.rows[i - 1].rerun_steps;
      info += "rerun x" + fmt(g, 2) + " (" + std::to_string(b.rows[i - 1].n) + "->" +
              std::to_string(b.rows[i].n) + "); ";
      o.require(g <= 2.6, "rerun growth " + fmt(g, 2) + " at n=" + std::to_string(b.rows[i].n));
    }
    const double fresh = b.rows[3].fresh_steps / b.rows[0].fresh_steps;
    const double hits = b.rows[3].rerun_hits / b.rows[0].rerun_hits;
    info += "fresh 1024/128 " + fmt(fresh, 2) + "; hits 1024/128 " + fmt(hits, 2) + " (" +
            fmt(b.rows[0].rerun_hits, 2) + " -> " + fmt(b.rows[3].rerun_hits, 2) + ")";
    o.require(fresh >= 8.0, "fresh ratio " + fmt(fresh, 2));
    o.require(hits <= 4.0, "hit ratio " + fmt(hits, 2));
    o.require(secs < 180.0, "took " + fmt(secs, 1) + " s");
    return o;
  });

  criterion(5, "partial dependence", [](std::string& info) {
    Outcome o;
    EvalConfig cfg;
    cfg.trace = true;
    auto r = run_memo(corpus_program("partial"), kSeed, cfg);
    // fy, fz and mf get locations 1, 2 and 3 in declaration order
    std::string mf_seq, full_seq;
    for (const auto& e : r.trace) {
      const char* h = e.hit ? "hit" : "miss";
      if (raw(e.loc) == 3) mf_seq += std::string(mf_seq.empty() ? "" : ",") + h;
      full_seq += std::string(full_seq.empty() ? "" : ",") + std::to_string(raw(e.loc)) + ":" + h;
    }
    info = "mf " + mf_seq + "; all " + full_seq;
    o.require(mf_seq == "miss,hit,hit,miss", "mf sequence");
    o.require(full_seq == "3:miss,1:miss,3:hit,3:hit,3:miss,2:miss", "full sequence");
    o.require(r.printed == "(22, (22, (22, 120)))", "value " + r.printed);
    return o;
  });

  criterion(6, "invariants", [](std::string& info) {
    Outcome o;
    // duplicate-branch inserts across the generated corpus, checked mode
    FuzzOptions f;
    f.count = 500;
    f.seed = kSeed;
    f.checked = true;
    FuzzSummary s = with_big_stack([&] { return fuzz(f); });
    o.require(s.breaches == 0, std::to_string(s.breaches) + " breaches");
    // monotonicity and branch discipline on the corpus
    int mono_ok = 0;
    for (const auto& c : corpus()) {
      Program p = parse(c.source);
      Store st(kSeed);
      EvalConfig cfg;
      cfg.checked = true;
      MemoEvaluator ev(st, cfg);
      bool ok = true;
      with_big_stack([&] {
        Subst env = ev.run_decls(p);
        TermPtr main = substitute(p.main, env);
        for (int round = 0; round < 2; ++round) {
          auto before = mfl::testing::snapshot(st);
          const std::size_t dom = st.size();
          ev.eval_term(main);
          auto after = mfl::testing::snapshot(st);
          ok = ok && st.size() >= dom;
          for (const auto& [k, v] : before) {
            auto it = after.find(k);
            ok = ok && it != after.end() && it->second == v;
          }
        }
      });
      ok = ok && prefix_free(st);
      o.require(ok, c.name + " store or branch property");
      mono_ok += ok;
    }
    // fault mutants
    FuzzOptions skip = f;
    skip.count = 200;
    skip.fault = Fault::SkipInsert;
    FuzzSummary sk = with_big_stack([&] { return fuzz(skip); });
    FuzzOptions wrong = skip;
    wrong.fault = Fault::WrongBranchInsert;
    FuzzSummary wb = with_big_stack([&] { return fuzz(wrong); });
    o.require(sk.mismatches == 0 && sk.breaches == 0, "skip-insert mutant was not benign");
    o.require(wb.mismatches >= 1, "wrong-branch mutant was not caught");
    info = "checked fuzz " + std::to_string(s.ok) + " ok / " + std::to_string(s.breaches) +
           " breaches; corpus store/branch " + std::to_string(mono_ok) + "/5; skip-insert " +
           std::to_string(sk.mismatches) + " mismatches; wrong-branch " + std::to_string(wb.mismatches) +
           " mismatches";
    return o;
  });

  criterion(7, "typechecker gate", [](std::string& info) {
    Outcome o;
    int rejected = 0;
    for (const auto& c : mfl::testing::negative_cases()) {
      auto k = mfl::testing::rejection(c);
      const bool ok = k && *k == c.kind;
      o.require(ok, std::string(c.name) + (k ? std::string(" gave ") + to_string(*k) : " accepted"));
      rejected += ok;
    }
    int accepted = 0;
    for (const auto& c : corpus()) {
      try {
        check_program(parse(c.source));
        ++accepted;
      } catch (const std::exception& e) {
        o.require(false, c.name + ": " + e.what());
      }
    }
    o.require(mfl::testing::negative_cases().size() == 20, "suite size");
    info = std::to_string(rejected) + "/" + std::to_string(mfl::testing::negative_cases().size()) +
           " negative cases rejected with the expected kind; corpus " + std::to_string(accepted) +
           "/5 accepted";
    return o;
  });

  std::printf("%s\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failures ? 1 : 0;
}
