#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mfl/mfl.h"

namespace {

mfl_program* parse_ok(const std::string& src) {
  mfl_program* p = nullptr;
  REQUIRE(mfl_parse(src.data(), src.size(), &p) == MFL_OK);
  REQUIRE(p);
  return p;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  mfl_string_free(s);
  return out;
}

const char* kFib =
    "val mfib = mfun mfib (n' : !int) : int is\n"
    "  let !n = n' in\n"
    "  return if n < 2 then n else mfib !(n - 1) + mfib !(n - 2)\n"
    "end\n"
    "main mfib !10\n";

}  // namespace

TEST_CASE("parse, check, print") {
  mfl_program* p = parse_ok(kFib);
  char* ty = nullptr;
  CHECK(mfl_check(p, &ty) == MFL_OK);
  CHECK(take(ty) == "int");
  CHECK(std::string(mfl_last_error()).empty());
  char* text = nullptr;
  REQUIRE(mfl_print(p, &text) == MFL_OK);
  std::string printed = take(text);
  mfl_program* q = parse_ok(printed);
  char* again = nullptr;
  REQUIRE(mfl_print(q, &again) == MFL_OK);
  CHECK(take(again) == printed);
  mfl_program_free(q);
  mfl_program_free(p);
}

TEST_CASE("errors") {
  mfl_program* p = nullptr;
  const std::string bad = "main\n  1 +";
  CHECK(mfl_parse(bad.data(), bad.size(), &p) == MFL_ERR_SYNTAX);
  CHECK(p == nullptr);
  CHECK(std::string(mfl_last_error()).rfind("2:5: syntax error: ", 0) == 0);

  p = parse_ok("main unbox 3");
  CHECK(mfl_check(p, nullptr) == MFL_ERR_TYPE);
  CHECK(std::string(mfl_last_error()).find("type error: Mismatch") != std::string::npos);
  mfl_run_options o;
  mfl_run_options_init(&o);
  mfl_result* r = nullptr;
  CHECK(mfl_run(p, &o, &r) == MFL_ERR_TYPE);
  CHECK(r == nullptr);
  mfl_program_free(p);

  p = parse_ok("main 1 div 0");
  CHECK(mfl_run(p, &o, &r) == MFL_ERR_RUNTIME);
  CHECK(std::string(mfl_last_error()).find("DivisionByZero") != std::string::npos);
  mfl_program_free(p);

  CHECK(mfl_parse(nullptr, 0, &p) == MFL_ERR_ARGUMENT);
  CHECK(mfl_check(nullptr, nullptr) == MFL_ERR_ARGUMENT);
  CHECK(std::strcmp(mfl_status_string(MFL_MISMATCH), "mismatch") == 0);
}

TEST_CASE("run under both semantics") {
  mfl_program* p = parse_ok(kFib);
  mfl_run_options o;
  mfl_run_options_init(&o);
  o.seed = 7;
  o.trace = 1;
  mfl_result* r = nullptr;
  REQUIRE(mfl_run(p, &o, &r) == MFL_OK);
  CHECK(std::string(mfl_result_value(r)) == "55");
  auto stats = nlohmann::json::parse(mfl_result_stats_json(r));
  CHECK(stats["memo_misses"] == 11);
  CHECK(stats["memo_hits"] == 8);
  REQUIRE(mfl_result_trace_json(r));
  auto trace = nlohmann::json::parse(mfl_result_trace_json(r));
  CHECK(trace["events"].size() == 19);
  const std::string first_stats = mfl_result_stats_json(r);
  mfl_result_free(r);

  REQUIRE(mfl_run(p, &o, &r) == MFL_OK);
  CHECK(first_stats == mfl_result_stats_json(r));
  mfl_result_free(r);

  o.semantics = MFL_PURE;
  REQUIRE(mfl_run(p, &o, &r) == MFL_OK);
  CHECK(std::string(mfl_result_value(r)) == "55");
  CHECK(mfl_result_trace_json(r) == nullptr);
  mfl_result_free(r);

  o.semantics = MFL_MEMO;
  o.max_steps = 10;
  CHECK(mfl_run(p, &o, &r) == MFL_ERR_LIMIT);
  mfl_program_free(p);
}

TEST_CASE("diff") {
  for (std::size_t i = 0; i < mfl_corpus_count(); ++i) {
    CAPTURE(mfl_corpus_name(i));
    const char* src = mfl_corpus_source(i);
    mfl_program* p = parse_ok(src);
    mfl_run_options o;
    mfl_run_options_init(&o);
    char* rep = nullptr;
    CHECK(mfl_diff(p, &o, &rep) == MFL_OK);
    auto j = nlohmann::json::parse(take(rep));
    CHECK(j["verdict"] == "OK");
    CHECK(j["memo_value"] == mfl_corpus_expected(i));
    mfl_program_free(p);
  }
  CHECK(mfl_corpus_name(mfl_corpus_count()) == nullptr);
}

TEST_CASE("fuzz") {
  mfl_fuzz_options o;
  mfl_fuzz_options_init(&o);
  o.count = 50;
  o.seed = 3;
  char* summary = nullptr;
  REQUIRE(mfl_fuzz(&o, &summary) == MFL_OK);
  auto j = nlohmann::json::parse(take(summary));
  CHECK(j["mismatches"] == 0);
  CHECK(j["ok"].get<int>() >= 50);

  o.fault = MFL_FAULT_WRONG_BRANCH;
  o.count = 200;
  o.seed = 5;
  CHECK(mfl_fuzz(&o, &summary) == MFL_MISMATCH);
  CHECK(nlohmann::json::parse(take(summary))["mismatches"].get<int>() >= 1);
}

TEST_CASE("benchmarks") {
  const std::size_t sizes[] = {8, 16};
  char* json = nullptr;
  REQUIRE(mfl_bench_quicksort(sizes, 2, 2, 1, 1, &json) == MFL_OK);
  auto j = nlohmann::json::parse(take(json));
  CHECK(j["rows"].size() == 2);
  const std::int64_t fibs[] = {6, 8};
  REQUIRE(mfl_bench_overhead(fibs, 2, 1, &json) == MFL_OK);
  CHECK(nlohmann::json::parse(take(json))["benchmark"] == "overhead");
  CHECK(mfl_bench_overhead(fibs, 2, 1, nullptr) == MFL_ERR_ARGUMENT);
}
