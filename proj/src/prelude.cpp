#include "mfl/prelude.hpp"

#include <map>
#include <stdexcept>
#include <utility>

#include "mfl/parser.hpp"

namespace mfl {
namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& corpus_sources();
}

namespace {

// Expected results, computed by hand from the program texts.
const std::map<std::string_view, std::string_view> kExpected = {
    {"fib", "55"},
    {"partial", "(22, (22, (22, 120)))"},
    {"knapsack", "11"},
    {"hcons", "([1, 2, 3], [1, 2, 3])"},
    {"quicksort", "[1, 2, 3]"},
};

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> out;
    for (const auto& [name, text] : detail::corpus_sources()) {
      auto it = kExpected.find(name);
      out.push_back({std::string(name), std::string(text),
                     it == kExpected.end() ? std::string() : std::string(it->second)});
    }
    return out;
  }();
  return entries;
}

const CorpusEntry& corpus_entry(std::string_view name) {
  for (const auto& e : corpus())
    if (e.name == name) return e;
  throw std::out_of_range("no corpus program named '" + std::string(name) + "'");
}

Program corpus_program(std::string_view name) { return parse(corpus_entry(name).source); }

}  // namespace mfl
