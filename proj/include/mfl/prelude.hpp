#pragma once

// The shipped corpus, compiled into the library.

#include <string>
#include <string_view>
#include <vector>

#include "mfl/ast.hpp"

namespace mfl {

struct CorpusEntry {
  std::string name;      // file name without extension
  std::string source;
  std::string expected;  // print_value of main under either semantics
};

const std::vector<CorpusEntry>& corpus();

/// Throws std::out_of_range for an unknown name.
const CorpusEntry& corpus_entry(std::string_view name);

/// Parsed corpus program.
Program corpus_program(std::string_view name);

}  // namespace mfl
