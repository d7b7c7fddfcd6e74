#pragma once

#include "regapprox/exact.hpp"

#include <set>

namespace regapprox {

using SymbolString = std::vector<SymbolId>;

/// Substring, prefix and suffix constraints of order N for the strings an
/// entry nonterminal derives inside its component; symbols outside the
/// component are atomic.
struct NgramTables {
  int order = 1;
  std::set<SymbolId> alphabet;
  std::set<SymbolString> interior; // length N
  std::set<SymbolString> prefixes; // length < N, including the empty one
  std::set<SymbolString> suffixes; // length < N, including the empty one
};

/// Throws Error unless 1 <= order <= 3.
NgramTables ngram_tables(const ComponentView& component, SymbolId entry, int order);

ComponentStrategy ngram_strategy(int order);
CompactAutomaton ngram_compile(const Grammar& g, int order, const BuildOptions& options = {});

} // namespace regapprox
