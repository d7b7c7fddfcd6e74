#pragma once

#include "regapprox/exact.hpp"

namespace regapprox {

/// Blocks every subderivation B =>* aBb with a, b nonempty by tagging
/// component nonterminals with what the spine above them generated. The
/// result is reduced and not self-embedding. Throws StateCapExceeded if more
/// than `nonterminal_cap` tagged nonterminals would be created.
Grammar transform_block(const Grammar& g, std::size_t nonterminal_cap = kDefaultStateCap);

/// Allows at most `depth` unconstrained component rules along a spine, each
/// possibly preceded by pure left recursion followed by pure right recursion
/// or the other way round. Throws Error for depth < 0.
Grammar transform_sub_simple(const Grammar& g, int depth,
                             std::size_t nonterminal_cap = kDefaultStateCap);

CompactAutomaton sub_block_compile(const Grammar& g, const BuildOptions& options = {});
CompactAutomaton sub_simple_compile(const Grammar& g, int depth, const BuildOptions& options = {});

/// Left-corner recognizer per component entry with stacks of at most
/// `depth` cells; the goal cell at the bottom counts. Throws Error for
/// depth < 1.
ComponentStrategy lc_strategy(int depth);
CompactAutomaton lc_compile(const Grammar& g, int depth, const BuildOptions& options = {});

} // namespace regapprox
