#pragma once

#include "regapprox/exact.hpp"

namespace regapprox {

/// RTN superset approximation of every self component with histories of
/// fewer than `depth` items; depth 1 is the unparameterized network.
/// Throws Error for depth < 1.
ComponentStrategy rtn_strategy(int depth);
CompactAutomaton rtn_compile(const Grammar& g, int depth, const BuildOptions& options = {});

/// The unparameterized network built directly, without history bookkeeping.
ComponentStrategy rtn_plain_strategy();
CompactAutomaton rtn_plain_compile(const Grammar& g, const BuildOptions& options = {});

/// The network restricted by a per-rule tracker of the last visited position.
ComponentStrategy rtn_refined_strategy();
CompactAutomaton rtn_refined_compile(const Grammar& g, const BuildOptions& options = {});

/// Whether a visit to position `dot` of a rule with `length` symbols may
/// follow a last visit at `previous` (nullopt: the rule was not visited yet).
bool rtn_visit_allowed(std::optional<std::uint32_t> previous, std::uint32_t dot,
                       std::uint32_t length);

/// One state of the history automaton, exposed for inspection.
struct RtnState {
  enum class Kind { enter, exit, item };
  Kind kind;
  SymbolId nonterminal; // enter/exit
  Item item;            // item
  std::vector<Item> history; // newest first

  friend auto operator<=>(const RtnState&, const RtnState&) = default;
};

/// Builds the history automaton for one entry into `task.builder` and
/// returns the states it created, in creation order.
std::vector<RtnState> build_rtn_component(ComponentTask& task, int depth);

} // namespace regapprox
