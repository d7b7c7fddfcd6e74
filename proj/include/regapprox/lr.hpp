#pragma once

#include "regapprox/exact.hpp"

#include <map>

namespace regapprox {

/// LR(0) automaton of one component, symbols outside the component acting as
/// terminals. rules.back() is the augmented rule S' -> entry, whose lhs is
/// kAugmentedLhs.
struct LrAutomaton {
  static constexpr SymbolId kAugmentedLhs = static_cast<SymbolId>(-1);

  std::vector<Rule> rules;
  /// Closed item sets, each sorted; Item::rule indexes `rules`.
  std::vector<std::vector<Item>> states;
  std::vector<std::map<SymbolId, StateId>> transitions;
  std::vector<bool> nonterminal; // per symbol id of the grammar
  StateId initial = 0;

  std::size_t augmented_rule() const { return rules.size() - 1; }
  std::optional<StateId> go(StateId from, SymbolId x) const;
  bool is_nonterminal(SymbolId x) const { return x < nonterminal.size() && nonterminal[x]; }
};

LrAutomaton build_lr0(const ComponentView& component, SymbolId entry,
                      std::size_t state_cap = kDefaultStateCap);

/// Stack classes are the top `depth` LR states of reachable stacks; depth 1
/// gives one state per stack symbol. Throws Error for depth < 1.
ComponentStrategy lr_strategy(int depth);
CompactAutomaton lr_compile(const Grammar& g, int depth, const BuildOptions& options = {});

/// Stacks with a repeated LR state are identified with the stack obtained by
/// cutting from the older occurrence upwards.
ComponentStrategy pw_strategy();
CompactAutomaton pw_compile(const Grammar& g, const BuildOptions& options = {});

/// Push used by pw_strategy: appends `state`, or truncates just above an
/// existing occurrence of it.
std::vector<StateId> pw_push(std::vector<StateId> stack, StateId state);

} // namespace regapprox
