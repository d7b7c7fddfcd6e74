#pragma once

#include "regapprox/fsa.hpp"
#include "regapprox/grammar.hpp"

#include <functional>

namespace regapprox {

/// Everything an approximation method needs to build the automaton for one
/// entry nonterminal of a self-embedding component.
struct ComponentTask {
  const ComponentView& component;
  SymbolId entry;
  NfaBuilder& builder;
  StateId from; // the automaton for `entry` runs from here ...
  StateId to;   // ... to here
  /// Label for a symbol outside the component: a terminal, or a reference to
  /// the (already emitted) subautomaton of a lower nonterminal.
  std::function<Label(SymbolId)> atom;
};

using ComponentStrategy = std::function<void(ComponentTask&)>;

struct BuildOptions {
  std::size_t state_cap = kDefaultStateCap;
};

/// Compiles a grammar without self-embedding exactly. Each nonterminal that
/// is reached becomes one named subautomaton; subautomata come out in
/// postorder with the start symbol last. Throws SelfEmbeddingError on a self
/// component.
CompactAutomaton make_fa(const Grammar& g, const RecursionAnalysis& analysis,
                         const BuildOptions& options = {});

/// As make_fa, but self components are handed to `strategy`.
CompactAutomaton make_fa(const Grammar& g, const RecursionAnalysis& analysis,
                         const ComponentStrategy& strategy, const BuildOptions& options = {});

} // namespace regapprox
