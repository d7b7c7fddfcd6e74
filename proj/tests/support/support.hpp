#pragma once

// Independent reference implementations used only by the tests.

#include "regapprox/exact.hpp"
#include "regapprox/lr.hpp"
#include "regapprox/oracle.hpp"

#include <random>
#include <set>
#include <string>
#include <vector>

namespace regapprox::testing {

using Language = std::set<Sentence>;

struct NamedGrammar {
  std::string name;
  Grammar grammar;
};

Grammar g(std::string_view text);

Grammar palindromes();   // S -> a S a | b S b | eps
Grammar aca();           // S -> a S a | c
Grammar anbn();          // S -> a S b | eps
Grammar nested_left();   // S -> A a, A -> S B | B b, B -> B c | d
Grammar astar();         // S -> a S | eps
Grammar left_toy();      // E -> E + T | T, T -> x
Grammar mixed();         // palindromes over T, T -> T c | d

std::vector<NamedGrammar> suite();
std::vector<NamedGrammar> suite_without_self_embedding();

Sentence words(std::string_view s);
Language language(const Grammar& g, std::size_t maxlen);
/// Every string over `alphabet` of length <= maxlen.
Language all_strings(const std::vector<std::string>& alphabet, std::size_t maxlen);
std::vector<std::string> terminal_names(const Grammar& g);

/// Strings of length <= maxlen accepted by `d`.
Language accepted(const Dfa& d, std::size_t maxlen);
Dfa dfa_of(const CompactAutomaton& c);

/// Inlines a fresh copy of the referenced part for every subref transition,
/// without any intermediate determinization.
Nfa naive_flatten(const CompactAutomaton& c);
bool nfa_accepts(const Nfa& n, const Sentence& s);

bool subset_of(const Language& a, const Language& b);
std::string show(const Language& l, std::size_t limit = 20);

/// One NFA state per LR(0) state; reductions walk back along goto edges.
ComponentStrategy per_state_lr_strategy();

/// Whether `s` has a parse tree in which no nonterminal B dominates another
/// B with material on both sides of the path between them.
bool has_unembedded_parse(const Grammar& g, const Sentence& s);

/// Reduced random grammar; nonterminals N0..N{n-1}, terminals t0..t{k-1}.
Grammar random_grammar(std::mt19937& rng, int rules, int nonterminals, int terminals,
                       int max_rhs = 3);

} // namespace regapprox::testing
