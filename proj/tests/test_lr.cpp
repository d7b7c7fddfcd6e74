#include "doctest.h"

#include "regapprox/errors.hpp"
#include "regapprox/lr.hpp"
#include "regapprox/rtn.hpp"
#include "support.hpp"

#include <memory>

using namespace regapprox;
using namespace regapprox::testing;

namespace {

LrAutomaton lr_of(const Grammar& gr) {
  static std::vector<std::unique_ptr<std::pair<Grammar, RecursionAnalysis>>> keep;
  keep.push_back(std::make_unique<std::pair<Grammar, RecursionAnalysis>>(gr, analyze_recursion(gr)));
  auto& [g0, ra] = *keep.back();
  ComponentView view(g0, ra, 0);
  return build_lr0(view, g0.start());
}

Dfa per_state(const Grammar& gr) { return dfa_of(make_fa(gr, analyze_recursion(gr), per_state_lr_strategy())); }

// Exhaustive LR(0) recognition with an unbounded stack; conflicts are
// explored nondeterministically. Only for grammars that are one component.
bool lr_simulate(const LrAutomaton& lr, const Sentence& s, const Grammar& gr) {
  std::vector<SymbolId> input;
  for (auto& t : s)
    input.push_back(*gr.find(t));
  std::set<std::pair<std::vector<StateId>, std::size_t>> seen;
  std::vector<std::pair<std::vector<StateId>, std::size_t>> todo{{{lr.initial}, 0}};
  while (!todo.empty()) {
    auto [stack, pos] = todo.back();
    todo.pop_back();
    if (stack.size() > 2 * s.size() + 6 || !seen.insert({stack, pos}).second)
      continue;
    const auto top = stack.back();
    if (pos < input.size())
      if (auto t = lr.go(top, input[pos]))
        todo.push_back({[&] { auto c = stack; c.push_back(*t); return c; }(), pos + 1});
    for (auto& it : lr.states[top]) {
      const auto& r = lr.rules[it.rule];
      if (it.dot != r.rhs.size() || stack.size() <= r.rhs.size())
        continue;
      auto c = stack;
      c.resize(c.size() - r.rhs.size());
      if (it.rule == lr.augmented_rule()) {
        if (c.size() == 1 && pos == input.size())
          return true;
        continue;
      }
      if (auto t = lr.go(c.back(), r.lhs)) {
        c.push_back(*t);
        todo.push_back({c, pos});
      }
    }
  }
  return false;
}

} // namespace

TEST_CASE("LR(0) automaton of the palindrome component") {
  auto gr = palindromes();
  auto lr = lr_of(gr);
  CHECK(lr.states.size() == 8);
  CHECK(lr.states[lr.initial].size() == 4);
  CHECK(lr.rules.size() == 4);
  CHECK(lr.rules.back().lhs == LrAutomaton::kAugmentedLhs);
  // Deterministic goto; every state but the initial one is entered on one symbol.
  std::map<StateId, std::set<SymbolId>> entered;
  for (StateId s = 0; s < lr.states.size(); ++s)
    for (auto& [x, t] : lr.transitions[s])
      entered[t].insert(x);
  for (auto& [t, xs] : entered) {
    CHECK(t != lr.initial);
    CHECK(xs.size() == 1);
  }
  CHECK(entered.size() == 7);
}

TEST_CASE("LR(0) automaton with a goto loop") {
  auto lr = lr_of(astar());
  CHECK(lr.states.size() == 4);
  auto after_a = lr.go(lr.initial, *astar().find("a"));
  REQUIRE(after_a);
  CHECK(lr.go(*after_a, *astar().find("a")) == after_a);
}

TEST_CASE("collapse keeps the older occurrence") {
  CHECK(pw_push({0, 1, 2, 3}, 1) == std::vector<StateId>{0, 1});
  CHECK(pw_push({0, 1, 2}, 5) == std::vector<StateId>{0, 1, 2, 5});
  CHECK(pw_push({0, 1, 2}, 2) == std::vector<StateId>{0, 1, 2});
}

TEST_CASE("depth 1 agrees with the literal per-state construction") {
  for (auto& n : suite()) {
    CAPTURE(n.name);
    CHECK(equivalent(dfa_of(lr_compile(n.grammar, 1)), per_state(n.grammar)).equivalent);
  }
  std::mt19937 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    auto gr = random_grammar(rng, 7, 3, 2);
    if (gr.rules().empty())
      continue;
    CAPTURE(format_grammar(gr));
    CHECK(equivalent(dfa_of(lr_compile(gr, 1)), per_state(gr)).equivalent);
  }
}

TEST_CASE("depth 1 against the plain RTN") {
  auto mixed_lr = dfa_of(lr_compile(mixed(), 1));
  CHECK(equivalent(mixed_lr, dfa_of(rtn_compile(mixed(), 1))).equivalent);
  // An empty rule reduces without popping, so the state reached keeps the
  // context of the last shift; the RTN returns to any caller.
  auto pal_lr = dfa_of(lr_compile(palindromes(), 1));
  auto pal_rtn = dfa_of(rtn_compile(palindromes(), 1));
  auto e = equivalent(pal_lr, pal_rtn);
  CHECK(!e.equivalent);
  REQUIRE(e.witness);
  CHECK(*e.witness == words("a"));
  CHECK(subset_of(accepted(pal_lr, 8), accepted(pal_rtn, 8)));
}

TEST_CASE("no self component means the exact language") {
  auto gr = nested_left();
  auto ref = dfa_of(make_fa(gr, analyze_recursion(gr)));
  CHECK(dfa_of(lr_compile(gr, 2)) == ref);
  CHECK(dfa_of(pw_compile(gr)) == ref);
}

TEST_CASE("deeper classes are more precise on a^n b^n") {
  auto gr = anbn();
  auto one = accepted(dfa_of(lr_compile(gr, 1)), 8);
  auto three = accepted(dfa_of(lr_compile(gr, 3)), 8);
  CHECK(subset_of(three, one));
  CHECK(one.count(words("a b b")));
}

TEST_CASE("invalid depth and cap") {
  CHECK_THROWS_AS(lr_compile(palindromes(), 0), Error);
  CHECK_THROWS_AS(pw_compile(palindromes(), BuildOptions{5}), StateCapExceeded);
}

TEST_CASE("property: superset of the language and of unbounded LR recognition") {
  for (auto& n : suite()) {
    CAPTURE(n.name);
    auto lang = language(n.grammar, 8);
    for (int d = 1; d <= 3; ++d)
      CHECK(subset_of(lang, accepted(dfa_of(lr_compile(n.grammar, d)), 8)));
    auto pw = accepted(dfa_of(pw_compile(n.grammar)), 8);
    CHECK(subset_of(lang, pw));
  }
  for (auto gr : {palindromes(), anbn(), aca()}) {
    auto lr = lr_of(gr);
    auto pw = dfa_of(pw_compile(gr));
    auto lr2 = dfa_of(lr_compile(gr, 2));
    for (auto& s : all_strings(terminal_names(gr), 7)) {
      const bool ok = lr_simulate(lr, s, gr);
      CHECK(ok == chart_member(gr, s));
      if (ok) {
        CHECK(accepts(pw, s));
        CHECK(accepts(lr2, s));
      }
    }
  }
}

TEST_CASE("property: random grammars keep the superset contract") {
  std::mt19937 rng(555);
  for (int trial = 0; trial < 40; ++trial) {
    auto gr = random_grammar(rng, 7, 3, 2);
    if (gr.rules().empty())
      continue;
    CAPTURE(format_grammar(gr));
    auto lang = language(gr, 6);
    for (int d = 1; d <= 3; ++d)
      CHECK(subset_of(lang, accepted(dfa_of(lr_compile(gr, d)), 6)));
    CHECK(subset_of(lang, accepted(dfa_of(pw_compile(gr, BuildOptions{200000})), 6)));
  }
}
