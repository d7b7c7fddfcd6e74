#include "doctest.h"

#include "regapprox/errors.hpp"
#include "regapprox/subset.hpp"
#include "support.hpp"

using namespace regapprox;
using namespace regapprox::testing;

namespace {

Language block_language(const Grammar& gr, std::size_t maxlen) {
  return language(transform_block(gr), maxlen);
}

Language simple_language(const Grammar& gr, int d, std::size_t maxlen) {
  return language(transform_sub_simple(gr, d), maxlen);
}

} // namespace

TEST_CASE("blocking transform on palindromes leaves only the empty string") {
  auto t = transform_block(palindromes());
  CHECK(!analyze_recursion(t).is_self_embedding());
  CHECK(block_language(palindromes(), 8) == Language{Sentence{}});
  CHECK(accepted(dfa_of(sub_block_compile(palindromes())), 8) == Language{Sentence{}});
}

TEST_CASE("blocking transform on a S a | c") {
  CHECK(block_language(aca(), 8) == Language{words("c")});
}

TEST_CASE("blocking transform tags") {
  auto t = transform_block(aca());
  CHECK(format_grammar(t) == "@start S\nS -> S^{}\nS^{} -> c\n");
  auto two = transform_block(g("S -> a T | c\nT -> S b | d\n"));
  CHECK(two.find("S^{}"));
  CHECK(two.find("T^{(S,l)}"));
  // Blocked, so removed by reduction.
  CHECK(two.find("S^{(S,lr),(T,r)}") == std::nullopt);
  CHECK(language(two, 6) == Language{words("c"), words("a d")});
}

TEST_CASE("transforms leave grammars without self components alone") {
  for (auto& n : suite_without_self_embedding()) {
    CAPTURE(n.name);
    CHECK(block_language(n.grammar, 8) == language(n.grammar, 8));
    for (int d = 0; d <= 2; ++d)
      CHECK(simple_language(n.grammar, d, 8) == language(n.grammar, 8));
    for (int d = 2; d <= 4; ++d)
      CHECK(accepted(dfa_of(lc_compile(n.grammar, d)), 8) == language(n.grammar, 8));
  }
}

TEST_CASE("counter transform on palindromes") {
  CHECK(simple_language(palindromes(), 0, 8) == Language{Sentence{}});
  CHECK(simple_language(palindromes(), 1, 8) ==
        Language{Sentence{}, words("a a"), words("b b")});
  auto two = simple_language(palindromes(), 2, 8);
  CHECK(two.size() == 7);
  CHECK(two.count(words("a b b a")));
  CHECK(accepted(dfa_of(sub_simple_compile(palindromes(), 1)), 8) ==
        Language{Sentence{}, words("a a"), words("b b")});
  CHECK_THROWS_AS(transform_sub_simple(palindromes(), -1), Error);
}

TEST_CASE("counter transform lets pure left and right recursion through") {
  // b* e a* needs no unconstrained rule.
  auto gr = g("S -> S a | b S | c S d | e\n");
  auto zero = simple_language(gr, 0, 6);
  CHECK(zero.count(words("b b e a a")));
  CHECK(zero.count(words("b e a")));
  CHECK(!zero.count(words("c e d")));
  CHECK(simple_language(gr, 1, 6).count(words("c e d")));
}

TEST_CASE("size guard on tagged nonterminals") {
  CHECK_THROWS_AS(transform_block(mixed(), 1), StateCapExceeded);
  CHECK_THROWS_AS(transform_sub_simple(palindromes(), 3, 10), StateCapExceeded);
}

TEST_CASE("left-corner recognizer on palindromes") {
  CHECK(accepted(dfa_of(lc_compile(palindromes(), 1)), 8).empty());
  CHECK(accepted(dfa_of(lc_compile(palindromes(), 2)), 8) == Language{Sentence{}});
  CHECK(accepted(dfa_of(lc_compile(palindromes(), 3)), 8) ==
        Language{Sentence{}, words("a a"), words("b b")});
  std::vector<Language> by_depth;
  for (int d = 2; d <= 5; ++d)
    by_depth.push_back(accepted(dfa_of(lc_compile(palindromes(), d)), 8));
  for (std::size_t i = 0; i + 1 < by_depth.size(); ++i) {
    CHECK(subset_of(by_depth[i], by_depth[i + 1]));
    CHECK(by_depth[i] != by_depth[i + 1]);
  }
  CHECK_THROWS_AS(lc_compile(palindromes(), 0), Error);
}

TEST_CASE("left-corner recognizer with left recursion inside the component") {
  auto gr = g("S -> S a | b S c | d\n");
  auto lang = language(gr, 7);
  auto acc = accepted(dfa_of(lc_compile(gr, 3)), 7);
  CHECK(subset_of(acc, lang));
  CHECK(acc.count(words("d a a a")));
  CHECK(acc.count(words("b d c a")));
}

TEST_CASE("property: subset, no self-embedding, monotone in d") {
  for (auto& n : suite()) {
    CAPTURE(n.name);
    auto lang = language(n.grammar, 8);
    auto t = transform_block(n.grammar);
    CHECK(!analyze_recursion(t).is_self_embedding());
    CHECK(subset_of(language(t, 8), lang));
    CHECK(subset_of(accepted(dfa_of(sub_block_compile(n.grammar)), 8), lang));
    Language prev;
    for (int d = 0; d <= 3; ++d) {
      auto s = transform_sub_simple(n.grammar, d);
      CHECK(!analyze_recursion(s).is_self_embedding());
      auto acc = accepted(dfa_of(sub_simple_compile(n.grammar, d)), 8);
      CHECK(subset_of(acc, lang));
      CHECK(subset_of(prev, acc));
      prev = std::move(acc);
    }
    for (int d = 2; d <= 4; ++d)
      CHECK(subset_of(accepted(dfa_of(lc_compile(n.grammar, d)), 8), lang));
  }
}

TEST_CASE("property: blocking keeps every sentence with an unembedded parse") {
  std::vector<Grammar> grammars;
  for (auto& n : suite())
    grammars.push_back(n.grammar);
  grammars.push_back(g("S -> A a | x\nA -> b S | A y\n"));
  grammars.push_back(g("S -> a S | S b | c S c | d\n"));
  std::mt19937 rng(77);
  while (grammars.size() < 30) {
    auto gr = random_grammar(rng, 6, 2, 2);
    if (!gr.rules().empty() && analyze_recursion(gr).is_self_embedding())
      grammars.push_back(gr);
  }
  for (auto& gr : grammars) {
    CAPTURE(format_grammar(gr));
    auto blocked = language(transform_block(gr), 6);
    for (auto& s : language(gr, 6))
      CHECK(blocked.count(s) == (has_unembedded_parse(gr, s) ? 1u : 0u));
  }
}

TEST_CASE("property: random grammars keep the subset contract") {
  std::mt19937 rng(4321);
  for (int trial = 0; trial < 40; ++trial) {
    auto gr = random_grammar(rng, 7, 3, 2);
    if (gr.rules().empty())
      continue;
    CAPTURE(format_grammar(gr));
    auto lang = language(gr, 6);
    CHECK(subset_of(accepted(dfa_of(sub_block_compile(gr)), 6), lang));
    for (int d = 0; d <= 2; ++d)
      CHECK(subset_of(accepted(dfa_of(sub_simple_compile(gr, d)), 6), lang));
    for (int d = 2; d <= 4; ++d)
      CHECK(subset_of(accepted(dfa_of(lc_compile(gr, d)), 6), lang));
  }
}
