#include "doctest.h"

#include "regapprox/errors.hpp"
#include "regapprox/exact.hpp"
#include "support.hpp"

using namespace regapprox;
using namespace regapprox::testing;

namespace {

CompactAutomaton exact(const Grammar& gr) { return make_fa(gr, analyze_recursion(gr)); }

std::vector<std::string> part_names(const CompactAutomaton& c) {
  std::vector<std::string> out;
  for (auto& p : c.parts)
    out.push_back(p.name);
  return out;
}

} // namespace

TEST_CASE("one subautomaton per referenced nonterminal, postorder, start last") {
  auto c = exact(nested_left());
  // A shares a component with S and is built inside it.
  CHECK(part_names(c) == std::vector<std::string>{"B", "S"});
  c.validate();
  auto d = g("S -> X Y\nX -> x\nY -> X y\n");
  CHECK(part_names(exact(d)) == std::vector<std::string>{"X", "Y", "S"});
}

TEST_CASE("left component: nested example language") {
  auto gr = nested_left();
  auto d = dfa_of(exact(gr));
  CHECK(accepts(d, words("d b a")));
  CHECK(accepts(d, words("d c b a d c a")));
  CHECK(accepts(d, words("d c c b a d a d c a")));
  CHECK(!accepts(d, words("d a")));
  CHECK(!accepts(d, words("d b a d")));
  CHECK(accepted(d, 8) == language(gr, 8));
}

TEST_CASE("right and cyclic components") {
  auto right = g("S -> a S | b T\nT -> c T | @eps\n");
  CHECK(accepted(dfa_of(exact(right)), 7) == language(right, 7));
  auto cyclic = g("A -> B | x\nB -> A | y\n");
  CHECK(accepted(dfa_of(exact(cyclic)), 3) == language(cyclic, 3));
}

TEST_CASE("self-embedding is refused without a strategy") {
  try {
    exact(mixed());
    FAIL("expected SelfEmbeddingError");
  } catch (const SelfEmbeddingError& e) {
    CHECK(e.component() == std::vector<std::string>{"S"});
  }
}

TEST_CASE("state cap applies per subautomaton") {
  auto gr = g("S -> a b c d e f g h\n");
  CHECK_THROWS_AS(make_fa(gr, analyze_recursion(gr), BuildOptions{4}), StateCapExceeded);
}

TEST_CASE("the strategy sees each self entry with opaque lower symbols") {
  auto gr = mixed();
  std::vector<std::string> seen;
  ComponentStrategy spy = [&](ComponentTask& t) {
    seen.push_back(t.component.grammar().name(t.entry));
    CHECK(t.atom(*gr.find("T")) == Label::subref("T"));
    CHECK(t.atom(*gr.find("a")) == Label::terminal("a"));
    t.builder.add_epsilon(t.from, t.to);
  };
  auto c = make_fa(gr, analyze_recursion(gr), spy);
  CHECK(seen == std::vector<std::string>{"S"});
  CHECK(part_names(c) == std::vector<std::string>{"T", "S"});
}

TEST_CASE("property: exact construction agrees with the oracle") {
  for (auto& n : suite_without_self_embedding()) {
    CAPTURE(n.name);
    CHECK(accepted(dfa_of(exact(n.grammar)), 8) == language(n.grammar, 8));
  }
  std::mt19937 rng(99);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 60; ++trial) {
    auto gr = random_grammar(rng, 7, 4, 2);
    if (gr.rules().empty() || analyze_recursion(gr).is_self_embedding())
      continue;
    ++checked;
    CAPTURE(format_grammar(gr));
    auto c = exact(gr);
    auto d = dfa_of(c);
    CHECK(accepted(d, 6) == language(gr, 6));
    CHECK(minimize(determinize(naive_flatten(c))) == d);
  }
  CHECK(checked >= 30);
}
