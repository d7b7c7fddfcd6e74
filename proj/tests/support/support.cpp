#include "support.hpp"

#include "regapprox/errors.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace regapprox::testing {

Grammar g(std::string_view text) { return parse_grammar(text); }

Grammar palindromes() { return g("S -> a S a | b S b | @eps\n"); }
Grammar aca() { return g("S -> a S a | c\n"); }
Grammar anbn() { return g("S -> a S b | @eps\n"); }
Grammar nested_left() { return g("S -> A a\nA -> S B\nA -> B b\nB -> B c\nB -> d\n"); }
Grammar astar() { return g("S -> a S | @eps\n"); }
Grammar left_toy() { return g("E -> E + T | T\nT -> x\n"); }
Grammar mixed() { return g("S -> a S a | b S b | T\nT -> T c | d\n"); }

std::vector<NamedGrammar> suite() {
  return {{"palindromes", palindromes()}, {"aca", aca()},     {"anbn", anbn()},
          {"nested_left", nested_left()}, {"astar", astar()}, {"left_toy", left_toy()},
          {"mixed", mixed()}};
}

std::vector<NamedGrammar> suite_without_self_embedding() {
  std::vector<NamedGrammar> out;
  for (auto& n : suite())
    if (!analyze_recursion(n.grammar).is_self_embedding())
      out.push_back(n);
  return out;
}

Sentence words(std::string_view s) { return split_sentence(s); }

Language language(const Grammar& gr, std::size_t maxlen) {
  auto v = enumerate_language(gr, maxlen);
  return Language(v.begin(), v.end());
}

Language all_strings(const std::vector<std::string>& alphabet, std::size_t maxlen) {
  Language out{Sentence{}};
  std::vector<Sentence> layer{Sentence{}};
  for (std::size_t len = 1; len <= maxlen; ++len) {
    std::vector<Sentence> next;
    for (auto& s : layer)
      for (auto& a : alphabet) {
        auto t = s;
        t.push_back(a);
        out.insert(t);
        next.push_back(std::move(t));
      }
    layer = std::move(next);
  }
  return out;
}

std::vector<std::string> terminal_names(const Grammar& gr) {
  std::vector<std::string> out;
  for (auto t : gr.terminals())
    out.push_back(gr.name(t));
  return out;
}

Language accepted(const Dfa& d, std::size_t maxlen) {
  Language out;
  if (d.state_count() == 0)
    return out;
  Sentence cur;
  std::function<void(StateId)> walk = [&](StateId s) {
    if (d.finals[s])
      out.insert(cur);
    if (cur.size() == maxlen)
      return;
    for (auto& e : d.edges[s]) {
      cur.push_back(d.alphabet[e.symbol]);
      walk(e.target);
      cur.pop_back();
    }
  };
  walk(d.initial);
  return out;
}

Dfa dfa_of(const CompactAutomaton& c) { return minimize(expand(c)); }

Nfa naive_flatten(const CompactAutomaton& c) {
  std::map<std::string, const Nfa*> parts;
  for (auto& p : c.parts)
    parts[p.name] = &p.nfa;
  NfaBuilder b(50'000'000, "flatten");
  std::function<void(const Nfa&, StateId, StateId)> inline_part = [&](const Nfa& n, StateId from,
                                                                      StateId to) {
    std::vector<StateId> map(n.state_count);
    for (auto& s : map)
      s = b.add_state();
    b.add_epsilon(from, map[n.initial]);
    for (auto f : n.finals)
      b.add_epsilon(map[f], to);
    for (auto& t : n.transitions) {
      if (t.label.is_subref())
        inline_part(*parts.at(t.label.symbol), map[t.from], map[t.to]);
      else
        b.add(map[t.from], t.label, map[t.to]);
    }
  };
  auto s = b.add_state();
  auto f = b.add_state();
  b.set_initial(s);
  b.add_final(f);
  inline_part(c.root().nfa, s, f);
  return std::move(b).finish();
}

bool nfa_accepts(const Nfa& n, const Sentence& s) {
  std::vector<std::vector<StateId>> eps(n.state_count);
  for (auto& t : n.transitions)
    if (t.label.is_epsilon())
      eps[t.from].push_back(t.to);
  auto close = [&](std::set<StateId> set) {
    std::vector<StateId> todo(set.begin(), set.end());
    while (!todo.empty()) {
      auto q = todo.back();
      todo.pop_back();
      for (auto r : eps[q])
        if (set.insert(r).second)
          todo.push_back(r);
    }
    return set;
  };
  auto cur = close({n.initial});
  for (auto& tok : s) {
    std::set<StateId> next;
    for (auto& t : n.transitions)
      if (!t.label.is_epsilon() && t.label.symbol == tok && cur.count(t.from))
        next.insert(t.to);
    cur = close(std::move(next));
  }
  for (auto f : n.finals)
    if (cur.count(f))
      return true;
  return false;
}

bool subset_of(const Language& a, const Language& b) {
  for (auto& s : a)
    if (!b.count(s))
      return false;
  return true;
}

std::string show(const Language& l, std::size_t limit) {
  std::string out = "{";
  std::size_t i = 0;
  for (auto& s : l) {
    if (i++ == limit) {
      out += " ...";
      break;
    }
    out += " \"" + join_sentence(s) + "\"";
  }
  return out + " }";
}

ComponentStrategy per_state_lr_strategy() {
  return [](ComponentTask& task) {
    const auto lr = build_lr0(task.component, task.entry);
    auto& b = task.builder;
    std::vector<StateId> q;
    for (std::size_t i = 0; i < lr.states.size(); ++i)
      q.push_back(b.add_state());
    b.add_epsilon(task.from, q[lr.initial]);
    for (StateId t = 0; t < lr.states.size(); ++t) {
      for (auto& [x, target] : lr.transitions[t])
        if (!lr.is_nonterminal(x))
          b.add(q[t], task.atom(x), q[target]);
      for (auto& it : lr.states[t]) {
        const auto& r = lr.rules[it.rule];
        if (it.dot != r.rhs.size())
          continue;
        std::set<StateId> frontier{t};
        for (auto k = r.rhs.size(); k-- > 0;) {
          std::set<StateId> prev;
          for (StateId p = 0; p < lr.states.size(); ++p)
            if (auto to = lr.go(p, r.rhs[k]); to && frontier.count(*to))
              prev.insert(p);
          frontier = std::move(prev);
        }
        if (it.rule == lr.augmented_rule()) {
          if (frontier.count(lr.initial))
            b.add_epsilon(q[t], task.to);
          continue;
        }
        for (auto p : frontier)
          if (auto to = lr.go(p, r.lhs))
            b.add_epsilon(q[t], q[*to]);
      }
    }
  };
}

namespace {

class UnembeddedSearch {
public:
  UnembeddedSearch(const Grammar& gr, std::vector<SymbolId> input)
      : g_(gr), by_lhs_(gr.rules_by_lhs()), input_(std::move(input)) {}

  bool run() { return node(g_.start(), 0, input_.size(), {}, {}); }

private:
  using Bits = std::map<SymbolId, std::uint8_t>;
  using Path = std::set<std::tuple<SymbolId, std::size_t, std::size_t>>;

  bool node(SymbolId a, std::size_t i, std::size_t j, const Bits& above, Path path) {
    path.insert({a, i, j});
    Bits primed = above;
    primed.emplace(a, 0);
    for (auto ri : by_lhs_[a]) {
      const auto& rhs = g_.rules()[ri].rhs;
      if (split(rhs, 0, i, j, primed, path))
        return true;
    }
    return false;
  }

  // Tries to cover input[pos, j) with rhs[k..].
  bool split(const std::vector<SymbolId>& rhs, std::size_t k, std::size_t pos, std::size_t j,
             const Bits& primed, const Path& path) {
    if (k == rhs.size())
      return pos == j;
    const auto x = rhs[k];
    if (g_.is_terminal(x))
      return pos < j && input_[pos] == x && split(rhs, k + 1, pos + 1, j, primed, path);
    Bits child = primed;
    std::uint8_t add = (k > 0 ? 1 : 0) | (k + 1 < rhs.size() ? 2 : 0);
    for (auto& [s, q] : child)
      q |= add;
    if (auto it = child.find(x); it != child.end() && it->second == 3)
      return false;
    for (std::size_t end = pos; end <= j; ++end) {
      if (path.count({x, pos, end}))
        continue; // a shorter tree exists
      if (node(x, pos, end, child, path) && split(rhs, k + 1, end, j, primed, path))
        return true;
    }
    return false;
  }

  const Grammar& g_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  std::vector<SymbolId> input_;
};

} // namespace

bool has_unembedded_parse(const Grammar& gr, const Sentence& s) {
  std::vector<SymbolId> input;
  for (auto& tok : s) {
    auto id = gr.find(tok);
    if (!id || !gr.is_terminal(*id))
      return false;
    input.push_back(*id);
  }
  return UnembeddedSearch(gr, std::move(input)).run();
}

Grammar random_grammar(std::mt19937& rng, int rules, int nonterminals, int terminals,
                       int max_rhs) {
  std::ostringstream text;
  std::uniform_int_distribution<int> nt(0, nonterminals - 1);
  std::uniform_int_distribution<int> t(0, terminals - 1);
  std::uniform_int_distribution<int> len(0, max_rhs);
  std::bernoulli_distribution pick_nt(0.4);
  text << "@start N0\n";
  for (int r = 0; r < rules; ++r) {
    const int lhs = r < nonterminals ? r : nt(rng);
    text << 'N' << lhs << " ->";
    const int n = len(rng);
    if (n == 0)
      text << " @eps";
    for (int k = 0; k < n; ++k) {
      if (pick_nt(rng))
        text << " N" << nt(rng);
      else
        text << " t" << t(rng);
    }
    text << '\n';
  }
  return reduce(parse_grammar(text.str()));
}

} // namespace regapprox::testing
