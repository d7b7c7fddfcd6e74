#include "regapprox/subset.hpp"

#include "regapprox/errors.hpp"

#include <deque>
#include <map>
#include <set>

namespace regapprox {

namespace {

// Bits of the set Q in a pair (B, Q).
constexpr std::uint8_t kLeft = 1;
constexpr std::uint8_t kRight = 2;

using Tag = std::map<SymbolId, std::uint8_t>;

std::string q_name(std::uint8_t q) {
  switch (q) {
  case 0: return "0";
  case kLeft: return "l";
  case kRight: return "r";
  default: return "lr";
  }
}

std::string tag_name(const Grammar& g, SymbolId base, const Tag& f) {
  std::string out = g.name(base) + "^{";
  bool first = true;
  for (auto& [b, q] : f) {
    if (!first)
      out += ',';
    first = false;
    out += '(' + g.name(b) + ',' + q_name(q) + ')';
  }
  return out + '}';
}

// Starts the output grammar: same symbols, every rule whose lhs is not in a
// self component.
Grammar copy_outside_self(const Grammar& g, const RecursionAnalysis& ra) {
  Grammar out = g.symbols_only();
  for (auto& r : g.rules()) {
    auto c = ra.component_index(r.lhs);
    if (!c || ra.classification[*c] != Recursion::self)
      out.add_rule(r.lhs, r.rhs);
  }
  return out;
}

void block_component(const Grammar& g, const ComponentView& view, Grammar& out,
                     std::size_t cap, std::size_t& created) {
  std::map<std::pair<SymbolId, Tag>, SymbolId> ids;
  std::deque<std::pair<SymbolId, Tag>> work;
  auto get = [&](SymbolId a, const Tag& f) {
    auto key = std::make_pair(a, f);
    if (auto it = ids.find(key); it != ids.end())
      return it->second;
    if (++created > cap)
      throw StateCapExceeded("sub-block tagged nonterminals", cap);
    auto id = out.fresh_nonterminal(tag_name(g, a, f));
    ids.emplace(key, id);
    work.push_back(std::move(key));
    return id;
  };

  for (auto a : view.members())
    out.add_rule(a, {get(a, {})});

  while (!work.empty()) {
    auto [a, f] = work.front();
    work.pop_front();
    const auto self = ids.at({a, f});
    if (auto it = f.find(a); it != f.end() && it->second == (kLeft | kRight))
      continue; // blocked: no rules
    Tag primed = f;
    primed.emplace(a, 0); // no-op if a pair for a exists
    for (auto local : view.rules_of(a)) {
      const auto& r = view.rule(local);
      std::vector<SymbolId> rhs;
      rhs.reserve(r.rhs.size());
      for (std::size_t k = 0; k < r.rhs.size(); ++k) {
        const auto x = r.rhs[k];
        if (!view.contains(x)) {
          rhs.push_back(x);
          continue;
        }
        std::uint8_t add = 0;
        if (k > 0)
          add |= kLeft;
        if (k + 1 < r.rhs.size())
          add |= kRight;
        Tag fj = primed;
        for (auto& [b, q] : fj)
          q |= add;
        rhs.push_back(get(x, fj));
      }
      out.add_rule(self, std::move(rhs));
    }
  }
}

enum Pos : int { top, l, r, lr, rl, bot };
constexpr const char* kPosName[] = {"top", "l", "r", "lr", "rl", "bot"};

void simple_component(const Grammar& g, const ComponentView& view, Grammar& out, int depth,
                      std::size_t cap, std::size_t& created) {
  std::map<std::tuple<SymbolId, int, int>, SymbolId> ids;
  for (auto a : view.members())
    for (int q = top; q <= bot; ++q)
      for (int f = 0; f <= depth; ++f) {
        if (++created > cap)
          throw StateCapExceeded("sub-simple tagged nonterminals", cap);
        ids[{a, q, f}] = out.fresh_nonterminal(g.name(a) + "^{" + kPosName[q] + "," +
                                               std::to_string(f) + "}");
      }
  auto tagged = [&](SymbolId a, int q, int f) { return ids.at({a, q, f}); };

  for (auto a : view.members()) {
    out.add_rule(a, {tagged(a, top, 0)});
    for (int f = 0; f <= depth; ++f) {
      out.add_rule(tagged(a, top, f), {tagged(a, l, f)});
      out.add_rule(tagged(a, top, f), {tagged(a, r, f)});
      out.add_rule(tagged(a, l, f), {tagged(a, lr, f)});
      out.add_rule(tagged(a, r, f), {tagged(a, rl, f)});
      out.add_rule(tagged(a, lr, f), {tagged(a, bot, f)});
      out.add_rule(tagged(a, rl, f), {tagged(a, bot, f)});
    }
  }

  for (std::size_t local = 0; local < view.rules().size(); ++local) {
    const auto& rule = view.rule(local);
    std::size_t m = 0;
    for (auto x : rule.rhs)
      if (view.contains(x))
        ++m;
    const bool head = !rule.rhs.empty() && view.contains(rule.rhs.front());
    const bool tail = !rule.rhs.empty() && view.contains(rule.rhs.back());
    for (int f = 0; f <= depth; ++f) {
      if (m == 1 && head)
        for (int q : {r, lr}) {
          std::vector<SymbolId> rhs = rule.rhs;
          rhs.front() = tagged(rhs.front(), q, f);
          out.add_rule(tagged(rule.lhs, q, f), std::move(rhs));
        }
      if (m == 1 && tail)
        for (int q : {l, rl}) {
          std::vector<SymbolId> rhs = rule.rhs;
          rhs.back() = tagged(rhs.back(), q, f);
          out.add_rule(tagged(rule.lhs, q, f), std::move(rhs));
        }
      if (m == 0 || f < depth) {
        std::vector<SymbolId> rhs = rule.rhs;
        for (auto& x : rhs)
          if (view.contains(x))
            x = tagged(x, top, f + 1);
        out.add_rule(tagged(rule.lhs, bot, f), std::move(rhs));
      }
    }
  }
}

} // namespace

Grammar transform_block(const Grammar& g, std::size_t nonterminal_cap) {
  const auto ra = analyze_recursion(g);
  Grammar out = copy_outside_self(g, ra);
  std::size_t created = 0;
  for (std::size_t c = 0; c < ra.components.size(); ++c)
    if (ra.classification[c] == Recursion::self)
      block_component(g, ComponentView(g, ra, c), out, nonterminal_cap, created);
  return reduce(out);
}

Grammar transform_sub_simple(const Grammar& g, int depth, std::size_t nonterminal_cap) {
  if (depth < 0)
    throw Error("sub-simple: depth must be non-negative");
  const auto ra = analyze_recursion(g);
  Grammar out = copy_outside_self(g, ra);
  std::size_t created = 0;
  for (std::size_t c = 0; c < ra.components.size(); ++c)
    if (ra.classification[c] == Recursion::self)
      simple_component(g, ComponentView(g, ra, c), out, depth, nonterminal_cap, created);
  return reduce(out);
}

CompactAutomaton sub_block_compile(const Grammar& g, const BuildOptions& options) {
  const auto t = transform_block(g, options.state_cap);
  return make_fa(t, analyze_recursion(t), options);
}

CompactAutomaton sub_simple_compile(const Grammar& g, int depth, const BuildOptions& options) {
  const auto t = transform_sub_simple(g, depth, options.state_cap);
  return make_fa(t, analyze_recursion(t), options);
}

ComponentStrategy lc_strategy(int depth) {
  if (depth < 1)
    throw Error("lc: depth must be at least 1");
  const auto limit = static_cast<std::size_t>(depth);
  return [limit](ComponentTask& task) {
    const auto& view = task.component;
    auto& b = task.builder;
    const auto n_rules = view.rules().size();

    // corners[E]: E and every member reachable from it through the first
    // symbol of a rule body.
    std::map<SymbolId, std::set<SymbolId>> corners;
    for (auto e : view.members()) {
      auto& set = corners[e];
      std::deque<SymbolId> todo{e};
      set.insert(e);
      while (!todo.empty()) {
        auto c = todo.front();
        todo.pop_front();
        for (auto local : view.rules_of(c)) {
          const auto& r = view.rule(local);
          if (!r.rhs.empty() && view.contains(r.rhs.front()) && set.insert(r.rhs.front()).second)
            todo.push_back(r.rhs.front());
        }
      }
    }

    // Stack cells above the goal; Item::rule is a view-local rule index.
    using Stack = std::vector<Item>;
    std::map<Stack, StateId> ids;
    std::deque<Stack> work;
    const StateId done = b.add_state();
    b.add_epsilon(done, task.to);
    auto get = [&](Stack s) {
      if (auto it = ids.find(s); it != ids.end())
        return it->second;
      auto id = b.add_state();
      ids.emplace(s, id);
      work.push_back(std::move(s));
      return id;
    };
    auto expected_below = [&](const Stack& s, std::size_t cell) {
      // Symbol awaited by the cell under position `cell`.
      if (cell == 0)
        return task.entry;
      const auto& it = s[cell - 1];
      return view.rule(it.rule).rhs[it.dot];
    };

    b.add_epsilon(task.from, get({}));
    while (!work.empty()) {
      const Stack st = work.front();
      work.pop_front();
      const auto self = ids.at(st);
      const std::size_t height = st.size() + 1;

      std::optional<SymbolId> expect;
      if (st.empty()) {
        expect = task.entry;
      } else {
        const auto& top = st.back();
        const auto& r = view.rule(top.rule);
        if (top.dot < r.rhs.size()) {
          const auto x = r.rhs[top.dot];
          if (view.contains(x)) {
            expect = x;
          } else {
            Stack next = st;
            ++next.back().dot;
            b.add(self, task.atom(x), get(std::move(next)));
          }
        } else {
          const auto below = expected_below(st, st.size() - 1);
          // project
          for (std::size_t local = 0; local < n_rules; ++local) {
            const auto& c = view.rule(local);
            if (!c.rhs.empty() && c.rhs.front() == r.lhs && corners.at(below).count(c.lhs)) {
              Stack next = st;
              next.back() = Item{static_cast<std::uint32_t>(local), 1};
              b.add_epsilon(self, get(std::move(next)));
            }
          }
          // attach
          if (r.lhs == below) {
            Stack next = st;
            next.pop_back();
            if (next.empty()) {
              b.add_epsilon(self, done);
            } else {
              ++next.back().dot;
              b.add_epsilon(self, get(std::move(next)));
            }
          }
        }
      }

      if (expect && height + 1 <= limit) {
        // announce
        for (std::size_t local = 0; local < n_rules; ++local) {
          const auto& c = view.rule(local);
          if (!corners.at(*expect).count(c.lhs))
            continue;
          Stack next = st;
          if (c.rhs.empty()) {
            next.push_back(Item{static_cast<std::uint32_t>(local), 0});
            b.add_epsilon(self, get(std::move(next)));
          } else if (!view.contains(c.rhs.front())) {
            next.push_back(Item{static_cast<std::uint32_t>(local), 1});
            b.add(self, task.atom(c.rhs.front()), get(std::move(next)));
          }
        }
      }
    }
  };
}

CompactAutomaton lc_compile(const Grammar& g, int depth, const BuildOptions& options) {
  const auto ra = analyze_recursion(g);
  return make_fa(g, ra, lc_strategy(depth), options);
}

} // namespace regapprox
