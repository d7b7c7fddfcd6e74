#include "regapprox/rtn.hpp"

#include "regapprox/errors.hpp"

#include <deque>
#include <map>

namespace regapprox {

namespace {

CompactAutomaton compile_with(const Grammar& g, const ComponentStrategy& strategy,
                              const BuildOptions& options) {
  const auto ra = analyze_recursion(g);
  return make_fa(g, ra, strategy, options);
}

// Nodes of the plain network: enter(A), exit(A), item(rule, dot).
enum class Kind : std::uint8_t { enter, exit, item };

struct Node {
  Kind kind;
  SymbolId symbol;
  std::uint32_t local; // view-local rule index for items
  std::uint32_t dot;
  friend auto operator<=>(const Node&, const Node&) = default;
};

struct Edge {
  std::optional<Label> label; // nullopt: epsilon
  Node to;
};

} // namespace

std::vector<RtnState> build_rtn_component(ComponentTask& task, int depth) {
  if (depth < 1)
    throw Error("rtn: depth must be at least 1");
  const auto& view = task.component;
  const auto& rules = view.grammar().rules();
  auto& b = task.builder;
  const auto history_limit = static_cast<std::size_t>(depth - 1);

  std::map<RtnState, StateId> ids;
  std::vector<RtnState> states;
  std::deque<std::size_t> work;
  auto get = [&](RtnState key) {
    auto it = ids.find(key);
    if (it != ids.end())
      return it->second;
    auto id = b.add_state();
    ids.emplace(key, id);
    states.push_back(std::move(key));
    work.push_back(states.size() - 1);
    return id;
  };
  auto item_state = [](std::uint32_t rule, std::uint32_t dot, std::vector<Item> h) {
    return RtnState{RtnState::Kind::item, 0, Item{rule, dot}, std::move(h)};
  };
  auto enter_state = [](SymbolId a, std::vector<Item> h) {
    return RtnState{RtnState::Kind::enter, a, Item{0, 0}, std::move(h)};
  };
  auto exit_state = [](SymbolId a, std::vector<Item> h) {
    return RtnState{RtnState::Kind::exit, a, Item{0, 0}, std::move(h)};
  };

  b.add_epsilon(task.from, get(enter_state(task.entry, {})));
  b.add_epsilon(get(exit_state(task.entry, {})), task.to);

  while (!work.empty()) {
    // Copy: `states` may reallocate while we add successors.
    const RtnState st = states[work.front()];
    work.pop_front();
    const auto self = ids.at(st);
    switch (st.kind) {
    case RtnState::Kind::enter:
      for (auto local : view.rules_of(st.nonterminal))
        b.add_epsilon(self, get(item_state(static_cast<std::uint32_t>(view.rules()[local]), 0, st.history)));
      break;
    case RtnState::Kind::exit:
      break;
    case RtnState::Kind::item: {
      const auto& r = rules[st.item.rule];
      if (st.item.dot == r.rhs.size()) {
        b.add_epsilon(self, get(exit_state(r.lhs, st.history)));
        break;
      }
      const auto x = r.rhs[st.item.dot];
      const auto next = get(item_state(st.item.rule, st.item.dot + 1, st.history));
      if (!view.contains(x)) {
        b.add(self, task.atom(x), next);
        break;
      }
      std::vector<Item> pushed;
      pushed.reserve(history_limit);
      if (history_limit > 0) {
        pushed.push_back(st.item);
        for (std::size_t k = 0; k < st.history.size() && pushed.size() < history_limit; ++k)
          pushed.push_back(st.history[k]);
      }
      b.add_epsilon(self, get(enter_state(x, pushed)));
      b.add_epsilon(get(exit_state(x, pushed)), next);
      break;
    }
    }
  }
  return states;
}

ComponentStrategy rtn_strategy(int depth) {
  if (depth < 1)
    throw Error("rtn: depth must be at least 1");
  return [depth](ComponentTask& task) { build_rtn_component(task, depth); };
}

CompactAutomaton rtn_compile(const Grammar& g, int depth, const BuildOptions& options) {
  return compile_with(g, rtn_strategy(depth), options);
}

ComponentStrategy rtn_plain_strategy() {
  return [](ComponentTask& task) {
    const auto& view = task.component;
    auto& b = task.builder;
    std::map<SymbolId, std::pair<StateId, StateId>> lhs; // q_A, q'_A
    for (auto a : view.members())
      lhs[a] = {b.add_state(), b.add_state()};
    for (std::size_t local = 0; local < view.rules().size(); ++local) {
      const auto& r = view.rule(local);
      std::vector<StateId> q;
      for (std::size_t k = 0; k <= r.rhs.size(); ++k)
        q.push_back(b.add_state());
      b.add_epsilon(lhs[r.lhs].first, q.front());
      b.add_epsilon(q.back(), lhs[r.lhs].second);
      for (std::size_t k = 0; k < r.rhs.size(); ++k) {
        const auto x = r.rhs[k];
        if (view.contains(x)) {
          b.add_epsilon(q[k], lhs[x].first);
          b.add_epsilon(lhs[x].second, q[k + 1]);
        } else {
          b.add(q[k], task.atom(x), q[k + 1]);
        }
      }
    }
    b.add_epsilon(task.from, lhs[task.entry].first);
    b.add_epsilon(lhs[task.entry].second, task.to);
  };
}

CompactAutomaton rtn_plain_compile(const Grammar& g, const BuildOptions& options) {
  return compile_with(g, rtn_plain_strategy(), options);
}

bool rtn_visit_allowed(std::optional<std::uint32_t> previous, std::uint32_t dot,
                       std::uint32_t length) {
  // Forward: after position p < length comes p+1 or a nested 0.
  // Backward: position i > 0 is preceded by i-1 or by a completed nested
  // incarnation (length).
  if (!previous)
    return true;
  return dot == 0 || dot == *previous + 1 || *previous == length;
}

ComponentStrategy rtn_refined_strategy() {
  return [](ComponentTask& task) {
    const auto& view = task.component;
    auto& b = task.builder;

    auto successors = [&](const Node& n) {
      std::vector<Edge> out;
      switch (n.kind) {
      case Kind::enter:
        for (auto local : view.rules_of(n.symbol))
          out.push_back({std::nullopt, {Kind::item, 0, static_cast<std::uint32_t>(local), 0}});
        break;
      case Kind::exit:
        // Return edges to every position just after an occurrence of the symbol.
        for (std::size_t local = 0; local < view.rules().size(); ++local) {
          const auto& r = view.rule(local);
          for (std::size_t k = 0; k < r.rhs.size(); ++k)
            if (r.rhs[k] == n.symbol)
              out.push_back({std::nullopt,
                             {Kind::item, 0, static_cast<std::uint32_t>(local),
                              static_cast<std::uint32_t>(k + 1)}});
        }
        break;
      case Kind::item: {
        const auto& r = view.rule(n.local);
        if (n.dot == r.rhs.size()) {
          out.push_back({std::nullopt, {Kind::exit, r.lhs, 0, 0}});
          break;
        }
        const auto x = r.rhs[n.dot];
        if (view.contains(x))
          out.push_back({std::nullopt, {Kind::enter, x, 0, 0}});
        else
          out.push_back({task.atom(x), {Kind::item, 0, n.local, n.dot + 1}});
        break;
      }
      }
      return out;
    };

    using Tracker = std::vector<std::int32_t>; // -1: not visited
    using Key = std::pair<Node, Tracker>;
    std::map<Key, StateId> ids;
    std::deque<Key> work;
    auto get = [&](Key key) {
      auto it = ids.find(key);
      if (it != ids.end())
        return it->second;
      auto id = b.add_state();
      ids.emplace(key, id);
      work.push_back(std::move(key));
      return id;
    };

    const auto entry_exit = Node{Kind::exit, task.entry, 0, 0};
    b.add_epsilon(task.from,
                  get({Node{Kind::enter, task.entry, 0, 0}, Tracker(view.rules().size(), -1)}));
    while (!work.empty()) {
      Key key = work.front();
      work.pop_front();
      const auto self = ids.at(key);
      if (key.first == entry_exit)
        b.add_epsilon(self, task.to);
      for (auto& e : successors(key.first)) {
        Tracker next = key.second;
        if (e.to.kind == Kind::item) {
          const auto prev = key.second[e.to.local];
          const auto len = static_cast<std::uint32_t>(view.rule(e.to.local).rhs.size());
          std::optional<std::uint32_t> p;
          if (prev >= 0)
            p = static_cast<std::uint32_t>(prev);
          if (!rtn_visit_allowed(p, e.to.dot, len))
            continue;
          next[e.to.local] = static_cast<std::int32_t>(e.to.dot);
        }
        auto target = get({e.to, std::move(next)});
        if (e.label)
          b.add(self, *e.label, target);
        else
          b.add_epsilon(self, target);
      }
    }
  };
}

CompactAutomaton rtn_refined_compile(const Grammar& g, const BuildOptions& options) {
  return compile_with(g, rtn_refined_strategy(), options);
}

} // namespace regapprox
