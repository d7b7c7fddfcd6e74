#include "regapprox/lr.hpp"

#include "regapprox/errors.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace regapprox {

std::optional<StateId> LrAutomaton::go(StateId from, SymbolId x) const {
  const auto& t = transitions[from];
  if (auto it = t.find(x); it != t.end())
    return it->second;
  return std::nullopt;
}

LrAutomaton build_lr0(const ComponentView& component, SymbolId entry, std::size_t state_cap) {
  LrAutomaton lr;
  for (std::size_t local = 0; local < component.rules().size(); ++local)
    lr.rules.push_back(component.rule(local));
  lr.rules.push_back(Rule{LrAutomaton::kAugmentedLhs, {entry}});
  lr.nonterminal.assign(component.grammar().symbol_count(), false);
  for (auto m : component.members())
    lr.nonterminal[m] = true;

  std::map<SymbolId, std::vector<std::uint32_t>> by_lhs;
  for (std::uint32_t i = 0; i + 1 < lr.rules.size(); ++i)
    by_lhs[lr.rules[i].lhs].push_back(i);

  auto closure = [&](std::vector<Item> kernel) {
    std::set<Item> set(kernel.begin(), kernel.end());
    std::deque<Item> todo(kernel.begin(), kernel.end());
    std::set<SymbolId> expanded;
    while (!todo.empty()) {
      auto it = todo.front();
      todo.pop_front();
      const auto& r = lr.rules[it.rule];
      if (it.dot == r.rhs.size())
        continue;
      const auto x = r.rhs[it.dot];
      if (!lr.is_nonterminal(x) || !expanded.insert(x).second)
        continue;
      for (auto i : by_lhs[x])
        if (set.insert(Item{i, 0}).second)
          todo.push_back(Item{i, 0});
    }
    return std::vector<Item>(set.begin(), set.end());
  };

  std::map<std::vector<Item>, StateId> ids;
  auto add = [&](std::vector<Item> items) {
    if (auto it = ids.find(items); it != ids.end())
      return it->second;
    if (lr.states.size() >= state_cap)
      throw StateCapExceeded("LR(0) automaton", state_cap);
    auto id = static_cast<StateId>(lr.states.size());
    ids.emplace(items, id);
    lr.states.push_back(std::move(items));
    lr.transitions.emplace_back();
    return id;
  };
  lr.initial = add(closure({Item{static_cast<std::uint32_t>(lr.augmented_rule()), 0}}));
  for (StateId s = 0; s < lr.states.size(); ++s) {
    std::map<SymbolId, std::vector<Item>> kernels;
    for (auto& it : lr.states[s]) {
      const auto& r = lr.rules[it.rule];
      if (it.dot < r.rhs.size())
        kernels[r.rhs[it.dot]].push_back(Item{it.rule, it.dot + 1});
    }
    for (auto& [x, kernel] : kernels) {
      auto target = add(closure(std::move(kernel)));
      lr.transitions[s][x] = target;
    }
  }
  return lr;
}

std::vector<StateId> pw_push(std::vector<StateId> stack, StateId state) {
  auto it = std::find(stack.begin(), stack.end(), state);
  if (it != stack.end())
    stack.erase(it + 1, stack.end());
  else
    stack.push_back(state);
  return stack;
}

namespace {

using Push = std::function<std::vector<StateId>(const std::vector<StateId>&, StateId)>;

// Explores stack classes to a fixpoint. Reductions walk back along the push
// edges recorded so far, so the exploration repeats until no class or push
// edge is added.
void explore(ComponentTask& task, const Push& push) {
  const auto& view = task.component;
  auto& b = task.builder;
  const auto lr = build_lr0(view, task.entry, b.state_cap());

  std::map<std::vector<StateId>, std::size_t> index;
  std::vector<std::vector<StateId>> classes;
  std::vector<StateId> state_of;
  std::vector<std::set<std::size_t>> preds;
  auto get = [&](std::vector<StateId> c) {
    if (auto it = index.find(c); it != index.end())
      return it->second;
    auto id = classes.size();
    index.emplace(c, id);
    classes.push_back(std::move(c));
    state_of.push_back(b.add_state());
    preds.emplace_back();
    return id;
  };
  bool changed = false;
  auto push_edge = [&](std::size_t from, StateId lr_state) {
    auto target = get(push(classes[from], lr_state));
    if (preds[target].insert(from).second)
      changed = true;
    return target;
  };
  auto walk_back = [&](std::size_t from, std::size_t steps) {
    std::set<std::size_t> frontier{from};
    for (std::size_t k = 0; k < steps; ++k) {
      std::set<std::size_t> next;
      for (auto c : frontier)
        next.insert(preds[c].begin(), preds[c].end());
      frontier = std::move(next);
    }
    return frontier;
  };

  const auto initial = get({lr.initial});
  std::set<std::tuple<std::size_t, std::optional<SymbolId>, std::size_t>> edges;
  std::set<std::size_t> accepting;
  do {
    changed = false;
    for (std::size_t c = 0; c < classes.size(); ++c) {
      const auto top = classes[c].back();
      for (auto& [x, target] : lr.transitions[top])
        if (!lr.is_nonterminal(x))
          edges.insert({c, x, push_edge(c, target)});
      for (auto& it : lr.states[top]) {
        const auto& r = lr.rules[it.rule];
        if (it.dot != r.rhs.size())
          continue;
        const auto origins = walk_back(c, r.rhs.size());
        if (it.rule == lr.augmented_rule()) {
          if (origins.count(initial))
            accepting.insert(c);
          continue;
        }
        for (auto p : origins)
          if (auto g = lr.go(classes[p].back(), r.lhs))
            edges.insert({c, std::nullopt, push_edge(p, *g)});
      }
    }
  } while (changed);

  b.add_epsilon(task.from, state_of[initial]);
  for (auto& [from, label, to] : edges) {
    if (label)
      b.add(state_of[from], task.atom(*label), state_of[to]);
    else
      b.add_epsilon(state_of[from], state_of[to]);
  }
  for (auto c : accepting)
    b.add_epsilon(state_of[c], task.to);
}

CompactAutomaton compile_with(const Grammar& g, const ComponentStrategy& strategy,
                              const BuildOptions& options) {
  return make_fa(g, analyze_recursion(g), strategy, options);
}

} // namespace

ComponentStrategy lr_strategy(int depth) {
  if (depth < 1)
    throw Error("lr: depth must be at least 1");
  const auto keep = static_cast<std::size_t>(depth);
  return [keep](ComponentTask& task) {
    explore(task, [keep](const std::vector<StateId>& stack, StateId s) {
      std::vector<StateId> out = stack;
      out.push_back(s);
      if (out.size() > keep)
        out.erase(out.begin(), out.end() - static_cast<std::ptrdiff_t>(keep));
      return out;
    });
  };
}

CompactAutomaton lr_compile(const Grammar& g, int depth, const BuildOptions& options) {
  return compile_with(g, lr_strategy(depth), options);
}

ComponentStrategy pw_strategy() {
  return [](ComponentTask& task) {
    explore(task, [](const std::vector<StateId>& stack, StateId s) { return pw_push(stack, s); });
  };
}

CompactAutomaton pw_compile(const Grammar& g, const BuildOptions& options) {
  return compile_with(g, pw_strategy(), options);
}

} // namespace regapprox
