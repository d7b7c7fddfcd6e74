#include "regapprox/fsa.hpp"

#include "regapprox/errors.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace regapprox {

namespace {

constexpr std::string_view kSubrefPrefix = "@nt:";

struct VectorHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v)
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Symbol keys let subref labels take part in determinization as ordinary
// symbols; terminals never start with '@', so the encoding is unambiguous.
std::string label_key(const Label& l) {
  return l.is_subref() ? std::string(kSubrefPrefix) + l.symbol : l.symbol;
}

Label label_from_key(const std::string& key) {
  if (key.rfind(kSubrefPrefix, 0) == 0)
    return Label::subref(key.substr(kSubrefPrefix.size()));
  return Label::terminal(key);
}

Dfa determinize_keys(const Nfa& n, std::size_t cap) {
  std::vector<std::string> alphabet;
  for (const auto& t : n.transitions)
    if (!t.label.is_epsilon())
      alphabet.push_back(label_key(t.label));
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());

  std::vector<std::vector<StateId>> eps(n.state_count);
  std::vector<std::vector<std::pair<std::uint32_t, StateId>>> moves(n.state_count);
  for (const auto& t : n.transitions) {
    if (t.label.is_epsilon()) {
      eps[t.from].push_back(t.to);
    } else {
      auto sym = static_cast<std::uint32_t>(
          std::lower_bound(alphabet.begin(), alphabet.end(), label_key(t.label)) -
          alphabet.begin());
      moves[t.from].emplace_back(sym, t.to);
    }
  }
  std::vector<bool> is_final(n.state_count, false);
  for (auto f : n.finals)
    is_final[f] = true;

  std::vector<char> mark(n.state_count, 0);
  auto closure = [&](std::vector<StateId> set) {
    std::vector<StateId> stack = set;
    for (auto s : set)
      mark[s] = 1;
    while (!stack.empty()) {
      auto s = stack.back();
      stack.pop_back();
      for (auto t : eps[s])
        if (!mark[t]) {
          mark[t] = 1;
          set.push_back(t);
          stack.push_back(t);
        }
    }
    for (auto s : set)
      mark[s] = 0;
    std::sort(set.begin(), set.end());
    return set;
  };

  Dfa d;
  d.alphabet = alphabet;
  std::unordered_map<std::vector<StateId>, StateId, VectorHash> ids;
  std::vector<std::vector<StateId>> subsets;

  auto intern = [&](std::vector<StateId> set) {
    auto [it, inserted] = ids.emplace(set, static_cast<StateId>(subsets.size()));
    if (inserted) {
      if (subsets.size() >= cap)
        throw StateCapExceeded("determinization", cap);
      bool fin = std::any_of(set.begin(), set.end(), [&](StateId s) { return is_final[s]; });
      d.finals.push_back(fin);
      d.edges.emplace_back();
      subsets.push_back(std::move(set));
    }
    return it->second;
  };

  d.initial = intern(closure({n.initial}));
  std::vector<std::pair<std::uint32_t, StateId>> pending;
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    pending.clear();
    for (auto s : subsets[i])
      pending.insert(pending.end(), moves[s].begin(), moves[s].end());
    std::sort(pending.begin(), pending.end());
    std::size_t k = 0;
    while (k < pending.size()) {
      auto sym = pending[k].first;
      std::vector<StateId> targets;
      for (; k < pending.size() && pending[k].first == sym; ++k)
        if (targets.empty() || targets.back() != pending[k].second)
          targets.push_back(pending[k].second);
      auto target = intern(closure(std::move(targets)));
      d.edges[i].push_back({sym, target});
    }
  }
  return d;
}

Nfa keyed_dfa_to_nfa(const Dfa& d) {
  Nfa n;
  n.state_count = d.state_count();
  n.initial = d.initial;
  for (StateId s = 0; s < d.state_count(); ++s) {
    if (d.finals[s])
      n.finals.push_back(s);
    for (const auto& e : d.edges[s])
      n.transitions.push_back({s, label_from_key(d.alphabet[e.symbol]), e.target});
  }
  std::sort(n.transitions.begin(), n.transitions.end());
  return n;
}

} // namespace

std::string Label::token() const {
  switch (kind) {
  case Kind::epsilon:
    return "@eps";
  case Kind::subref:
    return std::string(kSubrefPrefix) + symbol;
  case Kind::terminal:
    break;
  }
  return symbol;
}

std::size_t Nfa::subref_count() const {
  return static_cast<std::size_t>(std::count_if(
      transitions.begin(), transitions.end(), [](const Transition& t) { return t.label.is_subref(); }));
}

NfaBuilder::NfaBuilder(std::size_t state_cap, std::string where)
    : cap_(state_cap), where_(std::move(where)) {}

StateId NfaBuilder::add_state() {
  if (state_count_ >= cap_)
    throw StateCapExceeded(where_, cap_);
  return static_cast<StateId>(state_count_++);
}

void NfaBuilder::add(StateId from, Label label, StateId to) {
  transitions_.push_back({from, std::move(label), to});
}

Nfa NfaBuilder::finish() && {
  std::vector<bool> used(state_count_, false);
  if (state_count_ == 0)
    used.push_back(true), state_count_ = 1;
  used[initial_] = true;
  for (auto f : finals_)
    used[f] = true;
  for (const auto& t : transitions_)
    used[t.from] = used[t.to] = true;
  std::vector<StateId> remap(state_count_, 0);
  StateId next = 0;
  for (std::size_t s = 0; s < state_count_; ++s)
    if (used[s])
      remap[s] = next++;

  Nfa n;
  n.state_count = next;
  n.initial = remap[initial_];
  for (auto f : finals_)
    n.finals.push_back(remap[f]);
  std::sort(n.finals.begin(), n.finals.end());
  n.finals.erase(std::unique(n.finals.begin(), n.finals.end()), n.finals.end());
  n.transitions = std::move(transitions_);
  for (auto& t : n.transitions) {
    t.from = remap[t.from];
    t.to = remap[t.to];
  }
  std::sort(n.transitions.begin(), n.transitions.end());
  n.transitions.erase(std::unique(n.transitions.begin(), n.transitions.end()), n.transitions.end());
  return n;
}

std::size_t Dfa::transition_count() const {
  std::size_t n = 0;
  for (const auto& e : edges)
    n += e.size();
  return n;
}

std::optional<StateId> Dfa::step(StateId from, std::uint32_t symbol) const {
  const auto& out = edges[from];
  auto it = std::lower_bound(out.begin(), out.end(), symbol,
                             [](const DfaEdge& e, std::uint32_t s) { return e.symbol < s; });
  if (it != out.end() && it->symbol == symbol)
    return it->target;
  return std::nullopt;
}

std::optional<std::uint32_t> Dfa::symbol_index(std::string_view s) const {
  auto it = std::lower_bound(alphabet.begin(), alphabet.end(), s);
  if (it != alphabet.end() && *it == s)
    return static_cast<std::uint32_t>(it - alphabet.begin());
  return std::nullopt;
}

void CompactAutomaton::validate() const {
  if (parts.empty())
    throw Error("compact automaton has no subautomata");
  std::map<std::string, std::size_t> seen;
  for (std::size_t q = 0; q < parts.size(); ++q) {
    for (const auto& t : parts[q].nfa.transitions)
      if (t.label.is_subref() && !seen.count(t.label.symbol))
        throw Error("subautomaton '" + parts[q].name + "' references '" + t.label.symbol +
                    "' which is not an earlier subautomaton");
    if (!seen.emplace(parts[q].name, q).second)
      throw Error("duplicate subautomaton name '" + parts[q].name + "'");
  }
}

Dfa determinize(const Nfa& n, std::size_t state_cap) {
  if (n.has_subrefs())
    throw Error("determinize: automaton contains subautomaton references");
  return determinize_keys(n, state_cap);
}

Dfa minimize(const Dfa& d) {
  const auto n = d.state_count();
  // Trim to states that are reachable and can reach a final state.
  std::vector<bool> reach(n, false), coreach(n, false);
  std::vector<StateId> stack{d.initial};
  reach[d.initial] = true;
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (const auto& e : d.edges[s])
      if (!reach[e.target]) {
        reach[e.target] = true;
        stack.push_back(e.target);
      }
  }
  std::vector<std::vector<StateId>> preds(n);
  for (StateId s = 0; s < n; ++s)
    for (const auto& e : d.edges[s])
      preds[e.target].push_back(s);
  for (StateId s = 0; s < n; ++s)
    if (d.finals[s] && reach[s]) {
      coreach[s] = true;
      stack.push_back(s);
    }
  while (!stack.empty()) {
    auto s = stack.back();
    stack.pop_back();
    for (auto p : preds[s])
      if (!coreach[p] && reach[p]) {
        coreach[p] = true;
        stack.push_back(p);
      }
  }

  if (!coreach[d.initial]) {
    Dfa empty;
    empty.finals.push_back(false);
    empty.edges.emplace_back();
    return empty;
  }

  std::vector<bool> live(n, false);
  for (StateId s = 0; s < n; ++s)
    live[s] = reach[s] && coreach[s];

  // Moore refinement on the trimmed partial automaton; a missing edge acts as
  // a transition to the (implicit) dead class.
  std::vector<std::int64_t> cls(n, -1);
  for (StateId s = 0; s < n; ++s)
    if (live[s])
      cls[s] = d.finals[s] ? 1 : 0;
  std::size_t classes = 0;
  for (;;) {
    std::map<std::vector<std::int64_t>, std::int64_t> sig_ids;
    std::vector<std::int64_t> next(n, -1);
    std::vector<std::int64_t> sig;
    for (StateId s = 0; s < n; ++s) {
      if (!live[s])
        continue;
      sig.clear();
      sig.push_back(cls[s]);
      for (const auto& e : d.edges[s])
        if (live[e.target]) {
          sig.push_back(e.symbol);
          sig.push_back(cls[e.target]);
        }
      auto [it, _] = sig_ids.emplace(sig, static_cast<std::int64_t>(sig_ids.size()));
      next[s] = it->second;
    }
    bool stable = sig_ids.size() == classes;
    classes = sig_ids.size();
    cls = std::move(next);
    if (stable)
      break;
  }

  // Representative edges per class, then breadth-first canonical numbering.
  std::vector<std::vector<std::pair<std::uint32_t, std::int64_t>>> class_edges(classes);
  std::vector<bool> class_final(classes, false), filled(classes, false);
  for (StateId s = 0; s < n; ++s) {
    if (!live[s] || filled[cls[s]])
      continue;
    filled[cls[s]] = true;
    class_final[cls[s]] = d.finals[s];
    for (const auto& e : d.edges[s])
      if (live[e.target])
        class_edges[cls[s]].emplace_back(e.symbol, cls[e.target]);
  }

  std::vector<bool> used_symbol(d.alphabet.size(), false);
  for (const auto& ce : class_edges)
    for (const auto& [sym, _] : ce)
      used_symbol[sym] = true;
  std::vector<std::uint32_t> sym_remap(d.alphabet.size(), 0);
  Dfa out;
  for (std::uint32_t a = 0; a < d.alphabet.size(); ++a)
    if (used_symbol[a]) {
      sym_remap[a] = static_cast<std::uint32_t>(out.alphabet.size());
      out.alphabet.push_back(d.alphabet[a]);
    }

  std::vector<std::int64_t> order(classes, -1);
  std::deque<std::int64_t> queue{cls[d.initial]};
  order[cls[d.initial]] = 0;
  std::vector<std::int64_t> by_order{cls[d.initial]};
  while (!queue.empty()) {
    auto c = queue.front();
    queue.pop_front();
    for (const auto& [sym, t] : class_edges[c])
      if (order[t] < 0) {
        order[t] = static_cast<std::int64_t>(by_order.size());
        by_order.push_back(t);
        queue.push_back(t);
      }
  }
  out.initial = 0;
  out.finals.resize(by_order.size());
  out.edges.resize(by_order.size());
  for (std::size_t i = 0; i < by_order.size(); ++i) {
    auto c = by_order[i];
    out.finals[i] = class_final[c];
    for (const auto& [sym, t] : class_edges[c])
      out.edges[i].push_back({sym_remap[sym], static_cast<StateId>(order[t])});
  }
  return out;
}

Equivalence equivalent(const Dfa& a, const Dfa& b) {
  std::vector<std::string> alphabet = a.alphabet;
  alphabet.insert(alphabet.end(), b.alphabet.begin(), b.alphabet.end());
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  auto local = [&](const Dfa& d) {
    std::vector<std::optional<std::uint32_t>> m;
    for (const auto& s : alphabet)
      m.push_back(d.symbol_index(s));
    return m;
  };
  const auto la = local(a), lb = local(b);

  using Pair = std::pair<std::int64_t, std::int64_t>; // -1 is the dead state
  struct Visit {
    std::size_t parent;
    std::uint32_t symbol;
  };
  std::map<Pair, std::size_t> seen;
  std::vector<Pair> nodes;
  std::vector<Visit> visits;
  auto accepting = [](const Dfa& d, std::int64_t s) { return s >= 0 && d.finals[s]; };
  auto advance = [](const Dfa& d, std::int64_t s, const std::optional<std::uint32_t>& sym) {
    if (s < 0 || !sym)
      return std::int64_t{-1};
    auto t = d.step(static_cast<StateId>(s), *sym);
    return t ? static_cast<std::int64_t>(*t) : std::int64_t{-1};
  };

  nodes.push_back({a.initial, b.initial});
  visits.push_back({0, 0});
  seen.emplace(nodes[0], 0);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    auto [p, q] = nodes[i];
    if (accepting(a, p) != accepting(b, q)) {
      std::vector<std::string> witness;
      for (std::size_t k = i; k != 0; k = visits[k].parent)
        witness.push_back(alphabet[visits[k].symbol]);
      std::reverse(witness.begin(), witness.end());
      return {false, std::move(witness)};
    }
    for (std::uint32_t s = 0; s < alphabet.size(); ++s) {
      Pair next{advance(a, p, la[s]), advance(b, q, lb[s])};
      if (next.first < 0 && next.second < 0)
        continue;
      if (seen.emplace(next, nodes.size()).second) {
        nodes.push_back(next);
        visits.push_back({i, s});
      }
    }
  }
  return {true, std::nullopt};
}

Nfa to_nfa(const Dfa& d) {
  Nfa n;
  n.state_count = d.state_count();
  n.initial = d.initial;
  for (StateId s = 0; s < d.state_count(); ++s) {
    if (d.finals[s])
      n.finals.push_back(s);
    for (const auto& e : d.edges[s])
      n.transitions.push_back({s, Label::terminal(d.alphabet[e.symbol]), e.target});
  }
  std::sort(n.transitions.begin(), n.transitions.end());
  return n;
}

Dfa expand(const CompactAutomaton& c, std::size_t state_cap) {
  c.validate();
  std::map<std::string, Dfa> stored;
  const Dfa* result = nullptr;
  for (const auto& part : c.parts) {
    try {
      Nfa current = part.nfa;
      // Step 1: adopt the minimized copy if it has fewer subref transitions.
      if (current.has_subrefs()) {
        auto copy = keyed_dfa_to_nfa(minimize(determinize_keys(current, state_cap)));
        if (copy.subref_count() < current.subref_count())
          current = std::move(copy);
      }
      // Step 2: splice stored lower automata through epsilon transitions.
      Nfa spliced;
      spliced.initial = current.initial;
      spliced.finals = current.finals;
      std::size_t states = current.state_count;
      for (const auto& t : current.transitions) {
        if (!t.label.is_subref()) {
          spliced.transitions.push_back(t);
          continue;
        }
        const Dfa& sub = stored.at(t.label.symbol);
        auto offset = static_cast<StateId>(states);
        states += sub.state_count();
        if (states > state_cap)
          throw StateCapExceeded("substitution", state_cap);
        spliced.transitions.push_back({t.from, Label::epsilon(), offset + sub.initial});
        for (StateId s = 0; s < sub.state_count(); ++s) {
          if (sub.finals[s])
            spliced.transitions.push_back({offset + s, Label::epsilon(), t.to});
          for (const auto& e : sub.edges[s])
            spliced.transitions.push_back(
                {offset + s, Label::terminal(sub.alphabet[e.symbol]), offset + e.target});
        }
      }
      spliced.state_count = states;
      // Step 3: determinize, minimize, store.
      auto [it, _] = stored.insert_or_assign(part.name, minimize(determinize(spliced, state_cap)));
      result = &it->second;
    } catch (const StateCapExceeded& e) {
      throw StateCapExceeded("subautomaton '" + part.name + "' (" + e.where() + ")", e.cap());
    }
  }
  return *result;
}

bool accepts(const Dfa& d, std::span<const std::string> sentence) {
  StateId s = d.initial;
  for (const auto& tok : sentence) {
    auto sym = d.symbol_index(tok);
    if (!sym)
      return false;
    auto next = d.step(s, *sym);
    if (!next)
      return false;
    s = *next;
  }
  return d.finals[s];
}

std::size_t compact_line_count(const CompactAutomaton& c) {
  std::size_t total = 0;
  for (const auto& p : c.parts)
    total += p.nfa.transitions.size();
  return total;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

void write_block(std::ostringstream& out, std::string_view name, const Nfa& n) {
  out << "--automaton " << name << "\n";
  out << "start: " << n.initial << "\n";
  for (const auto& t : n.transitions)
    out << t.from << " " << t.to << " " << t.label.token() << "\n";
  for (auto f : n.finals)
    out << "final: " << f << "\n";
}

StateId parse_state(const std::string& tok, std::size_t line) {
  if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
    throw ParseError(line, "invalid state id '" + tok + "'");
  try {
    auto v = std::stoull(tok);
    if (v >= 0xFFFFFFFFULL)
      throw ParseError(line, "state id out of range");
    return static_cast<StateId>(v);
  } catch (const std::out_of_range&) {
    throw ParseError(line, "state id out of range");
  }
}

Label parse_label(const std::string& tok, std::size_t line) {
  if (tok == "@eps")
    return Label::epsilon();
  if (tok.rfind(kSubrefPrefix, 0) == 0) {
    auto name = tok.substr(kSubrefPrefix.size());
    if (name.empty())
      throw ParseError(line, "empty subautomaton reference");
    return Label::subref(name);
  }
  if (tok[0] == '@' || tok[0] == '#')
    throw ParseError(line, "invalid label '" + tok + "'");
  return Label::terminal(tok);
}

} // namespace

std::string serialize(const Dfa& d, std::string_view name) {
  std::ostringstream out;
  write_block(out, name, to_nfa(d));
  return out.str();
}

std::string serialize(const CompactAutomaton& c) {
  std::ostringstream out;
  for (const auto& p : c.parts)
    write_block(out, p.name, p.nfa);
  return out.str();
}

CompactAutomaton parse_automaton(std::string_view text) {
  CompactAutomaton c;
  std::map<std::string, std::size_t> names;
  bool has_start = false;
  std::size_t max_state = 0;

  auto close_block = [&](std::size_t line) {
    if (c.parts.empty())
      return;
    auto& n = c.parts.back().nfa;
    if (!has_start)
      throw ParseError(line, "subautomaton '" + c.parts.back().name + "' has no start line");
    n.state_count = max_state + 1;
    std::sort(n.transitions.begin(), n.transitions.end());
    n.transitions.erase(std::unique(n.transitions.begin(), n.transitions.end()), n.transitions.end());
    std::sort(n.finals.begin(), n.finals.end());
    n.finals.erase(std::unique(n.finals.begin(), n.finals.end()), n.finals.end());
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;)
      tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#')
      continue;
    if (tok[0] == "--automaton") {
      if (tok.size() != 2)
        throw ParseError(line_no, "expected '--automaton NAME'");
      close_block(line_no);
      if (names.count(tok[1]))
        throw ParseError(line_no, "duplicate subautomaton name '" + tok[1] + "'");
      names.emplace(tok[1], c.parts.size());
      c.parts.push_back({tok[1], {}});
      has_start = false;
      max_state = 0;
      continue;
    }
    if (c.parts.empty())
      throw ParseError(line_no, "content before the first '--automaton' line");
    auto& n = c.parts.back().nfa;
    if (tok[0] == "start:" || tok[0] == "final:") {
      if (tok.size() != 2)
        throw ParseError(line_no, "expected '" + tok[0] + " ID'");
      auto s = parse_state(tok[1], line_no);
      max_state = std::max<std::size_t>(max_state, s);
      if (tok[0] == "final:") {
        n.finals.push_back(s);
      } else {
        if (has_start)
          throw ParseError(line_no, "duplicate start line");
        has_start = true;
        n.initial = s;
      }
      continue;
    }
    if (tok.size() != 3)
      throw ParseError(line_no, "expected 'SRC DST LABEL'");
    auto from = parse_state(tok[0], line_no);
    auto to = parse_state(tok[1], line_no);
    auto label = parse_label(tok[2], line_no);
    if (label.is_subref() && (!names.count(label.symbol) || names[label.symbol] + 1 == c.parts.size()))
      throw ParseError(line_no, "reference to undeclared subautomaton '" + label.symbol + "'");
    max_state = std::max<std::size_t>(max_state, std::max(from, to));
    n.transitions.push_back({from, std::move(label), to});
  }
  close_block(line_no);
  if (c.parts.empty())
    throw ParseError(line_no, "no automaton blocks");
  return c;
}

Dfa parse_dfa(std::string_view text) {
  auto c = parse_automaton(text);
  if (c.parts.size() != 1)
    throw ParseError(0, "a DFA file holds exactly one block");
  const Nfa& n = c.parts[0].nfa;
  Dfa d;
  for (const auto& t : n.transitions) {
    if (t.label.kind != Label::Kind::terminal)
      throw ParseError(0, "DFA transitions must be labelled by terminals");
    d.alphabet.push_back(t.label.symbol);
  }
  std::sort(d.alphabet.begin(), d.alphabet.end());
  d.alphabet.erase(std::unique(d.alphabet.begin(), d.alphabet.end()), d.alphabet.end());
  d.initial = n.initial;
  d.finals.assign(n.state_count, false);
  d.edges.resize(n.state_count);
  for (auto f : n.finals)
    d.finals[f] = true;
  for (const auto& t : n.transitions)
    d.edges[t.from].push_back({*d.symbol_index(t.label.symbol), t.to});
  for (auto& out : d.edges) {
    std::sort(out.begin(), out.end(),
              [](const DfaEdge& x, const DfaEdge& y) { return x.symbol < y.symbol; });
    for (std::size_t i = 1; i < out.size(); ++i)
      if (out[i].symbol == out[i - 1].symbol)
        throw ParseError(0, "automaton is not deterministic");
  }
  return d;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace regapprox
