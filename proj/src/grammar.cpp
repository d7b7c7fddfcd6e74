#include "regapprox/grammar.hpp"

#include "regapprox/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace regapprox {

SymbolId Grammar::intern(std::string_view name, bool terminal) {
  if (auto it = index_.find(std::string(name)); it != index_.end()) {
    if (terminal_[it->second] != terminal)
      throw Error("symbol '" + std::string(name) + "' used both as terminal and nonterminal");
    return it->second;
  }
  auto id = static_cast<SymbolId>(names_.size());
  names_.emplace_back(name);
  terminal_.push_back(terminal);
  index_.emplace(names_.back(), id);
  return id;
}

SymbolId Grammar::terminal(std::string_view name) { return intern(name, true); }

SymbolId Grammar::nonterminal(std::string_view name) { return intern(name, false); }

SymbolId Grammar::fresh_nonterminal(std::string base) {
  while (index_.count(base))
    base += '\'';
  return intern(base, false);
}

void Grammar::add_rule(SymbolId lhs, std::vector<SymbolId> rhs) {
  if (lhs >= names_.size() || terminal_[lhs])
    throw Error("rule lhs must be a nonterminal");
  for (auto s : rhs)
    if (s >= names_.size())
      throw Error("rule rhs references an unknown symbol");
  rules_.push_back(Rule{lhs, std::move(rhs)});
}

void Grammar::set_start(SymbolId start) {
  if (start >= names_.size() || terminal_[start])
    throw Error("start symbol must be a nonterminal");
  start_ = start;
}

std::optional<SymbolId> Grammar::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end())
    return it->second;
  return std::nullopt;
}

std::vector<SymbolId> Grammar::terminals() const {
  std::vector<SymbolId> out;
  for (SymbolId s = 0; s < names_.size(); ++s)
    if (terminal_[s])
      out.push_back(s);
  return out;
}

std::vector<SymbolId> Grammar::nonterminals() const {
  std::vector<SymbolId> out;
  for (SymbolId s = 0; s < names_.size(); ++s)
    if (!terminal_[s])
      out.push_back(s);
  return out;
}

Grammar Grammar::symbols_only() const {
  Grammar out = *this;
  out.rules_.clear();
  return out;
}

std::vector<std::vector<std::size_t>> Grammar::rules_by_lhs() const {
  std::vector<std::vector<std::size_t>> out(names_.size());
  for (std::size_t i = 0; i < rules_.size(); ++i)
    out[rules_[i].lhs].push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    if (i >= line.size())
      break;
    if (line[i] == '#')
      break;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    tokens.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

struct RawRule {
  std::string lhs;
  std::vector<std::string> rhs;
};

} // namespace

Grammar parse_grammar(std::string_view text) {
  std::vector<RawRule> raw;
  std::optional<std::string> start;
  std::size_t start_line = 0;
  std::set<std::string> forced_terminals;
  std::vector<std::string> order; // symbol names by first occurrence
  std::unordered_set<std::string> seen;
  auto note = [&](const std::string& s) {
    if (seen.insert(s).second)
      order.push_back(s);
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto tokens = tokenize(line);
    if (tokens.empty())
      continue;

    if (tokens[0][0] == '@') {
      if (tokens[0] == "@start") {
        if (tokens.size() != 2)
          throw ParseError(line_no, "@start takes exactly one symbol");
        if (start)
          throw ParseError(line_no, "duplicate @start directive");
        start = tokens[1];
        start_line = line_no;
      } else if (tokens[0] == "@terminals") {
        forced_terminals.insert(tokens.begin() + 1, tokens.end());
      } else {
        throw ParseError(line_no, "unknown directive '" + tokens[0] + "'");
      }
      continue;
    }

    if (tokens.size() < 2 || tokens[1] != "->")
      throw ParseError(line_no, "expected 'LHS -> alternatives'");
    const auto& lhs = tokens[0];
    if (lhs == "|" || lhs == "->")
      throw ParseError(line_no, "invalid left-hand side '" + lhs + "'");
    note(lhs);

    RawRule current{lhs, {}};
    for (std::size_t i = 2; i < tokens.size(); ++i) {
      const auto& tok = tokens[i];
      if (tok == "|") {
        raw.push_back(std::move(current));
        current = RawRule{lhs, {}};
      } else if (tok == "@eps") {
        continue;
      } else if (tok[0] == '@' || tok == "->") {
        throw ParseError(line_no, "unexpected token '" + tok + "'");
      } else {
        note(tok);
        current.rhs.push_back(tok);
      }
    }
    raw.push_back(std::move(current));
  }

  if (raw.empty())
    throw ParseError(line_no, "grammar has no rules");

  std::unordered_set<std::string> lhs_names;
  for (const auto& r : raw)
    lhs_names.insert(r.lhs);
  for (const auto& t : forced_terminals)
    if (lhs_names.count(t))
      throw ParseError(0, "symbol '" + t + "' is declared terminal but has rules");

  std::string start_name = raw.front().lhs;
  if (start) {
    if (!seen.count(*start))
      throw ParseError(start_line, "unknown start symbol '" + *start + "'");
    if (forced_terminals.count(*start))
      throw ParseError(start_line, "start symbol '" + *start + "' is declared terminal");
    start_name = *start;
  }

  Grammar g;
  for (const auto& s : order) {
    bool nonterminal = lhs_names.count(s) || s == start_name;
    if (nonterminal)
      g.nonterminal(s);
    else
      g.terminal(s);
  }
  for (const auto& t : forced_terminals)
    if (!g.find(t))
      g.terminal(t);
  for (const auto& r : raw) {
    std::vector<SymbolId> rhs;
    rhs.reserve(r.rhs.size());
    for (const auto& s : r.rhs)
      rhs.push_back(*g.find(s));
    g.add_rule(*g.find(r.lhs), std::move(rhs));
  }
  g.set_start(*g.find(start_name));
  return g;
}

Grammar read_grammar_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error("cannot open grammar file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grammar(buf.str());
}

std::string format_rule(const Grammar& g, const Rule& r) {
  std::string out = g.name(r.lhs) + " ->";
  if (r.rhs.empty())
    out += " @eps";
  for (auto s : r.rhs)
    out += " " + g.name(s);
  return out;
}

std::string format_item(const Grammar& g, const Item& item) {
  const auto& r = g.rules().at(item.rule);
  std::string out = "[" + g.name(r.lhs) + " ->";
  for (std::size_t k = 0; k <= r.rhs.size(); ++k) {
    if (k == item.dot)
      out += " .";
    if (k < r.rhs.size())
      out += " " + g.name(r.rhs[k]);
  }
  return out + "]";
}

std::string format_grammar(const Grammar& g) {
  std::string out = "@start " + g.name(g.start()) + "\n";
  for (const auto& r : g.rules())
    out += format_rule(g, r) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Reduction

Grammar reduce(const Grammar& g) {
  const auto& rules = g.rules();
  std::vector<bool> productive(g.symbol_count(), false);
  for (SymbolId s = 0; s < g.symbol_count(); ++s)
    productive[s] = g.is_terminal(s);

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& r : rules) {
      if (productive[r.lhs])
        continue;
      if (std::all_of(r.rhs.begin(), r.rhs.end(), [&](SymbolId s) { return productive[s]; })) {
        productive[r.lhs] = true;
        changed = true;
      }
    }
  }

  std::vector<bool> keep(rules.size(), false);
  for (std::size_t i = 0; i < rules.size(); ++i)
    keep[i] = productive[rules[i].lhs] &&
              std::all_of(rules[i].rhs.begin(), rules[i].rhs.end(),
                          [&](SymbolId s) { return productive[s]; });

  std::vector<std::vector<std::size_t>> by_lhs(g.symbol_count());
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (keep[i])
      by_lhs[rules[i].lhs].push_back(i);

  std::vector<bool> reachable(g.symbol_count(), false);
  std::vector<SymbolId> stack{g.start()};
  reachable[g.start()] = true;
  while (!stack.empty()) {
    auto a = stack.back();
    stack.pop_back();
    for (auto i : by_lhs[a])
      for (auto s : rules[i].rhs)
        if (!reachable[s]) {
          reachable[s] = true;
          if (!g.is_terminal(s))
            stack.push_back(s);
        }
  }

  std::vector<bool> used(g.symbol_count(), false);
  used[g.start()] = true;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    keep[i] = keep[i] && reachable[rules[i].lhs];
    if (keep[i]) {
      used[rules[i].lhs] = true;
      for (auto s : rules[i].rhs)
        used[s] = true;
    }
  }

  Grammar out;
  std::vector<SymbolId> remap(g.symbol_count(), 0);
  for (SymbolId s = 0; s < g.symbol_count(); ++s)
    if (used[s])
      remap[s] = g.is_terminal(s) ? out.terminal(g.name(s)) : out.nonterminal(g.name(s));
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (!keep[i])
      continue;
    std::vector<SymbolId> rhs;
    rhs.reserve(rules[i].rhs.size());
    for (auto s : rules[i].rhs)
      rhs.push_back(remap[s]);
    out.add_rule(remap[rules[i].lhs], std::move(rhs));
  }
  out.set_start(remap[g.start()]);
  return out;
}

// ---------------------------------------------------------------------------
// Recursion analysis

std::string_view to_string(Recursion r) {
  switch (r) {
  case Recursion::left:
    return "left";
  case Recursion::right:
    return "right";
  case Recursion::self:
    return "self";
  case Recursion::cyclic:
    return "cyclic";
  }
  return "?";
}

bool RecursionAnalysis::is_self_embedding() const {
  return std::find(classification.begin(), classification.end(), Recursion::self) !=
         classification.end();
}

std::optional<std::size_t> RecursionAnalysis::component_index(SymbolId s) const {
  if (s < component_of.size() && component_of[s] >= 0)
    return static_cast<std::size_t>(component_of[s]);
  return std::nullopt;
}

namespace {

// Iterative Tarjan over the "occurs in a rhs of" graph.
std::vector<std::vector<SymbolId>>
strongly_connected(const std::vector<std::vector<SymbolId>>& succ) {
  const auto n = succ.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<SymbolId> stack;
  std::vector<std::vector<SymbolId>> out;
  int counter = 0;

  struct Frame {
    SymbolId v;
    std::size_t next;
  };
  for (SymbolId root = 0; root < n; ++root) {
    if (index[root] >= 0)
      continue;
    std::vector<Frame> frames{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      auto& f = frames.back();
      if (f.next < succ[f.v].size()) {
        auto w = succ[f.v][f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      auto v = f.v;
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<SymbolId> scc;
        SymbolId w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          scc.push_back(w);
        } while (w != v);
        out.push_back(std::move(scc));
      }
    }
  }
  return out;
}

} // namespace

RecursionAnalysis analyze_recursion(const Grammar& g) {
  const auto n = g.symbol_count();
  std::vector<std::vector<SymbolId>> succ(n);
  std::vector<bool> self_loop(n, false);
  for (const auto& r : g.rules())
    for (auto s : r.rhs)
      if (!g.is_terminal(s)) {
        succ[r.lhs].push_back(s);
        if (s == r.lhs)
          self_loop[s] = true;
      }
  for (auto& v : succ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  RecursionAnalysis ra;
  ra.component_of.assign(n, -1);
  auto sccs = strongly_connected(succ);
  std::vector<std::vector<SymbolId>> comps;
  for (auto& scc : sccs) {
    if (scc.size() == 1 && !self_loop[scc[0]])
      continue;
    std::sort(scc.begin(), scc.end());
    comps.push_back(std::move(scc));
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  for (std::size_t i = 0; i < comps.size(); ++i)
    for (auto s : comps[i]) {
      ra.component_of[s] = static_cast<int>(i);
      ra.recursive_set.push_back(s);
    }
  std::sort(ra.recursive_set.begin(), ra.recursive_set.end());

  ra.left_generating.assign(comps.size(), false);
  ra.right_generating.assign(comps.size(), false);
  for (const auto& r : g.rules()) {
    int c = ra.component_of[r.lhs];
    if (c < 0)
      continue;
    for (std::size_t k = 0; k < r.rhs.size(); ++k) {
      if (ra.component_of[r.rhs[k]] != c)
        continue;
      if (k > 0)
        ra.left_generating[c] = true;
      if (k + 1 < r.rhs.size())
        ra.right_generating[c] = true;
    }
  }
  for (std::size_t i = 0; i < comps.size(); ++i) {
    bool l = ra.left_generating[i], r = ra.right_generating[i];
    ra.classification.push_back(l && r   ? Recursion::self
                                : l      ? Recursion::right
                                : r      ? Recursion::left
                                         : Recursion::cyclic);
  }
  ra.components = std::move(comps);
  return ra;
}

// ---------------------------------------------------------------------------
// Unfolding

Grammar unfold(const Grammar& g, int levels) {
  if (levels <= 0)
    throw Error("unfold depth must be positive");
  const auto ra = analyze_recursion(g);

  auto unfolded = [&](SymbolId s) {
    auto c = ra.component_index(s);
    return c && ra.classification[*c] == Recursion::self;
  };

  Grammar staged = g.symbols_only();
  // copies[s][h-1] is s[h]
  std::unordered_map<SymbolId, std::vector<SymbolId>> copies;
  for (SymbolId s = 0; s < g.symbol_count(); ++s)
    if (unfolded(s))
      for (int h = 1; h <= levels; ++h)
        copies[s].push_back(staged.fresh_nonterminal(g.name(s) + "[" + std::to_string(h) + "]"));

  const auto& rules = g.rules();
  // Output order: untouched lhs, level 1..j copies, originals.
  std::vector<Rule> untouched, originals;
  std::vector<std::vector<Rule>> level(levels);

  auto component = [&](SymbolId s) { return ra.component_of[s]; };

  for (const auto& r : rules) {
    const int lhs_comp = unfolded(r.lhs) ? component(r.lhs) : -1;
    // Symbols of another self component are always entered at level 1.
    auto rewrite = [&](int h) {
      Rule out_rule{r.lhs, {}};
      for (auto x : r.rhs) {
        if (!unfolded(x)) {
          out_rule.rhs.push_back(x);
        } else if (component(x) != lhs_comp) {
          out_rule.rhs.push_back(copies[x][0]);
        } else if (h > 0 && h < levels) {
          out_rule.rhs.push_back(copies[x][h]);
        } else {
          out_rule.rhs.push_back(x);
        }
      }
      return out_rule;
    };
    if (lhs_comp < 0) {
      untouched.push_back(rewrite(0));
      continue;
    }
    for (int h = 1; h <= levels; ++h) {
      auto copy = rewrite(h);
      copy.lhs = copies[r.lhs][h - 1];
      level[h - 1].push_back(std::move(copy));
    }
    originals.push_back(rewrite(0));
  }

  for (auto& r : untouched)
    staged.add_rule(r.lhs, std::move(r.rhs));
  for (auto& block : level)
    for (auto& r : block)
      staged.add_rule(r.lhs, std::move(r.rhs));
  for (auto& r : originals)
    staged.add_rule(r.lhs, std::move(r.rhs));
  staged.set_start(unfolded(g.start()) ? copies[g.start()][0] : g.start());
  return reduce(staged);
}

// ---------------------------------------------------------------------------

ComponentView::ComponentView(const Grammar& g, const RecursionAnalysis& analysis,
                             std::size_t component)
    : grammar_(&g), members_(analysis.components.at(component)),
      member_(g.symbol_count(), false) {
  for (auto s : members_)
    member_[s] = true;
  for (std::size_t i = 0; i < g.rules().size(); ++i) {
    const auto& r = g.rules()[i];
    if (member_[r.lhs]) {
      by_lhs_[r.lhs].push_back(rules_.size());
      rules_.push_back(i);
    }
  }
  for (auto s : members_)
    by_lhs_[s];
}

const std::vector<std::size_t>& ComponentView::rules_of(SymbolId member) const {
  return by_lhs_.at(member);
}

} // namespace regapprox
