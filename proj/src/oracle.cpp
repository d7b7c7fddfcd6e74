#include "regapprox/oracle.hpp"

#include "regapprox/errors.hpp"
#include "regapprox/fsa.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace regapprox {

Sentence split_sentence(std::string_view line) {
  Sentence out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok)
    out.push_back(tok);
  return out;
}

std::string join_sentence(const Sentence& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i)
      out += ' ';
    out += s[i];
  }
  return out;
}

namespace {

std::vector<bool> nullable_symbols(const Grammar& g) {
  std::vector<bool> nullable(g.symbol_count(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& r : g.rules()) {
      if (nullable[r.lhs])
        continue;
      if (std::all_of(r.rhs.begin(), r.rhs.end(), [&](SymbolId x) { return nullable[x]; })) {
        nullable[r.lhs] = true;
        changed = true;
      }
    }
  }
  return nullable;
}

struct EarleyItem {
  std::uint32_t rule;
  std::uint32_t dot;
  std::uint32_t origin;
  friend auto operator<=>(const EarleyItem&, const EarleyItem&) = default;
};

} // namespace

bool chart_member(const Grammar& g, const Sentence& s) {
  std::vector<SymbolId> input;
  for (auto& tok : s) {
    auto id = g.find(tok);
    if (!id || !g.is_terminal(*id))
      return false;
    input.push_back(*id);
  }
  const auto nullable = nullable_symbols(g);
  const auto by_lhs = g.rules_by_lhs();
  const auto& rules = g.rules();
  const auto n = input.size();

  std::vector<std::vector<EarleyItem>> chart(n + 1);
  std::vector<std::set<EarleyItem>> seen(n + 1);
  auto add = [&](std::size_t k, EarleyItem it) {
    if (seen[k].insert(it).second)
      chart[k].push_back(it);
  };
  for (auto r : by_lhs[g.start()])
    add(0, {static_cast<std::uint32_t>(r), 0, 0});

  for (std::size_t k = 0; k <= n; ++k) {
    for (std::size_t i = 0; i < chart[k].size(); ++i) {
      const auto it = chart[k][i];
      const auto& r = rules[it.rule];
      if (it.dot == r.rhs.size()) {
        // complete
        const auto lhs = r.lhs;
        for (std::size_t j = 0; j < chart[it.origin].size(); ++j) {
          const auto parent = chart[it.origin][j];
          const auto& pr = rules[parent.rule];
          if (parent.dot < pr.rhs.size() && pr.rhs[parent.dot] == lhs)
            add(k, {parent.rule, parent.dot + 1, parent.origin});
        }
        continue;
      }
      const auto x = r.rhs[it.dot];
      if (g.is_terminal(x)) {
        if (k < n && input[k] == x)
          add(k + 1, {it.rule, it.dot + 1, it.origin});
        continue;
      }
      // predict; a nullable symbol is also skipped at once
      for (auto ri : by_lhs[x])
        add(k, {static_cast<std::uint32_t>(ri), 0, static_cast<std::uint32_t>(k)});
      if (nullable[x])
        add(k, {it.rule, it.dot + 1, it.origin});
    }
  }
  for (auto& it : chart[n]) {
    const auto& r = rules[it.rule];
    if (it.origin == 0 && r.lhs == g.start() && it.dot == r.rhs.size())
      return true;
  }
  return false;
}

std::vector<Sentence> enumerate_language(const Grammar& g, std::size_t maxlen) {
  if (maxlen > kMaxEnumerationLength)
    throw Error("enumerate: maximum length is " + std::to_string(kMaxEnumerationLength));
  using Str = std::vector<SymbolId>;
  std::vector<std::set<Str>> lang(g.symbol_count());
  for (SymbolId s = 0; s < g.symbol_count(); ++s)
    if (g.is_terminal(s) && maxlen >= 1)
      lang[s].insert(Str{s});

  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& r : g.rules()) {
      std::set<Str> acc{Str{}};
      for (auto x : r.rhs) {
        std::set<Str> next;
        for (auto& u : acc)
          for (auto& v : lang[x]) {
            if (u.size() + v.size() > maxlen)
              continue;
            Str w = u;
            w.insert(w.end(), v.begin(), v.end());
            next.insert(std::move(w));
          }
        acc = std::move(next);
        if (acc.empty())
          break;
      }
      for (auto& w : acc)
        changed |= lang[r.lhs].insert(w).second;
    }
  }

  std::vector<Sentence> out;
  for (auto& w : lang[g.start()]) {
    Sentence s;
    for (auto x : w)
      s.push_back(g.name(x));
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Sentence& a, const Sentence& b) {
    if (a.size() != b.size())
      return a.size() < b.size();
    return a < b;
  });
  return out;
}

std::vector<Sentence> parse_corpus(std::string_view text) {
  std::vector<Sentence> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    out.push_back(split_sentence(text.substr(pos, end - pos)));
    pos = end + 1;
  }
  return out;
}

std::vector<Sentence> read_corpus(const std::string& path) {
  return parse_corpus(read_text_file(path));
}

} // namespace regapprox
