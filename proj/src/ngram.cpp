#include "regapprox/ngram.hpp"

#include "regapprox/errors.hpp"

#include <deque>
#include <map>

namespace regapprox {

namespace {

// Abstraction of a derived string w for order N (K = N - 1): w itself if
// |w| <= K, otherwise its K-prefix and K-suffix.
struct Sig {
  bool is_long = false;
  SymbolString head; // w, or its K-prefix
  SymbolString tail; // empty, or the K-suffix

  friend auto operator<=>(const Sig&, const Sig&) = default;
};

SymbolString first(const SymbolString& s, std::size_t k) {
  return SymbolString(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(std::min(k, s.size())));
}

SymbolString last(const SymbolString& s, std::size_t k) {
  return SymbolString(s.end() - static_cast<std::ptrdiff_t>(std::min(k, s.size())), s.end());
}

class Abstraction {
public:
  explicit Abstraction(std::size_t k) : k_(k) {}

  Sig leaf(SymbolId x) const { return make({x}); }

  Sig make(const SymbolString& w) const {
    if (w.size() <= k_)
      return Sig{false, w, {}};
    return Sig{true, first(w, k_), last(w, k_)};
  }

  // Concatenation; the N-grams that straddle the seam go to `grams`.
  Sig concat(const Sig& u, const Sig& v, std::set<SymbolString>& grams) const {
    const SymbolString& left = u.is_long ? u.tail : u.head;
    const SymbolString& right = v.head;
    SymbolString seam = left;
    seam.insert(seam.end(), right.begin(), right.end());
    const auto n = k_ + 1;
    for (std::size_t i = 0; i + n <= seam.size(); ++i)
      grams.insert(SymbolString(seam.begin() + static_cast<std::ptrdiff_t>(i),
                                seam.begin() + static_cast<std::ptrdiff_t>(i + n)));
    if (!u.is_long && !v.is_long)
      return make(seam);
    Sig out{true, {}, {}};
    if (u.is_long) {
      out.head = u.head;
    } else {
      out.head = first(seam, k_);
    }
    if (v.is_long) {
      out.tail = v.tail;
    } else {
      out.tail = last(seam, k_);
    }
    return out;
  }

private:
  std::size_t k_;
};

} // namespace

NgramTables ngram_tables(const ComponentView& component, SymbolId entry, int order) {
  if (order < 1 || order > 3)
    throw Error("ngram: order must be 1, 2 or 3");
  const auto k = static_cast<std::size_t>(order - 1);
  const Abstraction abs(k);

  NgramTables t;
  t.order = order;
  for (std::size_t local = 0; local < component.rules().size(); ++local)
    for (auto x : component.rule(local).rhs)
      if (!component.contains(x))
        t.alphabet.insert(x);

  std::map<SymbolId, std::set<Sig>> sigs;
  std::map<SymbolId, std::set<SymbolString>> grams;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t local = 0; local < component.rules().size(); ++local) {
      const auto& r = component.rule(local);
      std::set<Sig> acc{Sig{}};
      std::set<SymbolString> found;
      for (auto x : r.rhs) {
        std::set<Sig> pieces;
        if (component.contains(x)) {
          pieces = sigs[x];
          found.insert(grams[x].begin(), grams[x].end());
        } else {
          pieces.insert(abs.leaf(x));
          if (k == 0)
            found.insert({x});
        }
        std::set<Sig> next;
        for (auto& u : acc)
          for (auto& v : pieces)
            next.insert(abs.concat(u, v, found));
        acc = std::move(next);
        if (acc.empty())
          break;
      }
      auto& s = sigs[r.lhs];
      for (auto& sig : acc)
        changed |= s.insert(sig).second;
      auto& g = grams[r.lhs];
      for (auto& w : found)
        changed |= g.insert(w).second;
    }
  }

  t.interior = grams[entry];
  for (auto& sig : sigs[entry]) {
    const auto& pre = sig.head;
    const auto& suf = sig.is_long ? sig.tail : sig.head;
    for (std::size_t i = 0; i <= pre.size(); ++i)
      t.prefixes.insert(first(pre, i));
    for (std::size_t i = 0; i <= suf.size(); ++i)
      t.suffixes.insert(last(suf, i));
  }
  return t;
}

ComponentStrategy ngram_strategy(int order) {
  if (order < 1 || order > 3)
    throw Error("ngram: order must be 1, 2 or 3");
  return [order](ComponentTask& task) {
    const auto t = ngram_tables(task.component, task.entry, order);
    const auto k = static_cast<std::size_t>(order - 1);
    auto& b = task.builder;

    // A state remembers the whole input while it is shorter than K, then
    // its last K symbols.
    std::map<SymbolString, StateId> ids;
    std::deque<SymbolString> work;
    auto get = [&](SymbolString m) {
      if (auto it = ids.find(m); it != ids.end())
        return it->second;
      auto id = b.add_state();
      ids.emplace(m, id);
      work.push_back(std::move(m));
      return id;
    };
    b.add_epsilon(task.from, get({}));
    while (!work.empty()) {
      const auto m = work.front();
      work.pop_front();
      const auto self = ids.at(m);
      bool final = true;
      for (std::size_t i = 0; i <= m.size() && final; ++i)
        final = t.suffixes.count(last(m, i)) > 0;
      if (final)
        b.add_epsilon(self, task.to);
      for (auto x : t.alphabet) {
        SymbolString w = m;
        w.push_back(x);
        const bool ok = m.size() < k ? t.prefixes.count(w) > 0 : t.interior.count(w) > 0;
        if (ok)
          b.add(self, task.atom(x), get(last(w, k)));
      }
    }
  };
}

CompactAutomaton ngram_compile(const Grammar& g, int order, const BuildOptions& options) {
  return make_fa(g, analyze_recursion(g), ngram_strategy(order), options);
}

} // namespace regapprox
