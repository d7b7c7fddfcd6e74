#include "regapprox/exact.hpp"

#include "regapprox/errors.hpp"

#include <memory>
#include <span>
#include <unordered_set>

namespace regapprox {

namespace {

class Constructor {
public:
  Constructor(const Grammar& g, const RecursionAnalysis& ra, const ComponentStrategy* strategy,
              const BuildOptions& options)
      : g_(g), ra_(ra), strategy_(strategy), options_(options), by_lhs_(g.rules_by_lhs()) {
    for (std::size_t i = 0; i < ra.components.size(); ++i)
      views_.push_back(std::make_unique<ComponentView>(g, ra, i));
  }

  CompactAutomaton run() && {
    ensure(g_.start());
    return std::move(out_);
  }

private:
  Label label_for(SymbolId x) {
    if (g_.is_terminal(x))
      return Label::terminal(g_.name(x));
    ensure(x);
    return Label::subref(g_.name(x));
  }

  // Emits the subautomaton for `a` after every subautomaton it references.
  void ensure(SymbolId a) {
    if (!emitted_.insert(a).second)
      return;
    NfaBuilder b(options_.state_cap, "subautomaton '" + g_.name(a) + "'");
    auto s = b.add_state();
    auto f = b.add_state();
    b.set_initial(s);
    b.add_final(f);
    nonterminal_body(b, s, a, f);
    out_.parts.push_back({g_.name(a), std::move(b).finish()});
  }

  void make_fa(NfaBuilder& b, StateId q0, std::span<const SymbolId> alpha, StateId q1) {
    if (alpha.empty()) {
      b.add_epsilon(q0, q1);
    } else if (alpha.size() > 1) {
      auto q = b.add_state();
      make_fa(b, q0, alpha.first(1), q);
      make_fa(b, q, alpha.subspan(1), q1);
    } else {
      b.add(q0, label_for(alpha[0]), q1);
    }
  }

  void nonterminal_body(NfaBuilder& b, StateId q0, SymbolId a, StateId q1) {
    const auto comp = ra_.component_index(a);
    if (!comp) {
      for (auto i : by_lhs_[a])
        make_fa(b, q0, g_.rules()[i].rhs, q1);
      return;
    }

    const auto& view = *views_[*comp];
    if (ra_.classification[*comp] == Recursion::self) {
      if (!strategy_) {
        std::vector<std::string> names;
        for (auto s : view.members())
          names.push_back(g_.name(s));
        throw SelfEmbeddingError(std::move(names));
      }
      ComponentTask task{view, a, b, q0, q1, [this](SymbolId x) { return label_for(x); }};
      (*strategy_)(task);
      return;
    }

    std::unordered_map<SymbolId, StateId> q;
    for (auto m : view.members())
      q[m] = b.add_state();

    // Left components carry in-component symbols only in first position;
    // right and cyclic ones only in last position.
    const bool left = ra_.classification[*comp] == Recursion::left;
    for (std::size_t local = 0; local < view.rules().size(); ++local) {
      const auto& r = view.rule(local);
      std::span<const SymbolId> rhs = r.rhs;
      if (left) {
        if (!rhs.empty() && view.contains(rhs.front()))
          make_fa(b, q.at(rhs.front()), rhs.subspan(1), q.at(r.lhs));
        else
          make_fa(b, q0, rhs, q.at(r.lhs));
      } else {
        if (!rhs.empty() && view.contains(rhs.back()))
          make_fa(b, q.at(r.lhs), rhs.first(rhs.size() - 1), q.at(rhs.back()));
        else
          make_fa(b, q.at(r.lhs), rhs, q1);
      }
    }
    if (left)
      b.add_epsilon(q.at(a), q1);
    else
      b.add_epsilon(q0, q.at(a));
  }

  const Grammar& g_;
  const RecursionAnalysis& ra_;
  const ComponentStrategy* strategy_;
  BuildOptions options_;
  std::vector<std::vector<std::size_t>> by_lhs_;
  std::vector<std::unique_ptr<ComponentView>> views_;
  std::unordered_set<SymbolId> emitted_;
  CompactAutomaton out_;
};

} // namespace

CompactAutomaton make_fa(const Grammar& g, const RecursionAnalysis& analysis,
                         const BuildOptions& options) {
  return Constructor(g, analysis, nullptr, options).run();
}

CompactAutomaton make_fa(const Grammar& g, const RecursionAnalysis& analysis,
                         const ComponentStrategy& strategy, const BuildOptions& options) {
  return Constructor(g, analysis, &strategy, options).run();
}

} // namespace regapprox
