#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace regapprox {

using SymbolId = std::uint32_t;

struct Rule {
  SymbolId lhs;
  std::vector<SymbolId> rhs;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Dotted rule: `rule` indexes Grammar::rules(), `dot` is a position in its rhs.
struct Item {
  std::uint32_t rule;
  std::uint32_t dot;

  friend auto operator<=>(const Item&, const Item&) = default;
};

/// A context-free grammar over interned symbol names.
///
/// The symbol table is append-only; symbol ids are dense and ordered by first
/// interning, which makes every derived structure deterministic in the input.
class Grammar {
public:
  /// Returns the id of `name`, creating a terminal if it is unknown.
  /// Throws Error if `name` exists as a nonterminal.
  SymbolId terminal(std::string_view name);
  /// Returns the id of `name`, creating a nonterminal if it is unknown.
  /// Throws Error if `name` exists as a terminal.
  SymbolId nonterminal(std::string_view name);
  /// Creates a nonterminal whose name is `base`, or `base` followed by
  /// primes if that name is taken.
  SymbolId fresh_nonterminal(std::string base);

  void add_rule(SymbolId lhs, std::vector<SymbolId> rhs);
  void set_start(SymbolId start);

  SymbolId start() const noexcept { return start_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t symbol_count() const noexcept { return names_.size(); }
  bool is_terminal(SymbolId s) const { return terminal_[s]; }
  const std::string& name(SymbolId s) const { return names_[s]; }
  std::optional<SymbolId> find(std::string_view name) const;

  /// Symbols in id order.
  std::vector<SymbolId> terminals() const;
  std::vector<SymbolId> nonterminals() const;

  /// Same symbol table and start symbol, no rules.
  Grammar symbols_only() const;

  /// Indices into rules() grouped by lhs, in rule order.
  std::vector<std::vector<std::size_t>> rules_by_lhs() const;

  friend bool operator==(const Grammar& a, const Grammar& b) {
    return a.names_ == b.names_ && a.terminal_ == b.terminal_ && a.rules_ == b.rules_ &&
           a.start_ == b.start_;
  }

private:
  SymbolId intern(std::string_view name, bool terminal);

  std::vector<std::string> names_;
  std::vector<bool> terminal_;
  std::unordered_map<std::string, SymbolId> index_;
  std::vector<Rule> rules_;
  SymbolId start_ = 0;
};

/// Parses the line-oriented grammar format:
///
///     # comment
///     @start S
///     @terminals a b
///     S -> a S a | b S b | @eps
///
/// Symbols that never occur as a left-hand side are terminals unless the
/// grammar names them in `@terminals`.
Grammar parse_grammar(std::string_view text);
Grammar read_grammar_file(const std::string& path);

/// Writes `g` back in the text format (one rule per line, explicit `@start`).
std::string format_grammar(const Grammar& g);
std::string format_rule(const Grammar& g, const Rule& r);
/// `[A -> a . S a]`
std::string format_item(const Grammar& g, const Item& item);

/// Removes non-productive, then unreachable, rules and symbols.
/// The start symbol is kept even if no rule for it survives.
Grammar reduce(const Grammar& g);

enum class Recursion { left, right, self, cyclic };

std::string_view to_string(Recursion r);

struct RecursionAnalysis {
  /// Recursive nonterminals in id order.
  std::vector<SymbolId> recursive_set;
  /// Mutually recursive components, each sorted by id, ordered by smallest id.
  std::vector<std::vector<SymbolId>> components;
  std::vector<Recursion> classification;
  std::vector<bool> left_generating;
  std::vector<bool> right_generating;
  /// Component index per symbol id; -1 for symbols outside every component.
  std::vector<int> component_of;

  bool is_self_embedding() const;
  std::optional<std::size_t> component_index(SymbolId s) const;
  bool in_component(SymbolId s, std::size_t component) const {
    return s < component_of.size() && component_of[s] == static_cast<int>(component);
  }
};

RecursionAnalysis analyze_recursion(const Grammar& g);

/// Copies every self component to `levels` non-recursive levels A[1]..A[levels]
/// above its recursive rules; the result is reduced. Throws Error for
/// levels == 0.
Grammar unfold(const Grammar& g, int levels);

/// The rules of one component together with membership tests; out-of-component
/// symbols are opaque to the approximation methods.
class ComponentView {
public:
  ComponentView(const Grammar& g, const RecursionAnalysis& analysis, std::size_t component);

  const Grammar& grammar() const noexcept { return *grammar_; }
  const std::vector<SymbolId>& members() const noexcept { return members_; }
  /// Indices into grammar().rules() whose lhs is a member, in rule order.
  const std::vector<std::size_t>& rules() const noexcept { return rules_; }
  /// Positions within rules() for the given member.
  const std::vector<std::size_t>& rules_of(SymbolId member) const;
  bool contains(SymbolId s) const noexcept { return s < member_.size() && member_[s]; }
  const Rule& rule(std::size_t local) const { return grammar_->rules()[rules_[local]]; }

private:
  const Grammar* grammar_;
  std::vector<SymbolId> members_;
  std::vector<std::size_t> rules_;
  std::vector<bool> member_;
  std::unordered_map<SymbolId, std::vector<std::size_t>> by_lhs_;
};

} // namespace regapprox
