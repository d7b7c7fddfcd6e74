#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace regapprox {

using StateId = std::uint32_t;

inline constexpr std::size_t kDefaultStateCap = 1'000'000;

/// Transition label: epsilon, a terminal, or a reference to a lower
/// subautomaton of a CompactAutomaton.
struct Label {
  enum class Kind : std::uint8_t { epsilon, terminal, subref };

  Kind kind = Kind::epsilon;
  std::string symbol;

  static Label epsilon() { return {}; }
  static Label terminal(std::string s) { return {Kind::terminal, std::move(s)}; }
  static Label subref(std::string s) { return {Kind::subref, std::move(s)}; }

  bool is_epsilon() const noexcept { return kind == Kind::epsilon; }
  bool is_subref() const noexcept { return kind == Kind::subref; }

  /// Token used by the text format: the terminal itself, `@eps` or `@nt:NAME`.
  std::string token() const;

  friend auto operator<=>(const Label&, const Label&) = default;
};

struct Transition {
  StateId from;
  Label label;
  StateId to;

  friend auto operator<=>(const Transition&, const Transition&) = default;
};

/// Nondeterministic automaton with states 0..state_count-1. Transitions and
/// finals are kept sorted and unique.
struct Nfa {
  std::size_t state_count = 0;
  StateId initial = 0;
  std::vector<StateId> finals;
  std::vector<Transition> transitions;

  std::size_t subref_count() const;
  bool has_subrefs() const { return subref_count() > 0; }

  friend bool operator==(const Nfa&, const Nfa&) = default;
};

/// Incremental construction of an Nfa with a cap on the number of states.
class NfaBuilder {
public:
  explicit NfaBuilder(std::size_t state_cap = kDefaultStateCap, std::string where = "automaton");

  StateId add_state();
  void add(StateId from, Label label, StateId to);
  void add_epsilon(StateId from, StateId to) { add(from, Label::epsilon(), to); }
  void set_initial(StateId s) { initial_ = s; }
  void add_final(StateId s) { finals_.push_back(s); }

  std::size_t state_count() const noexcept { return state_count_; }
  std::size_t state_cap() const noexcept { return cap_; }
  const std::string& where() const noexcept { return where_; }

  /// Drops states that are neither initial, final nor mentioned by a
  /// transition, renumbers the rest in id order and sorts everything.
  Nfa finish() &&;

private:
  std::size_t cap_;
  std::string where_;
  std::size_t state_count_ = 0;
  StateId initial_ = 0;
  std::vector<StateId> finals_;
  std::vector<Transition> transitions_;
};

struct DfaEdge {
  std::uint32_t symbol; // index into Dfa::alphabet
  StateId target;

  friend bool operator==(const DfaEdge&, const DfaEdge&) = default;
};

/// Partial deterministic automaton over a sorted alphabet; a missing edge
/// rejects.
struct Dfa {
  std::vector<std::string> alphabet;
  StateId initial = 0;
  std::vector<bool> finals;                 // per state
  std::vector<std::vector<DfaEdge>> edges;  // per state, sorted by symbol

  std::size_t state_count() const noexcept { return finals.size(); }
  std::size_t transition_count() const;
  std::optional<StateId> step(StateId from, std::uint32_t symbol) const;
  std::optional<std::uint32_t> symbol_index(std::string_view s) const;

  friend bool operator==(const Dfa&, const Dfa&) = default;
};

struct Subautomaton {
  std::string name;
  Nfa nfa;

  friend bool operator==(const Subautomaton&, const Subautomaton&) = default;
};

/// Subautomata ordered bottom-up: a subref in parts[q] names some parts[p]
/// with p < q. The last part is the root.
struct CompactAutomaton {
  std::vector<Subautomaton> parts;

  const Subautomaton& root() const { return parts.back(); }
  /// Throws Error on an empty list, a duplicate name or a subref that does not
  /// name an earlier part.
  void validate() const;

  friend bool operator==(const CompactAutomaton&, const CompactAutomaton&) = default;
};

/// Subset construction over epsilon closures. Throws Error if `n` contains
/// subref labels and StateCapExceeded past `state_cap` subset states.
Dfa determinize(const Nfa& n, std::size_t state_cap = kDefaultStateCap);

/// Minimal trimmed automaton, states numbered breadth-first from the initial
/// state in alphabet order, alphabet restricted to symbols in use. Equal
/// languages give equal results.
Dfa minimize(const Dfa& d);

struct Equivalence {
  bool equivalent = true;
  /// Shortest (then alphabetically first) string accepted by exactly one side.
  std::optional<std::vector<std::string>> witness;
};

Equivalence equivalent(const Dfa& a, const Dfa& b);

/// Bottom-up expansion: per part, determinize/minimize a copy and keep it if
/// it has fewer subref transitions, splice in the stored lower parts through
/// epsilon transitions, then determinize/minimize and store. Returns the
/// stored result for the root.
Dfa expand(const CompactAutomaton& c, std::size_t state_cap = kDefaultStateCap);

bool accepts(const Dfa& d, std::span<const std::string> sentence);

/// Sum of the transition counts of all parts.
std::size_t compact_line_count(const CompactAutomaton& c);

Nfa to_nfa(const Dfa& d);

std::string serialize(const Dfa& d, std::string_view name = "dfa");
std::string serialize(const CompactAutomaton& c);

CompactAutomaton parse_automaton(std::string_view text);
/// Parses a single subref-free deterministic block.
Dfa parse_dfa(std::string_view text);
std::string read_text_file(const std::string& path);

} // namespace regapprox
