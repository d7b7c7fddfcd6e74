#pragma once

#include "regapprox/exact.hpp"
#include "regapprox/oracle.hpp"

namespace regapprox {

enum class Method { exact, rtn, rtn_refined, sub_block, sub_simple, lc, lr, lr_pw, ngram };

std::string_view method_name(Method m);
/// Accepts the CLI spellings (`rtn-refined`, `lr-pw`, ...). Throws Error.
Method parse_method(std::string_view name);

enum class Direction { exact, superset, subset };
Direction direction(Method m);

struct MethodSpec {
  Method method = Method::exact;
  /// Depth for rtn, lr, lc and sub-simple; order for ngram. Unset means the
  /// method default (see default_parameter).
  std::optional<int> parameter;
  /// Unfolding levels applied before the method; 0 for none.
  int unfold = 0;
  std::size_t state_cap = kDefaultStateCap;

  int effective_parameter() const;
};

/// rtn 1, lr 1, lc 3, sub-simple 1, ngram 1; nullopt for parameterless
/// methods.
std::optional<int> default_parameter(Method m);

/// Reduces `g`, unfolds if requested and runs the method. Throws
/// StateCapExceeded, SelfEmbeddingError (exact only) and Error.
CompactAutomaton compile(const Grammar& g, const MethodSpec& spec);

struct EvalReport {
  std::string method;
  std::string parameter; // "d=2", "n=3", "j=2,d=1" or "-"
  long long grammar_rule_count = 0;
  long long compact_lines = -1;
  long long dfa_states = -1;
  long long dfa_transitions = -1;
  long long corpus_size = 0;
  long long recognized_count = -1;
  long long grammatical_count = 0;
  double pct_recognized = -1;
  double pct_grammatical = 0;
  std::string status = "ok"; // or "failed: <reason>"

  bool failed() const { return status != "ok"; }
};

/// Compiles, expands, minimizes and runs both the automaton and the oracle
/// over `corpus`. A state cap hit yields a failed row with -1 in the
/// automaton columns; other errors propagate.
EvalReport evaluate(const MethodSpec& spec, const Grammar& g, const std::vector<Sentence>& corpus);

std::string tsv_header();
std::string to_tsv(const EvalReport& r);
/// `key: value` lines.
std::string to_text(const EvalReport& r);

} // namespace regapprox
