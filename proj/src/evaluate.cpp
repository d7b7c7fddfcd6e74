#include "regapprox/evaluate.hpp"

#include "regapprox/errors.hpp"
#include "regapprox/lr.hpp"
#include "regapprox/ngram.hpp"
#include "regapprox/rtn.hpp"
#include "regapprox/subset.hpp"

#include <array>
#include <cstdio>

namespace regapprox {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 9> kNames{{
    {Method::exact, "exact"},
    {Method::rtn, "rtn"},
    {Method::rtn_refined, "rtn-refined"},
    {Method::sub_block, "sub-block"},
    {Method::sub_simple, "sub-simple"},
    {Method::lc, "lc"},
    {Method::lr, "lr"},
    {Method::lr_pw, "lr-pw"},
    {Method::ngram, "ngram"},
}};

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string parameter_label(const MethodSpec& spec) {
  std::string out;
  if (spec.unfold > 0)
    out = "j=" + std::to_string(spec.unfold);
  if (default_parameter(spec.method)) {
    if (!out.empty())
      out += ',';
    out += (spec.method == Method::ngram ? "n=" : "d=") + std::to_string(spec.effective_parameter());
  }
  return out.empty() ? "-" : out;
}

} // namespace

std::string_view method_name(Method m) {
  for (auto& [k, v] : kNames)
    if (k == m)
      return v;
  return "?";
}

Method parse_method(std::string_view name) {
  for (auto& [k, v] : kNames)
    if (v == name)
      return k;
  throw Error("unknown method '" + std::string(name) + "'");
}

Direction direction(Method m) {
  switch (m) {
  case Method::exact: return Direction::exact;
  case Method::sub_block:
  case Method::sub_simple:
  case Method::lc: return Direction::subset;
  default: return Direction::superset;
  }
}

std::optional<int> default_parameter(Method m) {
  switch (m) {
  case Method::rtn:
  case Method::lr:
  case Method::sub_simple:
  case Method::ngram: return 1;
  case Method::lc: return 3;
  default: return std::nullopt;
  }
}

int MethodSpec::effective_parameter() const {
  if (parameter)
    return *parameter;
  return default_parameter(method).value_or(0);
}

CompactAutomaton compile(const Grammar& input, const MethodSpec& spec) {
  Grammar g = reduce(input);
  if (spec.unfold > 0)
    g = unfold(g, spec.unfold);
  const BuildOptions options{spec.state_cap};
  const int p = spec.effective_parameter();
  switch (spec.method) {
  case Method::exact: return make_fa(g, analyze_recursion(g), options);
  case Method::rtn: return rtn_compile(g, p, options);
  case Method::rtn_refined: return rtn_refined_compile(g, options);
  case Method::sub_block: return sub_block_compile(g, options);
  case Method::sub_simple: return sub_simple_compile(g, p, options);
  case Method::lc: return lc_compile(g, p, options);
  case Method::lr: return lr_compile(g, p, options);
  case Method::lr_pw: return pw_compile(g, options);
  case Method::ngram: return ngram_compile(g, p, options);
  }
  throw Error("unknown method");
}

EvalReport evaluate(const MethodSpec& spec, const Grammar& g, const std::vector<Sentence>& corpus) {
  EvalReport r;
  r.method = std::string(method_name(spec.method));
  r.parameter = parameter_label(spec);
  r.grammar_rule_count = static_cast<long long>(g.rules().size());
  r.corpus_size = static_cast<long long>(corpus.size());
  for (auto& s : corpus)
    if (chart_member(g, s))
      ++r.grammatical_count;
  const double denom = corpus.empty() ? 1.0 : static_cast<double>(corpus.size());
  r.pct_grammatical = corpus.empty() ? 0.0 : 100.0 * static_cast<double>(r.grammatical_count) / denom;

  try {
    const auto compact = compile(g, spec);
    r.compact_lines = static_cast<long long>(compact_line_count(compact));
    const auto dfa = minimize(expand(compact, spec.state_cap));
    r.dfa_states = static_cast<long long>(dfa.state_count());
    r.dfa_transitions = static_cast<long long>(dfa.transition_count());
    r.recognized_count = 0;
    for (auto& s : corpus)
      if (accepts(dfa, s))
        ++r.recognized_count;
    r.pct_recognized =
        corpus.empty() ? 0.0 : 100.0 * static_cast<double>(r.recognized_count) / denom;
  } catch (const StateCapExceeded& e) {
    r.status = std::string("failed: ") + e.what();
  }
  return r;
}

std::string tsv_header() {
  return "method\tparameter\tgrammar_rule_count\tcompact_lines\tdfa_states\tdfa_transitions\t"
         "corpus_size\trecognized_count\tgrammatical_count\tpct_recognized\tpct_grammatical\t"
         "status";
}

std::string to_tsv(const EvalReport& r) {
  std::string out;
  auto field = [&](const std::string& v) {
    if (!out.empty())
      out += '\t';
    out += v;
  };
  field(r.method);
  field(r.parameter);
  field(std::to_string(r.grammar_rule_count));
  field(std::to_string(r.compact_lines));
  field(std::to_string(r.dfa_states));
  field(std::to_string(r.dfa_transitions));
  field(std::to_string(r.corpus_size));
  field(std::to_string(r.recognized_count));
  field(std::to_string(r.grammatical_count));
  field(percent(r.pct_recognized));
  field(percent(r.pct_grammatical));
  field(r.status);
  return out;
}

std::string to_text(const EvalReport& r) {
  std::string out;
  auto line = [&](const char* k, const std::string& v) { out += std::string(k) + ": " + v + '\n'; };
  line("method", r.method);
  line("parameter", r.parameter);
  line("grammar rules", std::to_string(r.grammar_rule_count));
  line("compact lines", std::to_string(r.compact_lines));
  line("dfa states", std::to_string(r.dfa_states));
  line("dfa transitions", std::to_string(r.dfa_transitions));
  line("corpus size", std::to_string(r.corpus_size));
  line("recognized", std::to_string(r.recognized_count) + " (" + percent(r.pct_recognized) + "%)");
  line("grammatical",
       std::to_string(r.grammatical_count) + " (" + percent(r.pct_grammatical) + "%)");
  line("status", r.status);
  return out;
}

} // namespace regapprox
