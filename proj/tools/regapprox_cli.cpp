#include "regapprox/errors.hpp"
#include "regapprox/evaluate.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

using namespace regapprox;

namespace {

enum Exit { kOk = 0, kUsage = 1, kCap = 2, kSelfEmbedding = 3, kDifferent = 4 };

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text))
    throw Error("cannot write '" + path + "'");
}

// Either a DFA or a compact automaton; both share the text format.
Dfa load_automaton(const std::string& path, std::size_t cap) {
  return minimize(expand(parse_automaton(read_text_file(path)), cap));
}

std::string show_sentence(const Sentence& s) { return s.empty() ? "(empty)" : join_sentence(s); }

struct MethodOptions {
  std::string method;
  std::optional<int> d;
  std::optional<int> n;
  int unfold = 0;
  std::size_t state_cap = kDefaultStateCap;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--method", method, "Construction method")
        ->required()
        ->check(CLI::IsMember({"exact", "rtn", "rtn-refined", "sub-block", "sub-simple", "lc",
                               "lr", "lr-pw", "ngram"}));
    cmd.add_option("--d", d, "Depth for rtn, lr, lc and sub-simple");
    cmd.add_option("--n", n, "Order for ngram");
    cmd.add_option("--unfold", unfold, "Unfolding levels applied first")->check(CLI::NonNegativeNumber);
    cmd.add_option("--state-cap", state_cap, "Maximum states per construction")
        ->check(CLI::PositiveNumber);
  }

  MethodSpec spec() const {
    MethodSpec s;
    s.method = parse_method(method);
    s.unfold = unfold;
    s.state_cap = state_cap;
    if (n && s.method != Method::ngram)
      throw CLI::ValidationError("--n", "only applies to --method ngram");
    if (d && (s.method == Method::ngram || !default_parameter(s.method)))
      throw CLI::ValidationError("--d", "does not apply to --method " + method);
    s.parameter = s.method == Method::ngram ? n : d;
    return s;
  }
};

int analyze(const std::string& path) {
  const auto g = read_grammar_file(path);
  const auto r = reduce(g);
  const auto ra = analyze_recursion(r);
  std::cout << "rules: " << g.rules().size() << '\n';
  std::cout << "reduced rules: " << r.rules().size() << '\n';
  for (std::size_t c = 0; c < ra.components.size(); ++c) {
    std::cout << "component " << c << ": {";
    for (std::size_t i = 0; i < ra.components[c].size(); ++i)
      std::cout << (i ? ", " : "") << r.name(ra.components[c][i]);
    std::cout << "} " << to_string(ra.classification[c]) << '\n';
  }
  std::cout << "self-embedding: " << (ra.is_self_embedding() ? "yes" : "no") << '\n';
  return kOk;
}

int run(const std::string& automaton, const std::string& corpus) {
  const auto d = load_automaton(automaton, kDefaultStateCap);
  std::size_t count = 0, total = 0;
  for (auto& s : read_corpus(corpus)) {
    const bool ok = accepts(d, s);
    count += ok;
    ++total;
    std::cout << (ok ? "ACCEPT" : "REJECT") << '\t' << join_sentence(s) << '\n';
  }
  std::cout << "accepted " << count << " of " << total << '\n';
  return kOk;
}

int member(const std::string& grammar, const std::string& corpus) {
  const auto g = read_grammar_file(grammar);
  std::size_t count = 0, total = 0;
  for (auto& s : read_corpus(corpus)) {
    const bool ok = chart_member(g, s);
    count += ok;
    ++total;
    std::cout << (ok ? "GRAMMATICAL" : "UNGRAMMATICAL") << '\t' << join_sentence(s) << '\n';
  }
  std::cout << "grammatical " << count << " of " << total << '\n';
  return kOk;
}

int equiv(const std::string& a, const std::string& b) {
  const auto e = equivalent(load_automaton(a, kDefaultStateCap), load_automaton(b, kDefaultStateCap));
  if (e.equivalent) {
    std::cout << "equivalent\n";
    return kOk;
  }
  std::cout << "not equivalent; witness: " << show_sentence(*e.witness) << '\n';
  return kDifferent;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regular approximation of context-free grammars"};
  app.require_subcommand(1);

  std::string grammar, corpus, automaton, other, out, compact_out;
  std::size_t maxlen = 0;
  bool tsv = false;
  MethodOptions mo;

  auto* analyze_cmd = app.add_subcommand("analyze", "Show components and their classification");
  analyze_cmd->add_option("GRAMMAR", grammar)->required()->check(CLI::ExistingFile);

  auto* compile_cmd = app.add_subcommand("compile", "Build the minimal DFA of an approximation");
  mo.add_to(*compile_cmd);
  compile_cmd->add_option("GRAMMAR", grammar)->required()->check(CLI::ExistingFile);
  compile_cmd->add_option("-o", out, "DFA output file")->required();
  compile_cmd->add_option("--compact-out", compact_out, "Also write the compact form");

  auto* run_cmd = app.add_subcommand("run", "Run an automaton over a corpus");
  run_cmd->add_option("AUTOMATON", automaton)->required()->check(CLI::ExistingFile);
  run_cmd->add_option("CORPUS", corpus)->required()->check(CLI::ExistingFile);

  auto* member_cmd = app.add_subcommand("member", "Judge corpus sentences with the grammar");
  member_cmd->add_option("GRAMMAR", grammar)->required()->check(CLI::ExistingFile);
  member_cmd->add_option("CORPUS", corpus)->required()->check(CLI::ExistingFile);

  auto* eval_cmd = app.add_subcommand("eval", "Measure one method on a corpus");
  mo.add_to(*eval_cmd);
  eval_cmd->add_option("GRAMMAR", grammar)->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("CORPUS", corpus)->required()->check(CLI::ExistingFile);
  eval_cmd->add_flag("--tsv", tsv, "Print a header and one TSV row");

  auto* equiv_cmd = app.add_subcommand("equiv", "Compare the languages of two automata");
  equiv_cmd->add_option("FA1", automaton)->required()->check(CLI::ExistingFile);
  equiv_cmd->add_option("FA2", other)->required()->check(CLI::ExistingFile);

  auto* enumerate_cmd = app.add_subcommand("enumerate", "List the sentences up to a length");
  enumerate_cmd->add_option("GRAMMAR", grammar)->required()->check(CLI::ExistingFile);
  enumerate_cmd->add_option("--maxlen", maxlen)
      ->required()
      ->check(CLI::Range(std::size_t{0}, kMaxEnumerationLength));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*analyze_cmd)
      return analyze(grammar);
    if (*compile_cmd) {
      const auto spec = mo.spec();
      const auto c = compile(read_grammar_file(grammar), spec);
      if (!compact_out.empty())
        write_file(compact_out, serialize(c));
      write_file(out, serialize(minimize(expand(c, spec.state_cap)), "dfa"));
      return kOk;
    }
    if (*run_cmd)
      return run(automaton, corpus);
    if (*member_cmd)
      return member(grammar, corpus);
    if (*eval_cmd) {
      const auto r = evaluate(mo.spec(), read_grammar_file(grammar), read_corpus(corpus));
      if (tsv)
        std::cout << tsv_header() << '\n' << to_tsv(r) << '\n';
      else
        std::cout << to_text(r);
      return r.failed() ? kCap : kOk;
    }
    if (*equiv_cmd)
      return equiv(automaton, other);
    if (*enumerate_cmd) {
      for (auto& s : enumerate_language(read_grammar_file(grammar), maxlen))
        std::cout << join_sentence(s) << '\n';
      return kOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const StateCapExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCap;
  } catch (const SelfEmbeddingError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSelfEmbedding;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
