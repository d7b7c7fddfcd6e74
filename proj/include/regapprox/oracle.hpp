#pragma once

#include "regapprox/grammar.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace regapprox {

using Sentence = std::vector<std::string>;

/// Whitespace-separated tokens.
Sentence split_sentence(std::string_view line);
std::string join_sentence(const Sentence& s);

/// Earley recognizer; handles epsilon rules and unit cycles directly.
/// Tokens that are not terminals of `g` make the sentence ungrammatical.
bool chart_member(const Grammar& g, const Sentence& s);

inline constexpr std::size_t kMaxEnumerationLength = 12;

/// All sentences of length <= maxlen, shortest first, then lexicographic by
/// token sequence. Throws Error for maxlen > kMaxEnumerationLength.
std::vector<Sentence> enumerate_language(const Grammar& g, std::size_t maxlen);

/// One sentence per line; blank lines are empty sentences, a trailing
/// newline does not add one.
std::vector<Sentence> parse_corpus(std::string_view text);
std::vector<Sentence> read_corpus(const std::string& path);

} // namespace regapprox
