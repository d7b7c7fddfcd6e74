#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace regapprox {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed grammar, automaton or corpus text.
class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A construction produced more states (or generated nonterminals) than the
/// configured cap allows. `where` names the subautomaton or transformation
/// that blew up.
class StateCapExceeded : public Error {
public:
  StateCapExceeded(std::string where, std::size_t cap)
      : Error("state cap of " + std::to_string(cap) + " exceeded in " + where),
        where_(std::move(where)), cap_(cap) {}

  const std::string& where() const noexcept { return where_; }
  std::size_t cap() const noexcept { return cap_; }

private:
  std::string where_;
  std::size_t cap_;
};

/// The exact construction reached a component classified `self`.
class SelfEmbeddingError : public Error {
public:
  explicit SelfEmbeddingError(std::vector<std::string> component)
      : Error("grammar is self-embedding in component {" + join(component) + "}"),
        component_(std::move(component)) {}

  const std::vector<std::string>& component() const noexcept { return component_; }

private:
  static std::string join(const std::vector<std::string>& names) {
    std::string out;
    for (const auto& n : names) {
      if (!out.empty())
        out += ", ";
      out += n;
    }
    return out;
  }

  std::vector<std::string> component_;
};

} // namespace regapprox
