#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reparse {

/// Error raised for malformed knowledge-base documents. Carries the
/// 1-based line and column of the offending character when known.
class KbError : public std::runtime_error {
 public:
  KbError(const std::string& what, std::size_t line = 0, std::size_t column = 0);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct Sexpr {
  enum class Kind { List, Atom, String };

  Kind kind = Kind::List;
  std::string text;  // atom or string payload
  std::vector<Sexpr> items;
  std::size_t line = 0;
  std::size_t column = 0;

  bool is_list() const { return kind == Kind::List; }
  bool is_atom() const { return kind == Kind::Atom; }
  bool is_string() const { return kind == Kind::String; }

  // True when this is a list whose first element is the atom `head`.
  bool is_form(std::string_view head) const;
};

/// Reads every top-level form of a document. `;` starts a comment that
/// runs to end of line. Strings are double-quoted with `\` escapes.
std::vector<Sexpr> parse_sexprs(std::string_view text);

std::string where(const Sexpr& e);

}  // namespace reparse
