#include "reparse/sexpr.hpp"

#include <cctype>

namespace reparse {

namespace {

std::string located(const std::string& what, std::size_t line, std::size_t column) {
  if (line == 0) return what;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::vector<Sexpr> read_all() {
    std::vector<Sexpr> forms;
    skip_blank();
    while (!at_end()) {
      if (peek() != '(')
        throw KbError("expected '(' at top level", line_, column_);
      forms.push_back(read());
      skip_blank();
    }
    return forms;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (c == ';') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  static bool atom_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == ':' || c == '_' ||
           c == '.' || c == '*' || c == '+' || c == '/';
  }

  Sexpr read() {
    Sexpr e;
    e.line = line_;
    e.column = column_;
    char c = peek();
    if (c == '(') {
      advance();
      e.kind = Sexpr::Kind::List;
      for (;;) {
        skip_blank();
        if (at_end()) throw KbError("unterminated list", e.line, e.column);
        if (peek() == ')') {
          advance();
          break;
        }
        e.items.push_back(read());
      }
    } else if (c == '"') {
      advance();
      e.kind = Sexpr::Kind::String;
      for (;;) {
        if (at_end()) throw KbError("unterminated string", e.line, e.column);
        char d = peek();
        advance();
        if (d == '"') break;
        if (d == '\\') {
          if (at_end()) throw KbError("unterminated string", e.line, e.column);
          d = peek();
          advance();
        }
        e.text.push_back(d);
      }
    } else if (c == ')') {
      throw KbError("unexpected ')'", line_, column_);
    } else if (atom_char(c)) {
      e.kind = Sexpr::Kind::Atom;
      while (!at_end() && atom_char(peek())) {
        e.text.push_back(peek());
        advance();
      }
    } else {
      throw KbError(std::string("unexpected character '") + c + "'", line_, column_);
    }
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

KbError::KbError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(located(what, line, column)), line_(line), column_(column) {}

bool Sexpr::is_form(std::string_view head) const {
  return is_list() && !items.empty() && items.front().is_atom() && items.front().text == head;
}

std::vector<Sexpr> parse_sexprs(std::string_view text) { return Reader(text).read_all(); }

std::string where(const Sexpr& e) {
  return "line " + std::to_string(e.line) + ", column " + std::to_string(e.column);
}

}  // namespace reparse
