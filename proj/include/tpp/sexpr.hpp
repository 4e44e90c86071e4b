#ifndef TPP_SEXPR_HPP
#define TPP_SEXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpp {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at line " + std::to_string(line_) + ", column " +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// S-expression node. Atoms keep their source position for diagnostics.
struct Sexpr {
  bool is_atom = false;
  std::string atom;
  std::vector<Sexpr> items;
  int line = 0, col = 0;

  bool is_list() const { return !is_atom; }
  size_t size() const { return items.size(); }
  const Sexpr& operator[](size_t i) const {
    if (is_atom || i >= items.size())
      throw ParseError("malformed form (missing element)", line, col);
    return items[i];
  }

  // Head symbol of a list, empty string otherwise.
  std::string head() const {
    if (is_atom || items.empty() || !items[0].is_atom) return "";
    return items[0].atom;
  }
};

namespace detail {

class SexprLexer {
 public:
  SexprLexer(const std::string& text, bool lowercase)
      : text_(text), lowercase_(lowercase) {}

  struct Token {
    enum Kind { LParen, RParen, Atom, End } kind;
    std::string value;
    int line, col;
  };

  Token next() {
    skip_ws();
    if (pos_ >= text_.size()) return {Token::End, "", line_, col_};
    int line = line_, col = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      return {Token::LParen, "(", line, col};
    }
    if (c == ')') {
      advance();
      return {Token::RParen, ")", line, col};
    }
    if (c == '"') {  // quoted atom (solver output may contain strings)
      advance();
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        s += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
      advance();
      return {Token::Atom, s, line, col};
    }
    std::string s;
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace((unsigned char)d)) break;
      s += lowercase_ ? (char)std::tolower((unsigned char)d) : d;
      advance();
    }
    return {Token::Atom, s, line, col};
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace((unsigned char)c)) {
        advance();
      } else {
        break;
      }
    }
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  bool lowercase_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

inline Sexpr parse_one(SexprLexer& lex, SexprLexer::Token tok) {
  using Token = SexprLexer::Token;
  if (tok.kind == Token::Atom) {
    Sexpr s;
    s.is_atom = true;
    s.atom = tok.value;
    s.line = tok.line;
    s.col = tok.col;
    return s;
  }
  if (tok.kind != Token::LParen) throw ParseError("expected '(' or atom", tok.line, tok.col);
  Sexpr list;
  list.line = tok.line;
  list.col = tok.col;
  for (;;) {
    Token t = lex.next();
    if (t.kind == Token::End) throw ParseError("unbalanced '('", tok.line, tok.col);
    if (t.kind == Token::RParen) return list;
    list.items.push_back(parse_one(lex, t));
  }
}

}  // namespace detail

// Parses all top-level S-expressions in `text`. PDDL is case-insensitive, so
// callers pass lowercase=true there; solver models are case-sensitive.
inline std::vector<Sexpr> parse_sexprs(const std::string& text, bool lowercase = false) {
  detail::SexprLexer lex(text, lowercase);
  std::vector<Sexpr> out;
  for (;;) {
    auto tok = lex.next();
    if (tok.kind == detail::SexprLexer::Token::End) return out;
    out.push_back(detail::parse_one(lex, tok));
  }
}

}  // namespace tpp

#endif  // TPP_SEXPR_HPP
