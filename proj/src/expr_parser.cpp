#include "agd/expr_parser.hpp"

#include <cctype>
#include <string>
#include <vector>

#include "agd/errors.hpp"

namespace agd {

namespace {

enum class Tok { Integer, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
public:
  Lexer(std::string_view src, int line_offset)
      : src_(src), line_(1 + line_offset) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      const int line = line_, col = col_;
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string digits;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
          digits += src_[pos_];
          advance();
        }
        out.push_back({Tok::Integer, digits, line, col});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_' || src_[pos_] == '.')) {
          ident += src_[pos_];
          advance();
        }
        out.push_back({Tok::Ident, ident, line, col});
        continue;
      }
      Tok kind;
      switch (c) {
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '*': kind = Tok::Star; break;
        case '/': kind = Tok::Slash; break;
        case '^': kind = Tok::Caret; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
      out.push_back({kind, std::string(1, c), line, col});
      advance();
    }
    out.push_back({Tok::End, "", line_, col_});
    return out;
  }

private:
  void advance() {
    ++pos_;
    ++col_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_;
  int col_ = 1;
};

class Parser {
public:
  Parser(std::vector<Token> tokens, const CoordinatePatch& patch)
      : toks_(std::move(tokens)), patch_(patch), n_(patch.dimension()) {}

  ScalarExpr run() {
    ScalarExpr e = expr();
    expect(Tok::End, "end of expression");
    return e;
  }

private:
  const Token& peek() const { return toks_[idx_]; }
  const Token& next() { return toks_[idx_++]; }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind)
      throw ParseError(std::string("expected ") + what, peek().line, peek().col);
    next();
  }

  ScalarExpr expr() {
    ScalarExpr acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      const bool plus = next().kind == Tok::Plus;
      ScalarExpr rhs = term();
      acc = plus ? acc + rhs : acc - rhs;
    }
    return acc;
  }

  ScalarExpr term() {
    ScalarExpr acc = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      const Token op = next();
      ScalarExpr rhs = factor();
      if (op.kind == Tok::Star) {
        acc = acc * rhs;
      } else {
        if (rhs.is_zero())
          throw DivisionByZeroError(
              "division by syntactically zero polynomial at " +
              std::to_string(op.line) + ":" + std::to_string(op.col));
        acc = acc / rhs;
      }
    }
    return acc;
  }

  ScalarExpr factor() {
    ScalarExpr b = base();
    if (peek().kind == Tok::Caret) {
      next();
      if (peek().kind != Tok::Integer)
        throw ParseError("expected natural exponent", peek().line, peek().col);
      const Token t = next();
      unsigned long e = 0;
      try {
        e = std::stoul(t.text);
      } catch (const std::exception&) {
        throw ParseError("exponent out of range", t.line, t.col);
      }
      b = b.pow(static_cast<unsigned>(e));
    }
    return b;
  }

  ScalarExpr base() {
    const Token t = next();
    switch (t.kind) {
      case Tok::Integer:
        return ScalarExpr::constant(n_, Rational(Integer(t.text)));
      case Tok::Ident: {
        auto idx = patch_.index_of(t.text);
        if (!idx)
          throw UnknownNameError("unknown identifier '" + t.text + "' at " +
                                 std::to_string(t.line) + ":" + std::to_string(t.col));
        return ScalarExpr::variable(n_, *idx);
      }
      case Tok::LParen: {
        ScalarExpr e = expr();
        if (peek().kind != Tok::RParen)
          throw ParseError("expected ')'", peek().line, peek().col);
        next();
        return e;
      }
      case Tok::Minus:
        return -factor();
      default:
        throw ParseError("expected a value", t.line, t.col);
    }
  }

  std::vector<Token> toks_;
  const CoordinatePatch& patch_;
  std::size_t n_;
  std::size_t idx_ = 0;
};

} // namespace

ScalarExpr parse_expr(std::string_view text, const CoordinatePatch& patch,
                      int line_offset) {
  Lexer lexer(text, line_offset);
  Parser parser(lexer.run(), patch);
  return parser.run();
}

} // namespace agd
