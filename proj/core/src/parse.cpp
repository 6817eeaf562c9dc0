#include "nevlab/parse.hpp"

#include <cctype>
#include <cstdlib>
#include <optional>
#include <vector>

namespace nevlab::funcalg {

namespace {

enum class Tok {
  kNumber,      // decimal literal, possibly with an 'i' suffix
  kIdent,       // z, i, exp, sin, cos, shift, diff, or unknown
  kPlus,
  kMinus,
  kStar,
  kSlash,
  kCaret,
  kLParen,
  kRParen,
  kComma,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  double number{0.0};
  bool imaginary{false};
  bool integral{true};  // number had no fraction/exponent part
  int line{1};
  int column{1};
};

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) { tokenize(); }

  const std::vector<Token>& tokens() const { return tokens_; }

private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  void tokenize() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
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
      int tl = line_, tc = col_;
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        lex_number(tl, tc);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string ident;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                src_[pos_] == '_')) {
          ident.push_back(src_[pos_]);
          advance();
        }
        push({Tok::kIdent, ident, 0.0, false, true, tl, tc});
        continue;
      }
      switch (c) {
        case '+': push_simple(Tok::kPlus, tl, tc); break;
        case '-': push_simple(Tok::kMinus, tl, tc); break;
        case '*': push_simple(Tok::kStar, tl, tc); break;
        case '/': push_simple(Tok::kSlash, tl, tc); break;
        case '^': push_simple(Tok::kCaret, tl, tc); break;
        case '(': push_simple(Tok::kLParen, tl, tc); break;
        case ')': push_simple(Tok::kRParen, tl, tc); break;
        case ',': push_simple(Tok::kComma, tl, tc); break;
        default:
          fail(std::string("unexpected character '") + c + "'");
      }
    }
    push({Tok::kEnd, "", 0.0, false, true, line_, col_});
  }

  void lex_number(int tl, int tc) {
    std::size_t start = pos_;
    bool integral = true;
    while (pos_ < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_])))
      advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      integral = false;
      advance();
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        advance();
    }
    // Exponent part: only when followed by digits (so `2e` stays an error
    // and `exp` after a number is not swallowed).
    if (pos_ + 1 < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[look]))) {
        integral = false;
        advance();
        if (src_[pos_] == '+' || src_[pos_] == '-') advance();
        while (pos_ < src_.size() &&
               std::isdigit(static_cast<unsigned char>(src_[pos_])))
          advance();
      }
    }
    std::string text(src_.substr(start, pos_ - start));
    if (text == ".") fail("malformed number");
    double value = std::strtod(text.c_str(), nullptr);
    bool imaginary = false;
    if (pos_ < src_.size() && src_[pos_] == 'i') {
      // Imaginary suffix only when not part of a longer identifier.
      bool followed_by_ident =
          pos_ + 1 < src_.size() &&
          (std::isalnum(static_cast<unsigned char>(src_[pos_ + 1])) ||
           src_[pos_ + 1] == '_');
      if (!followed_by_ident) {
        imaginary = true;
        advance();
      }
    }
    push({Tok::kNumber, text, value, imaginary, integral, tl, tc});
  }

  void push_simple(Tok k, int tl, int tc) {
    advance();
    push({k, "", 0.0, false, true, tl, tc});
  }

  void push(Token t) { tokens_.push_back(std::move(t)); }

  void advance() {
    ++pos_;
    ++col_;
  }

  std::string_view src_;
  std::size_t pos_{0};
  int line_{1};
  int col_{1};
  std::vector<Token> tokens_;
};

class Parser {
public:
  explicit Parser(std::string_view src) : lexer_(src) {}

  Expr parse() {
    Expr e = additive();
    expect(Tok::kEnd, "trailing input");
    return e;
  }

private:
  const Token& peek() const { return lexer_.tokens()[index_]; }

  Token take() { return lexer_.tokens()[index_++]; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const {
    throw ParseError(msg, t.line, t.column);
  }

  void expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what, peek());
    take();
  }

  Expr additive() {
    Expr e = multiplicative();
    while (peek().kind == Tok::kPlus || peek().kind == Tok::kMinus) {
      Tok op = take().kind;
      Expr rhs = multiplicative();
      e = op == Tok::kPlus ? Expr::sum(e, rhs) : Expr::difference(e, rhs);
    }
    return e;
  }

  Expr multiplicative() {
    Expr e = unary();
    while (peek().kind == Tok::kStar || peek().kind == Tok::kSlash) {
      Token op = take();
      Expr rhs = unary();
      try {
        e = op.kind == Tok::kStar ? Expr::product(e, rhs)
                                  : Expr::quotient(e, rhs);
      } catch (const Error& err) {
        fail(err.what(), op);
      }
    }
    return e;
  }

  Expr unary() {
    if (peek().kind == Tok::kMinus) {
      Token t = take();
      return Expr::product(Expr::constant({-1.0, 0.0}), unary());
    }
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (peek().kind != Tok::kCaret) return base;
    Token caret = take();
    int sign = 1;
    if (peek().kind == Tok::kMinus) {
      take();
      sign = -1;
    }
    if (peek().kind != Tok::kNumber || peek().imaginary || !peek().integral)
      fail("exponent must be an integer literal", peek());
    Token num = take();
    double v = num.number;
    if (v > 1000.0) fail("exponent too large", num);
    try {
      return Expr::int_power(base, sign * static_cast<int>(v));
    } catch (const Error& err) {
      fail(err.what(), caret);
    }
  }

  Expr atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kNumber: {
        Token n = take();
        return n.imaginary ? Expr::constant({0.0, n.number})
                           : Expr::constant({n.number, 0.0});
      }
      case Tok::kLParen: {
        take();
        Expr e = additive();
        expect(Tok::kRParen, "')'");
        return e;
      }
      case Tok::kIdent:
        return identifier();
      default:
        fail("expected an expression", t);
    }
  }

  Expr identifier() {
    Token t = take();
    if (t.text == "z") return Expr::variable();
    if (t.text == "i") return Expr::constant({0.0, 1.0});
    if (t.text == "exp") return Expr::exp_of(call_single("exp"));
    if (t.text == "sin") return Expr::sin_of(call_single("sin"));
    if (t.text == "cos") return Expr::cos_of(call_single("cos"));
    if (t.text == "diff") return Expr::derivative_node(call_single("diff"));
    if (t.text == "shift") {
      expect(Tok::kLParen, "'(' after shift");
      Expr child = additive();
      Token comma = peek();
      expect(Tok::kComma, "',' between shift arguments");
      Expr off = additive();
      expect(Tok::kRParen, "')'");
      if (off.kind() != NodeKind::kConstant)
        fail("shift offset must be a constant expression", comma);
      return Expr::shift_node(child, off.node().value);
    }
    fail("unknown identifier '" + t.text + "'", t);
  }

  Expr call_single(const std::string& name) {
    expect(Tok::kLParen, "'(' after " + name);
    Expr e = additive();
    expect(Tok::kRParen, "')'");
    return e;
  }

  Lexer lexer_;
  std::size_t index_{0};
};

}  // namespace

Expr parse_expr(std::string_view src) { return Parser(src).parse(); }

Complex parse_complex(std::string_view src) {
  Expr e = parse_expr(src);
  if (e.kind() != NodeKind::kConstant)
    throw ParseError("expected a constant expression", 1, 1);
  return e.node().value;
}

}  // namespace nevlab::funcalg
