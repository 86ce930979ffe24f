#include <cctype>

#include "hypercount/errors.hpp"
#include "hypercount/form.hpp"

namespace hypercount {

namespace {

enum class Tok { Number, Var, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  int var = -1;
  std::size_t pos = 0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Tok::Number, std::string(s.substr(start, i - start)), -1, start});
      continue;
    }
    if (c == 'x' || c == 'X') {
      ++i;
      std::size_t dstart = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == dstart) {
        throw ParseError("expected variable index after 'x' at position " + std::to_string(start));
      }
      std::string digits(s.substr(dstart, i - dstart));
      if (digits.size() > 4) throw ParseError("variable index too large at position " + std::to_string(start));
      out.push_back({Tok::Var, digits, std::stoi(digits), start});
      continue;
    }
    Tok kind;
    switch (c) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "' at position " +
                         std::to_string(start));
    }
    out.push_back({kind, std::string(1, c), -1, start});
    ++i;
  }
  out.push_back({Tok::End, "", -1, s.size()});
  return out;
}

// Non-homogeneous polynomial used while parsing.
using Poly = TermMap;

class Parser {
 public:
  Parser(std::vector<Token> toks, int nvars) : toks_(std::move(toks)), nvars_(nvars) {}

  Poly parse() {
    Poly p = expr();
    if (peek().kind != Tok::End) fail("unexpected token '" + peek().text + "'");
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(peek().pos));
  }

  Poly constant(const mpz_class& c) const {
    Poly p;
    if (c != 0) p.emplace(Exponents(nvars_, 0), c);
    return p;
  }

  static Poly add(Poly a, const Poly& b, int sign) {
    for (const auto& [e, c] : b) {
      a[e] += sign > 0 ? c : mpz_class(-c);
    }
    std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
    return a;
  }

  static Poly mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ea, ca] : a) {
      for (const auto& [eb, cb] : b) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < ea.size(); ++i) e[i] = ea[i] + eb[i];
        out[e] += ca * cb;
      }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
  }

  Poly expr() {
    Poly acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      int sign = take().kind == Tok::Plus ? 1 : -1;
      acc = add(std::move(acc), term(), sign);
    }
    return acc;
  }

  Poly term() {
    Poly acc = unary();
    while (peek().kind == Tok::Star) {
      take();
      acc = mul(acc, unary());
    }
    return acc;
  }

  Poly unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return add(Poly{}, unary(), -1);
    }
    if (peek().kind == Tok::Plus) {
      take();
      return unary();
    }
    return power();
  }

  Poly power() {
    Poly base = atom();
    if (peek().kind != Tok::Caret) return base;
    take();
    if (peek().kind != Tok::Number) fail("expected integer exponent");
    const std::string& digits = take().text;
    if (digits.size() > 3) fail("exponent too large");
    int e = std::stoi(digits);
    Poly out = constant(1);
    for (int i = 0; i < e; ++i) out = mul(out, base);
    return out;
  }

  Poly atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        return constant(mpz_class(t.text));
      }
      case Tok::Var: {
        take();
        Exponents e(nvars_, 0);
        e[t.var] = 1;
        Poly p;
        p.emplace(std::move(e), 1);
        return p;
      }
      case Tok::LParen: {
        take();
        Poly inner = expr();
        if (peek().kind != Tok::RParen) fail("expected ')'");
        take();
        return inner;
      }
      default:
        fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected token '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int nvars_;
};

}  // namespace

Form parse_form(std::string_view text, std::optional<int> ambient_dim) {
  std::vector<Token> toks = tokenize(text);
  int max_var = -1;
  for (const auto& t : toks) {
    if (t.kind == Tok::Var) max_var = std::max(max_var, t.var);
  }
  if (toks.size() == 1) throw ParseError("empty polynomial");
  int n = ambient_dim.value_or(std::max(max_var, 0));
  if (n < max_var) {
    throw DimensionMismatch("variable x" + std::to_string(max_var) +
                            " exceeds ambient dimension " + std::to_string(n));
  }
  Poly p = Parser(std::move(toks), n + 1).parse();
  if (p.empty()) throw ParseError("polynomial is identically zero");

  int top = -1;
  int bottom = -1;
  for (const auto& [e, _] : p) {
    int deg = 0;
    for (int x : e) deg += x;
    if (top < 0) {
      top = bottom = deg;
    } else {
      top = std::max(top, deg);
      bottom = std::min(bottom, deg);
    }
  }
  if (top != bottom) throw MixedDegreeError(top, bottom);
  return Form(n, top, std::move(p));
}

}  // namespace hypercount
