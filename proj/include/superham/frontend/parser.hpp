#ifndef SUPERHAM_FRONTEND_PARSER_HPP
#define SUPERHAM_FRONTEND_PARSER_HPP

#include "superham/frontend/workspace.hpp"

#include <cctype>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace superham::frontend {

class ParseError : public std::invalid_argument {
 public:
  enum class Kind { syntax, unknownIdentifier, parityMismatch, duplicateName };

  ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& message)
      : std::invalid_argument(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        kind(kind),
        line(line),
        column(column),
        message(message) {}

  Kind kind;
  std::size_t line;
  std::size_t column;
  std::string message;
};

namespace detail {

struct Token {
  enum class Type { ident, number, punct, end };
  Type type = Type::end;
  std::string text;
  std::uint32_t primes = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

inline std::string describe(const Token& t) {
  switch (t.type) {
    case Token::Type::end: return "end of input";
    case Token::Type::ident: return "'" + t.text + std::string(t.primes, '\'') + "'";
    default: return "'" + t.text + "'";
  }
}

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t line = 1;
  std::size_t col = 1;
  std::size_t i = 0;
  const auto advance = [&] {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') {
        advance();
      }
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc) || c == '_') {
      t.type = Token::Type::ident;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
        t.text += src[i];
        advance();
      }
      while (i < src.size() && src[i] == '\'') {
        ++t.primes;
        advance();
      }
    } else if (std::isdigit(uc)) {
      t.type = Token::Type::number;
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
        t.text += src[i];
        advance();
      }
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      t.type = Token::Type::punct;
      t.text = "->";
      advance();
      advance();
    } else if (std::string_view(";={}(),[]+-*^/").find(c) != std::string_view::npos) {
      t.type = Token::Type::punct;
      t.text = std::string(1, c);
      advance();
    } else {
      const std::string shown = uc < 0x80 && std::isprint(uc) ? std::string(1, c) : "\\x" + [&] {
        static const char* hex = "0123456789abcdef";
        return std::string{hex[uc >> 4], hex[uc & 15]};
      }();
      throw ParseError(ParseError::Kind::syntax, line, col, "unexpected character '" + shown + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : tokens_(tokenize(src)) {}

  Workspace parse() {
    while (peek().type != Token::Type::end) {
      const Token& t = peek();
      if (t.type != Token::Type::ident || t.primes != 0) {
        syntax(t, "expected a declaration, found " + describe(t));
      }
      if (t.text == "family") {
        parseFamily();
      } else if (t.text == "poly") {
        parsePoly();
      } else if (t.text == "operator") {
        parseOperator();
      } else if (t.text == "lie") {
        parseLie();
      } else if (t.text == "form") {
        parseForm();
      } else if (t.text == "conformal") {
        parseConformal();
      } else {
        syntax(t, "expected 'family', 'poly', 'operator', 'lie', 'form' or 'conformal', found " + describe(t));
      }
    }
    resolveFormNames();
    return std::move(ws_);
  }

 private:
  using Kind = ParseError::Kind;

  [[noreturn]] static void fail(Kind kind, const Token& at, const std::string& message) {
    throw ParseError(kind, at.line, at.column, message);
  }
  [[noreturn]] static void syntax(const Token& at, const std::string& message) { fail(Kind::syntax, at, message); }

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < tokens_.size()) {
      ++pos_;
    }
    return t;
  }

  bool isPunct(const std::string& p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::punct && t.text == p;
  }
  bool accept(const std::string& p) {
    if (isPunct(p)) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect(const std::string& p) {
    if (!isPunct(p)) {
      syntax(peek(), "expected '" + p + "', found " + describe(peek()));
    }
    return next();
  }
  void expectKeyword(const std::string& word) {
    const Token& t = peek();
    if (t.type != Token::Type::ident || t.text != word || t.primes != 0) {
      syntax(t, "expected '" + word + "', found " + describe(t));
    }
    next();
  }
  const Token& expectName() {
    const Token& t = peek();
    if (t.type != Token::Type::ident) {
      syntax(t, "expected a name, found " + describe(t));
    }
    if (t.primes != 0) {
      syntax(t, "names cannot carry primes");
    }
    return next();
  }
  std::uint32_t expectNat() {
    const Token& t = peek();
    if (t.type != Token::Type::number) {
      syntax(t, "expected a natural number, found " + describe(t));
    }
    if (t.text.size() > 9) {
      syntax(t, "number " + t.text + " is too large");
    }
    next();
    return static_cast<std::uint32_t>(std::stoul(t.text));
  }
  Rational number() {
    Rational r{expectNatText()};
    if (accept("/")) {
      const Token& den = peek();
      const Rational d{expectNatText()};
      if (sgn(d) == 0) {
        syntax(den, "zero denominator");
      }
      r /= d;
    }
    return r;
  }
  std::string expectNatText() {
    const Token& t = peek();
    if (t.type != Token::Type::number) {
      syntax(t, "expected a number, found " + describe(t));
    }
    return next().text;
  }
  Rational rational() {
    const bool negative = accept("-");
    Rational r = number();
    return negative ? Rational(-r) : r;
  }
  Parity parity() {
    expectKeyword("parity");
    const Token& t = peek();
    if (t.type == Token::Type::ident && t.primes == 0 && (t.text == "even" || t.text == "odd")) {
      next();
      return t.text == "odd" ? Parity::odd : Parity::even;
    }
    syntax(t, "expected 'even' or 'odd', found " + describe(t));
  }

  template <class Map>
  void checkFresh(const Map& m, const Token& name, const std::string& kind) const {
    if (m.count(name.text) != 0) {
      fail(Kind::duplicateName, name, "duplicate " + kind + " '" + name.text + "'");
    }
  }

  void parseFamily() {
    next();
    const Token& name = expectName();
    if (name.text == "D") {
      syntax(name, "'D' is reserved for the total derivative");
    }
    const Parity p = parity();
    expect(";");
    if (ws_.symbols.find(name.text)) {
      fail(Kind::duplicateName, name, "duplicate family '" + name.text + "'");
    }
    ws_.symbols.declare(name.text, p);
  }

  void parsePoly() {
    next();
    const Token& name = expectName();
    checkFresh(ws_.polys, name, "poly");
    expect("=");
    SuperPoly value = expr();
    expect(";");
    ws_.polys.emplace(name.text, std::move(value));
  }

  void parseOperator() {
    next();
    const Token& name = expectName();
    checkFresh(ws_.operators, name, "operator");
    expect("{");
    MatrixDiffOp h;
    std::set<std::pair<Family, Family>> seen;
    while (!accept("}")) {
      const Token& at = peek();
      expectKeyword("entry");
      expect("(");
      const Family row = family(expectName());
      expect(",");
      const Family col = family(expectName());
      expect(")");
      expect("=");
      DiffOpEntry e = opExpr();
      expect(";");
      if (!seen.insert({row, col}).second) {
        fail(Kind::duplicateName, at, "duplicate entry (" + ws_.symbols.nameOf(row) + ", " + ws_.symbols.nameOf(col) + ")");
      }
      try {
        h.add(row, col, e);
      } catch (const ParityError&) {
        fail(Kind::parityMismatch, at,
             "entry (" + ws_.symbols.nameOf(row) + ", " + ws_.symbols.nameOf(col) + ") has a coefficient of the wrong parity");
      }
    }
    ws_.operators.emplace(name.text, std::move(h));
  }

  /// Shared "basis NAME parity P;" handling for lie and conformal blocks.
  void basisLine(std::vector<BasisElement>& basis) {
    next();
    const Token& name = expectName();
    const Parity p = parity();
    expect(";");
    for (const BasisElement& b : basis) {
      if (b.name == name.text) {
        fail(Kind::duplicateName, name, "duplicate basis element '" + name.text + "'");
      }
    }
    basis.push_back({name.text, p});
  }

  std::size_t basisRef(const std::vector<BasisElement>& basis) {
    const Token& t = expectName();
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].name == t.text) {
        return k;
      }
    }
    fail(Kind::unknownIdentifier, t, "unknown basis element '" + t.text + "'");
  }

  void parseLie() {
    next();
    const Token& name = expectName();
    checkFresh(ws_.lie, name, "lie");
    expect("{");
    LieSuperData lie;
    std::set<std::array<std::size_t, 3>> seen;
    while (!accept("}")) {
      const Token& at = peek();
      if (at.type == Token::Type::ident && at.text == "basis") {
        basisLine(lie.basis);
        continue;
      }
      expectKeyword("bracket");
      expect("(");
      const std::size_t a = basisRef(lie.basis);
      expect(",");
      const std::size_t b = basisRef(lie.basis);
      expect("->");
      const std::size_t c = basisRef(lie.basis);
      expect(")");
      expect("=");
      const Rational value = rational();
      expect(";");
      if (!seen.insert({a, b, c}).second) {
        fail(Kind::duplicateName, at, "duplicate bracket");
      }
      try {
        lie.set(a, b, c, value);
      } catch (const ParityError&) {
        fail(Kind::parityMismatch, at, "bracket breaks the grading");
      }
    }
    ws_.lie.emplace(name.text, std::move(lie));
  }

  void parseForm() {
    next();
    const Token& name = expectName();
    checkFresh(ws_.forms, name, "form");
    expect("{");
    FormSpec form;
    while (!accept("}")) {
      const Token& at = peek();
      expectKeyword("pair");
      expect("(");
      const Token& left = expectName();
      expect(",");
      const Token& right = expectName();
      expect(")");
      expect("[");
      expectKeyword("m");
      expect("=");
      const std::uint32_t m = expectNat();
      expect("]");
      expect("=");
      const Rational value = rational();
      expect(";");
      formRefs_.push_back(left);
      formRefs_.push_back(right);
      if (!form.pairs.emplace(std::tuple{left.text, right.text, m}, value).second) {
        fail(Kind::duplicateName, at, "duplicate pair");
      }
      if (sgn(value) == 0) {
        form.pairs.erase({left.text, right.text, m});
      }
    }
    ws_.forms.emplace(name.text, std::move(form));
  }

  void parseConformal() {
    next();
    const Token& name = expectName();
    checkFresh(ws_.conformal, name, "conformal structure");
    expect("{");
    ConformalStructure s;
    std::set<LambdaKey> seenLambda;
    std::set<MuKey> seenMu;
    while (!accept("}")) {
      const Token& at = peek();
      if (at.type == Token::Type::ident && at.text == "basis") {
        basisLine(s.basis);
        continue;
      }
      if (at.type == Token::Type::ident && at.text == "mu") {
        next();
        expect("(");
        const std::size_t a = basisRef(s.basis);
        expect(",");
        const std::size_t b = basisRef(s.basis);
        expect(")");
        expect("[");
        expectKeyword("m");
        expect("=");
        const std::uint32_t m = expectNat();
        expect("]");
        expect("=");
        const Rational value = rational();
        expect(";");
        if (!seenMu.insert({a, b, m}).second) {
          fail(Kind::duplicateName, at, "duplicate mu");
        }
        try {
          s.setMu({a, b, m}, value);
        } catch (const ParityError&) {
          fail(Kind::parityMismatch, at, "mu pairs elements of different parity");
        }
        continue;
      }
      expectKeyword("lambda");
      expect("(");
      const std::size_t a = basisRef(s.basis);
      expect(",");
      const std::size_t b = basisRef(s.basis);
      expect("->");
      const std::size_t c = basisRef(s.basis);
      expect(")");
      expect("[");
      expectKeyword("n");
      expect("=");
      const std::uint32_t n = expectNat();
      expect(",");
      expectKeyword("m");
      expect("=");
      const std::uint32_t m = expectNat();
      expect("]");
      expect("=");
      const Rational value = rational();
      expect(";");
      const LambdaKey key{a, b, c, n, m};
      if (!seenLambda.insert(key).second) {
        fail(Kind::duplicateName, at, "duplicate lambda");
      }
      try {
        s.setLambda(key, value);
      } catch (const ParityError&) {
        fail(Kind::parityMismatch, at, "lambda breaks the grading");
      }
    }
    ws_.conformal.emplace(name.text, std::move(s));
  }

  /// Form entries may name families or basis elements of any Lie or
  /// conformal block, declared anywhere in the file.
  void resolveFormNames() const {
    for (const Token& t : formRefs_) {
      if (ws_.symbols.find(t.text)) {
        continue;
      }
      bool found = false;
      for (const auto& [n, lie] : ws_.lie) {
        found = found || lie.find(t.text).has_value();
      }
      for (const auto& [n, s] : ws_.conformal) {
        found = found || s.find(t.text).has_value();
      }
      if (!found) {
        fail(Kind::unknownIdentifier, t, "unknown identifier '" + t.text + "'");
      }
    }
  }

  Family family(const Token& t) const {
    if (auto f = ws_.symbols.find(t.text)) {
      return *f;
    }
    fail(Kind::unknownIdentifier, t, "unknown identifier '" + t.text + "'");
  }

  // Expressions.

  SuperPoly expr() {
    SuperPoly sum = unary();
    while (true) {
      if (accept("+")) {
        sum += unary();
      } else if (accept("-")) {
        sum -= unary();
      } else {
        return sum;
      }
    }
  }

  SuperPoly unary() {
    if (accept("-")) {
      return -unary();
    }
    return product();
  }

  SuperPoly product() {
    SuperPoly p = power();
    while (isPunct("*")) {
      if (operatorDAhead(1)) {
        return p;
      }
      next();
      if (accept("-")) {
        p = -(p * power());
      } else {
        p = p * power();
      }
    }
    return p;
  }

  SuperPoly power() {
    const Token& at = peek();
    SuperPoly base = primary();
    if (!accept("^")) {
      return base;
    }
    const std::uint32_t n = expectNat();
    const auto& terms = base.terms();
    const bool single = terms.size() == 1 && terms.begin()->first.size() == 1 && terms.begin()->second == 1;
    if (!single || isOdd(terms.begin()->first[0].family.parity)) {
      syntax(at, "'^' applies only to a single even generator");
    }
    SuperPoly out = SuperPoly::constant(1);
    for (std::uint32_t k = 0; k < n; ++k) {
      out = out * base;
    }
    return out;
  }

  /// D or D^n used as an operator rather than as D[...] / D^n[...].
  bool operatorDAhead(std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    if (t.type != Token::Type::ident || t.text != "D" || t.primes != 0) {
      return false;
    }
    if (isPunct("^", ahead + 1)) {
      return !isPunct("[", ahead + 3);
    }
    return !isPunct("[", ahead + 1);
  }

  SuperPoly primary() {
    const Token& t = peek();
    if (t.type == Token::Type::number) {
      return SuperPoly::constant(number());
    }
    if (accept("(")) {
      SuperPoly inner = expr();
      expect(")");
      return inner;
    }
    if (t.type != Token::Type::ident) {
      syntax(t, "expected an expression, found " + describe(t));
    }
    if (t.text == "D" && t.primes == 0) {
      if (operatorDAhead()) {
        syntax(t, "the operator D may only end a term of an operator entry");
      }
      next();
      std::uint32_t n = 1;
      if (accept("^")) {
        n = expectNat();
      }
      expect("[");
      SuperPoly inner = expr();
      expect("]");
      return totalDerivative(inner, n);
    }
    next();
    if (t.primes > 3) {
      syntax(t, "write D^" + std::to_string(t.primes) + "[" + t.text + "] instead of " + std::to_string(t.primes) + " primes");
    }
    return SuperPoly::generator(Generator{family(t), t.primes});
  }

  /// Terms c*D^n, c and D^n; D^n ends its term.
  DiffOpEntry opExpr() {
    DiffOpEntry e;
    bool negative = false;
    if (accept("-")) {
      negative = true;
    } else {
      accept("+");
    }
    while (true) {
      SuperPoly coeff = SuperPoly::constant(1);
      std::uint32_t order = 0;
      if (operatorDAhead()) {
        order = dPower();
      } else {
        coeff = product();
        if (accept("*")) {
          order = dPower();
        }
      }
      if (isPunct("*")) {
        syntax(peek(), "the operator D must be the last factor of a term");
      }
      e.add(order, negative ? SuperPoly(-coeff) : coeff);
      if (accept("+")) {
        negative = false;
      } else if (accept("-")) {
        negative = true;
      } else {
        return e;
      }
    }
  }

  std::uint32_t dPower() {
    if (!operatorDAhead()) {
      syntax(peek(), "expected D or D^n, found " + describe(peek()));
    }
    next();
    return accept("^") ? expectNat() : 1;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Workspace ws_;
  std::vector<Token> formRefs_;
};

}  // namespace detail

inline Workspace parseWorkspace(std::string_view source) { return detail::Parser(source).parse(); }

}  // namespace superham::frontend

#endif  // SUPERHAM_FRONTEND_PARSER_HPP
