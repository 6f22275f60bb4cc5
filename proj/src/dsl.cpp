#include "wno/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace wno {

namespace {

// The formal symbol D of local entries is parsed as an extra polynomial
// variable and read off as the powers of ∂ₓ afterwards.
constexpr int kDField = 1 << 20;
const JetVar kD{kDField, 0};

enum class Tok { Ident, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && (src[j] == '.' || src[j] == 'e' || src[j] == 'E'))
        throw ParseError(ParseErrorKind::Syntax, line, col,
                         "floating-point literals are not accepted; write exact rationals such as 2/3");
      // A digit run glued to letters ("2x") is a malformed identifier.
      if (j < src.size() && (std::isalpha(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        throw ParseError(ParseErrorKind::Syntax, line, col, "malformed token '" +
                                                                std::string(src.substr(i, j - i + 1)) + "'");
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::string_view(";,{}[]:*/+-^()|").find(static_cast<char>(c)) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, static_cast<char>(c));
      advance(1);
    } else {
      throw ParseError(ParseErrorKind::Syntax, line, col, std::string("unexpected character '") +
                                                              static_cast<char>(c) + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Int: return "number '" + t.text + "'";
    case Tok::Ident: return "'" + t.text + "'";
    case Tok::Punct: return "'" + t.text + "'";
  }
  return "?";
}

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(lex(src)) {}

  OperatorFile run() {
    OperatorFile f;
    bool have_fields = false;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind != Tok::Ident) fail(t, "expected 'fields', 'operator' or 'firstorder', found " + describe(t));
      if (t.text == "fields") {
        if (have_fields) semantic(t, "fields are already declared");
        next();
        parse_fields(f);
        have_fields = true;
      } else if (t.text == "operator" || t.text == "firstorder") {
        if (!have_fields) semantic(t, "declare the fields before any operator");
        bool is_op = t.text == "operator";
        next();
        const Token& name = expect_ident("a name");
        if (!names.insert(name.text).second) semantic(name, "duplicate name '" + name.text + "'");
        if (is_op) f.operators.push_back(parse_operator(name.text));
        else f.firstorders.push_back(parse_firstorder(name.text, name));
      } else {
        fail(t, "expected 'fields', 'operator' or 'firstorder', found " + describe(t));
      }
    }
    return f;
  }

 private:
  [[noreturn]] static void fail(const Token& t, const std::string& msg) {
    throw ParseError(ParseErrorKind::Syntax, t.line, t.column, msg);
  }
  [[noreturn]] static void semantic(const Token& t, const std::string& msg) {
    throw ParseError(ParseErrorKind::Semantic, t.line, t.column, msg);
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at(const char* punct) const { return peek().kind == Tok::Punct && peek().text == punct; }
  bool accept(const char* punct) {
    if (!at(punct)) return false;
    next();
    return true;
  }
  const Token& expect(const char* punct) {
    if (!at(punct)) fail(peek(), std::string("expected '") + punct + "', found " + describe(peek()));
    return next();
  }
  const Token& expect_ident(const char* what) {
    if (peek().kind != Tok::Ident) fail(peek(), std::string("expected ") + what + ", found " + describe(peek()));
    return next();
  }
  long expect_int() {
    if (peek().kind != Tok::Int) fail(peek(), "expected an integer, found " + describe(peek()));
    const Token& t = next();
    if (t.text.size() > 9) fail(t, "integer too large here");
    return std::stol(t.text);
  }

  void parse_fields(OperatorFile& f) {
    do {
      const Token& t = expect_ident("a field name");
      if (t.text == "D") semantic(t, "'D' is reserved for the derivative symbol");
      if (t.text.find('_') != std::string::npos) semantic(t, "field names may not contain '_'");
      if (std::find(fields_.begin(), fields_.end(), t.text) != fields_.end())
        semantic(t, "field '" + t.text + "' declared twice");
      fields_.push_back(t.text);
    } while (accept(","));
    expect(";");
    f.fields = fields_;
  }

  // "[i,j]:" after an entry keyword, returning 0-based indices.
  std::pair<int, int> parse_index() {
    expect("[");
    const Token& ti = peek();
    long i = expect_int();
    expect(",");
    const Token& tj = peek();
    long j = expect_int();
    expect("]");
    expect(":");
    const long n = static_cast<long>(fields_.size());
    if (i < 1 || i > n)
      throw ParseError(ParseErrorKind::IndexRange, ti.line, ti.column,
                       "index " + std::to_string(i) + " out of range 1.." + std::to_string(n));
    if (j < 1 || j > n)
      throw ParseError(ParseErrorKind::IndexRange, tj.line, tj.column,
                       "index " + std::to_string(j) + " out of range 1.." + std::to_string(n));
    return {static_cast<int>(i - 1), static_cast<int>(j - 1)};
  }

  OperatorDecl parse_operator(const std::string& name) {
    OperatorDecl d;
    d.name = name;
    expect("{");
    while (!accept("}")) {
      const Token& kw = expect_ident("'local', 'nonlocal' or '}'");
      if (kw.text == "local") {
        auto [i, j] = parse_index();
        const Token& start = peek();
        allow_d_ = true;
        RationalExpr e = parse_expr();
        allow_d_ = false;
        if (e.denominator().degree_in(kD) > 0) semantic(start, "D may not appear in a denominator");
        DiffEntry op;
        for (const auto& [k, c] : e.numerator().coefficients_in(kD)) {
          if (static_cast<int>(op.size()) <= k) op.resize(k + 1);
          op[k] = RationalExpr(c, e.denominator());
        }
        while (!op.empty() && op.back().is_zero()) op.pop_back();
        d.local.push_back({i, j, std::move(op)});
      } else if (kw.text == "nonlocal") {
        auto [i, j] = parse_index();
        Rational e = 1;
        if (!at("[")) {
          e = parse_rational();
          expect("*");
        }
        expect("[");
        RationalExpr w = parse_expr();
        expect("|");
        RationalExpr z = parse_expr();
        expect("]");
        d.nonlocal.push_back({i, j, e, std::move(w), std::move(z)});
      } else {
        fail(kw, "expected 'local', 'nonlocal' or '}', found " + describe(kw));
      }
      expect(";");
    }
    return d;
  }

  FirstOrderDecl parse_firstorder(const std::string& name, const Token& name_tok) {
    FirstOrderDecl d;
    d.name = name;
    expect("{");
    while (!accept("}")) {
      const Token& kw = expect_ident("'g', 'w' or '}'");
      if (kw.text != "g" && kw.text != "w") fail(kw, "expected 'g', 'w' or '}', found " + describe(kw));
      if (kw.text == "g" && !d.w.empty()) fail(kw, "metric entries must precede the w entries");
      auto [i, j] = parse_index();
      const Token& start = peek();
      RationalExpr v = parse_expr();
      if (!v.only_order_zero()) semantic(start, "entries of a first-order block may depend on the fields only");
      (kw.text == "g" ? d.g : d.w).push_back({i, j, std::move(v)});
      expect(";");
    }
    if (d.g.empty()) semantic(name_tok, "first-order block '" + name + "' has no metric entries");
    return d;
  }

  // ['+'|'-']* ( '(' rational ')' | int ['/' int] )
  Rational parse_rational() {
    int sign = 1;
    while (at("+") || at("-"))
      if (next().text == "-") sign = -sign;
    Rational q;
    if (accept("(")) {
      q = parse_rational();
      expect(")");
    } else {
      q = Rational(expect_int());
      if (accept("/")) {
        const Token& t = peek();
        long den = expect_int();
        if (den == 0) semantic(t, "division by zero");
        q /= Rational(den);
      }
    }
    q.canonicalize();
    return sign > 0 ? q : Rational(-q);
  }

  RationalExpr parse_expr() {
    RationalExpr acc = parse_term();
    while (at("+") || at("-")) {
      bool minus = next().text == "-";
      RationalExpr t = parse_term();
      if (minus) acc -= t;
      else acc += t;
    }
    return acc;
  }

  RationalExpr parse_term() {
    RationalExpr acc = parse_factor();
    while (at("*") || at("/")) {
      bool div = next().text == "/";
      const Token& t = peek();
      RationalExpr f = parse_factor();
      if (div) {
        if (f.is_zero()) semantic(t, "division by zero");
        acc /= f;
      } else {
        acc *= f;
      }
    }
    return acc;
  }

  RationalExpr parse_factor() {
    if (accept("-")) return -parse_factor();
    if (accept("+")) return parse_factor();
    const Token& start = peek();
    RationalExpr base = parse_primary();
    if (accept("^")) {
      bool neg = accept("-");
      long k = expect_int();
      if (k > 64) fail(start, "exponent too large");
      if (neg && base.is_zero()) semantic(start, "division by zero");
      if (neg && base.depends_on(kD)) semantic(start, "D may not appear in a denominator");
      base = base.pow(static_cast<int>(neg ? -k : k));
    }
    return base;
  }

  RationalExpr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      next();
      return RationalExpr(Rational(t.text));
    }
    if (accept("(")) {
      RationalExpr e = parse_expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::Ident) {
      next();
      return RationalExpr::variable(resolve(t));
    }
    fail(t, "expected an expression, found " + describe(t));
  }

  JetVar resolve(const Token& t) {
    const std::string& s = t.text;
    if (s == "D") {
      if (!allow_d_) semantic(t, "the derivative symbol D is only allowed in local entries");
      return kD;
    }
    std::size_t us = s.find('_');
    std::string base = s.substr(0, us);
    auto it = std::find(fields_.begin(), fields_.end(), base);
    if (it == fields_.end())
      throw ParseError(ParseErrorKind::UndeclaredField, t.line, t.column, "undeclared field '" + base + "'");
    int order = 0;
    if (us != std::string::npos) {
      std::string suf = s.substr(us + 1);
      if (!suf.empty() && std::all_of(suf.begin(), suf.end(), [](char c) { return c == 'x'; })) {
        order = static_cast<int>(suf.size());
      } else if (suf.size() >= 2 && suf.back() == 'x' &&
                 std::all_of(suf.begin(), suf.end() - 1, [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) &&
                 suf.size() < 6) {
        order = std::stoi(suf.substr(0, suf.size() - 1));
      } else {
        fail(t, "malformed derivative suffix in '" + s + "' (use _x, _xx or _3x)");
      }
    }
    return JetVar{static_cast<int>(it - fields_.begin()), order};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> fields_;
  bool allow_d_ = false;
};

std::string index_string(int i, int j) { return "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]"; }

}  // namespace

std::string to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::UndeclaredField: return "undeclared-field";
    case ParseErrorKind::IndexRange: return "index-range";
    case ParseErrorKind::Semantic: return "semantic";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, int line, int column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + to_string(kind) +
                         " error: " + message),
      kind_(kind),
      line_(line),
      column_(column),
      message_(message) {}

const OperatorDecl* OperatorFile::find_operator(const std::string& name) const {
  for (const auto& d : operators)
    if (d.name == name) return &d;
  return nullptr;
}

const FirstOrderDecl* OperatorFile::find_firstorder(const std::string& name) const {
  for (const auto& d : firstorders)
    if (d.name == name) return &d;
  return nullptr;
}

Naming OperatorFile::naming() const {
  Naming n;
  n.fields = fields;
  return n;
}

OperatorFile parse(std::string_view source) { return Parser(source).run(); }

std::string print(const OperatorFile& file) {
  const Naming names = file.naming();
  std::ostringstream out;
  out << "fields ";
  for (std::size_t i = 0; i < file.fields.size(); ++i) out << (i ? ", " : "") << file.fields[i];
  out << ";\n";
  for (const auto& d : file.operators) {
    out << "\noperator " << d.name << " {\n";
    for (const auto& e : d.local) out << "  local" << index_string(e.i, e.j) << ": " << diff_to_string(e.op, names) << ";\n";
    for (const auto& e : d.nonlocal)
      out << "  nonlocal" << index_string(e.i, e.j) << ": (" << to_string(e.e) << ")*[" << e.w.to_string(names) << " | "
          << e.z.to_string(names) << "];\n";
    out << "}\n";
  }
  for (const auto& d : file.firstorders) {
    out << "\nfirstorder " << d.name << " {\n";
    for (const auto& e : d.g) out << "  g" << index_string(e.i, e.j) << ": " << e.value.to_string(names) << ";\n";
    for (const auto& e : d.w) out << "  w" << index_string(e.i, e.j) << ": " << e.value.to_string(names) << ";\n";
    out << "}\n";
  }
  return out.str();
}

WNOperator to_operator(const OperatorFile& file, const OperatorDecl& decl) {
  const int n = file.n();
  WNOperator p(n);
  for (const auto& e : decl.local)
    for (int k = 0; k < static_cast<int>(e.op.size()); ++k) p.at(e.i, e.j, k) += e.op[k];
  for (const auto& e : decl.nonlocal) {
    Tail t{e.e, std::vector<RationalExpr>(n), std::vector<RationalExpr>(n)};
    t.w[e.i] = e.w;
    t.z[e.j] = e.z;
    p.tails.push_back(std::move(t));
  }
  p.trim();
  return p;
}

MetricData to_metric(const OperatorFile& file, const FirstOrderDecl& decl) {
  MetricData m = MetricData::zero(file.n());
  for (const auto& e : decl.g) m.g_upper[e.i][e.j] += e.value;
  for (const auto& e : decl.w) m.W[e.i][e.j] += e.value;
  return m;
}

}  // namespace wno
