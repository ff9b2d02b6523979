#include "nsa/parser.hpp"

#include "nsa/error.hpp"
#include "nsa/printer.hpp"

#include <cctype>
#include <optional>
#include <set>

namespace nsa {

namespace {

struct Token {
  enum class Kind { ident, number, punct, end };
  Kind kind = Kind::end;
  std::string text;
  int line = 1;
  int column = 1;
};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int column = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      while (j < src.size() && src[j] == '\'') ++j;
      tok.kind = Token::Kind::ident;
      tok.text = std::string(src.substr(start, j - start));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        throw ParseError("floating-point literals are not supported", line, column);
      }
      tok.kind = Token::Kind::number;
      tok.text = std::string(src.substr(start, j - start));
      advance(j - i);
    } else if (std::string_view("+-*/^()=;{},:").find(c) != std::string_view::npos) {
      tok.kind = Token::Kind::punct;
      tok.text = std::string(1, c);
      advance(1);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line, column);
    }
    out.push_back(std::move(tok));
  }
  Token end;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, Context& ctx, std::vector<std::string>* warnings)
      : tokens_(tokenize(text)), ctx_(ctx), warnings_(warnings) {}

  // --- expressions -------------------------------------------------------

  RawExpr expression() {
    RawExpr lhs = term();
    while (peek_punct("+") || peek_punct("-")) {
      bool plus = next().text == "+";
      RawExpr rhs = term();
      lhs = RawExpr::binary(plus ? RawExpr::Op::Add : RawExpr::Op::Sub, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  DiffExpr value() {
    const Token& start = peek();
    RawExpr raw = expression();
    try {
      return normalize(raw);
    } catch (const InvalidArgument& e) {
      throw ParseError(e.what(), start.line, start.column);
    }
  }

  // --- document -----------------------------------------------------------

  void document(SourceDocument& doc) {
    while (!at_end()) statement(doc);
  }

  bool at_end() const { return peek().kind == Token::Kind::end; }

  void expect_end() {
    if (!at_end()) fail("unexpected '" + peek().text + "'");
  }

  void expect_punct(const char* p) {
    if (!peek_punct(p)) fail(std::string("expected '") + p + "'");
    next();
  }

  bool accept_punct(const char* p) {
    if (!peek_punct(p)) return false;
    next();
    return true;
  }

  PointSymmetry symmetry_body(bool braces) {
    if (braces) expect_punct("{");
    DiffExpr tau;
    DiffExpr xi;
    DiffExpr eta;
    std::set<std::string> seen;
    const Token& start = peek();
    while (!(braces ? peek_punct("}") : at_end())) {
      Token name = expect_ident();
      if (name.text != "tau" && name.text != "xi" && name.text != "eta") {
        fail_at(name, "expected tau, xi or eta");
      }
      if (!seen.insert(name.text).second) fail_at(name, "duplicate coefficient " + name.text);
      expect_punct("=");
      DiffExpr e = value();
      (name.text == "tau" ? tau : name.text == "xi" ? xi : eta) = std::move(e);
      if (!accept_punct(";")) break;
    }
    if (braces) expect_punct("}");
    try {
      return PointSymmetry(std::move(tau), std::move(xi), std::move(eta));
    } catch (const InvalidArgument& e) {
      fail_at(start, e.what());
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[k];
  }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool peek_punct(const char* p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::punct && t.text == p;
  }
  bool peek_ident(const char* word, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::ident && t.text == word;
  }
  Token expect_ident() {
    if (peek().kind != Token::Kind::ident) fail("expected identifier");
    return next();
  }

  [[noreturn]] void fail(const std::string& message) const { fail_at(peek(), message); }
  [[noreturn]] static void fail_at(const Token& t, const std::string& message) {
    throw ParseError(message + (t.kind == Token::Kind::end ? " at end of input" : ""), t.line, t.column);
  }

  void warn(const Token& t, const std::string& message) {
    if (warnings_) warnings_->push_back(std::to_string(t.line) + ":" + std::to_string(t.column) + ": " + message);
  }

  RawExpr term() {
    bool negative = accept_punct("-");
    RawExpr lhs = factor();
    while (peek_punct("*") || peek_punct("/")) {
      bool times = next().text == "*";
      RawExpr rhs = factor();
      lhs = RawExpr::binary(times ? RawExpr::Op::Mul : RawExpr::Op::Div, std::move(lhs), std::move(rhs));
    }
    return negative ? RawExpr::negate(std::move(lhs)) : lhs;
  }

  RawExpr factor() {
    RawExpr b = base();
    if (!accept_punct("^")) return b;
    bool negative = false;
    if (peek_punct("-") || peek_punct("+")) negative = next().text == "-";
    if (peek().kind != Token::Kind::number) fail("non-integer exponent: exponents must be integer literals");
    Rational e(next().text);
    if (negative) e = -e;
    return RawExpr::power(std::move(b), e);
  }

  RawExpr base() {
    const Token& t = peek();
    if (t.kind == Token::Kind::number) {
      next();
      Rational value(t.text);
      value.canonicalize();
      return RawExpr::number(value);
    }
    if (accept_punct("(")) {
      RawExpr inner = expression();
      expect_punct(")");
      return inner;
    }
    if (t.kind != Token::Kind::ident) fail("expected an expression");
    Token id = next();
    if (id.text == "ln") {
      expect_punct("(");
      RawExpr arg = expression();
      expect_punct(")");
      return RawExpr::ln(std::move(arg));
    }
    return identifier(id);
  }

  void check(const Token& t, const Atom& a) {
    try {
      ctx_.check_order(a);
    } catch (const OrderCapError& e) {
      throw OrderCapError(std::to_string(t.line) + ":" + std::to_string(t.column) + ": " + e.what());
    }
  }

  RawExpr identifier(const Token& id) {
    const std::string& s = id.text;
    auto underscore = s.find('_');
    if (underscore != std::string::npos) return subscripted(id, s.substr(0, underscore), s.substr(underscore + 1));

    std::size_t primes = 0;
    std::string name = s;
    while (!name.empty() && name.back() == '\'') {
      name.pop_back();
      ++primes;
    }
    if (primes == 0) {
      if (s == "t" || s == "x") return RawExpr::atom(Atom::indep(s[0]));
      if (s == "u" || s == "v") return RawExpr::atom(Atom::jet(s[0], 0, 0));
      if (ctx_.is_param(s)) return RawExpr::param(s);
      if (ctx_.is_unknown(s)) {
        optional_arguments({"x", "t", "u"});
        return RawExpr::atom(Atom::unknown(s));
      }
    }
    if (const FunctionDecl* fn = ctx_.function(name)) {
      if (primes > 0 && fn->derivative) fail_at(id, "'" + name + "' has a derivative rule; primes are not allowed");
      Atom a = Atom::coeff_fn(name, static_cast<int>(primes));
      check(id, a);
      optional_arguments({"t"});
      return RawExpr::atom(a);
    }
    fail_at(id, "undeclared identifier '" + s + "'");
  }

  void optional_arguments(std::initializer_list<const char*> names) {
    if (!peek_punct("(")) return;
    next();
    bool first = true;
    for (const char* n : names) {
      if (!first) expect_punct(",");
      first = false;
      if (!peek_ident(n)) fail(std::string("expected '") + n + "'");
      next();
    }
    expect_punct(")");
  }

  RawExpr subscripted(const Token& id, const std::string& head, const std::string& sub) {
    if (sub.empty() || sub.find('_') != std::string::npos || sub.find('\'') != std::string::npos) {
      fail_at(id, "malformed subscript in '" + id.text + "'");
    }
    if (head == "u" || head == "v") {
      int t_order = 0;
      int x_order = 0;
      bool saw_x = false;
      bool reordered = false;
      for (char c : sub) {
        if (c == 't') {
          ++t_order;
          if (saw_x) reordered = true;
        } else if (c == 'x') {
          ++x_order;
          saw_x = true;
        } else {
          fail_at(id, "jet subscripts may only contain t and x: '" + id.text + "'");
        }
      }
      Atom a = Atom::jet(head[0], t_order, x_order);
      if (reordered) warn(id, "'" + id.text + "' read as " + a.to_string());
      check(id, a);
      return RawExpr::atom(a);
    }
    if (ctx_.is_unknown(head)) {
      int px = 0;
      int pt = 0;
      int pu = 0;
      for (char c : sub) {
        if (c == 'x') {
          ++px;
        } else if (c == 't') {
          ++pt;
        } else if (c == 'u') {
          ++pu;
        } else {
          fail_at(id, "partial subscripts may only contain x, t and u: '" + id.text + "'");
        }
      }
      Atom a = Atom::unknown(head, px, pt, pu);
      check(id, a);
      return RawExpr::atom(a);
    }
    if (ctx_.is_declared(head) || head == "t" || head == "x") {
      fail_at(id, "jet on a non-dependent symbol '" + head + "'");
    }
    fail_at(id, "undeclared identifier '" + head + "'");
  }

  // --- statements ---------------------------------------------------------

  void declare(const Token& at, SourceDocument& doc, Declaration::Kind kind, const std::string& name) {
    try {
      switch (kind) {
        case Declaration::Kind::param:
          ctx_.declare_param(name);
          break;
        case Declaration::Kind::func:
          ctx_.declare_function(name);
          break;
        case Declaration::Kind::unknown:
          ctx_.declare_unknown(name);
          break;
      }
    } catch (const DeclarationError& e) {
      throw DeclarationError(std::to_string(at.line) + ":" + std::to_string(at.column) + ": " + e.what());
    }
    doc.declarations.push_back({kind, name});
  }

  void claim_name(const Token& at, const std::string& name) {
    if (!names_.insert(name).second) {
      throw DeclarationError(std::to_string(at.line) + ":" + std::to_string(at.column) + ": duplicate statement name '" +
                             name + "'");
    }
  }

  std::string auto_name(const char* prefix, int& counter) {
    std::string n;
    do {
      n = prefix + std::to_string(++counter);
    } while (names_.count(n));
    names_.insert(n);
    return n;
  }

  std::string optional_name(const char* prefix, int& counter) {
    if (peek().kind == Token::Kind::ident) {
      Token n = next();
      claim_name(n, n.text);
      return n.text;
    }
    return auto_name(prefix, counter);
  }

  void statement(SourceDocument& doc) {
    const Token start = peek();
    if (peek_ident("param")) {
      next();
      do {
        Token n = expect_ident();
        declare(n, doc, Declaration::Kind::param, n.text);
      } while (accept_punct(","));
      expect_punct(";");
      return;
    }
    if (peek_ident("func")) {
      next();
      Token n = expect_ident();
      declare(n, doc, Declaration::Kind::func, n.text);
      optional_arguments({"t"});
      if (peek_ident("deriv")) {
        next();
        expect_punct("=");
        DiffExpr rule = value();
        try {
          ctx_.set_function_derivative(n.text, std::move(rule));
        } catch (const DeclarationError& e) {
          fail_at(n, e.what());
        }
      }
      expect_punct(";");
      return;
    }
    if (peek_ident("unknown")) {
      next();
      Token n = expect_ident();
      declare(n, doc, Declaration::Kind::unknown, n.text);
      optional_arguments({"x", "t", "u"});
      expect_punct(";");
      return;
    }
    if (peek_ident("symmetry")) {
      next();
      std::string name = optional_name("X", sym_count_);
      PointSymmetry X = symmetry_body(true);
      accept_punct(";");
      doc.statements.emplace_back(SymmetryStmt{name, std::move(X)});
      return;
    }
    if (peek_ident("vector")) {
      next();
      std::string name = optional_name("C", vec_count_);
      expect_punct("{");
      DiffExpr parts[2];
      for (int i = 0; i < 2; ++i) {
        const char* key = i == 0 ? "c0" : "c1";
        if (!peek_ident(key)) fail(std::string("expected '") + key + "'");
        next();
        expect_punct("=");
        parts[i] = value();
        if (i == 0) {
          expect_punct(";");
        } else {
          accept_punct(";");
        }
      }
      expect_punct("}");
      accept_punct(";");
      doc.statements.emplace_back(VectorStmt{name, std::move(parts[0]), std::move(parts[1])});
      return;
    }
    if (peek_ident("expr") && peek(1).kind == Token::Kind::ident && peek_punct("=", 2)) {
      next();
      Token n = next();
      claim_name(n, n.text);
      next();
      DiffExpr e = value();
      expect_punct(";");
      doc.statements.emplace_back(ExpressionStmt{n.text, std::move(e)});
      return;
    }
    bool named_phi = peek_ident("phi") && peek(1).kind == Token::Kind::ident && peek_punct("=", 2);
    if (peek_ident("phi") && (peek_punct("=", 1) || named_phi)) {
      next();
      std::string name = named_phi ? optional_name("phi", phi_count_) : auto_name("phi", phi_count_);
      expect_punct("=");
      DiffExpr phi = value();
      expect_punct(";");
      try {
        doc.statements.emplace_back(SubstitutionStmt{name, Substitution(std::move(phi))});
      } catch (const InvalidArgument& e) {
        fail_at(start, e.what());
      }
      return;
    }
    std::string name;
    if (peek_ident("eq") && peek(1).kind == Token::Kind::ident && peek_punct(":", 2)) {
      next();
      Token n = next();
      claim_name(n, n.text);
      name = n.text;
      next();
    }
    DiffExpr lhs = value();
    if (accept_punct("=")) {
      DiffExpr rhs = value();
      expect_punct(";");
      if (name.empty()) name = auto_name("eq", eq_count_);
      try {
        doc.statements.emplace_back(EquationStmt{name, Equation::from_lhs(lhs - rhs)});
      } catch (const InvalidArgument& e) {
        fail_at(start, e.what());
      }
      return;
    }
    if (!name.empty()) fail("expected '=' in equation");
    expect_punct(";");
    doc.statements.emplace_back(ExpressionStmt{auto_name("e", expr_count_), std::move(lhs)});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Context& ctx_;
  std::vector<std::string>* warnings_;
  std::set<std::string> names_;
  int eq_count_ = 0;
  int sym_count_ = 0;
  int phi_count_ = 0;
  int vec_count_ = 0;
  int expr_count_ = 0;
};

template <class T>
const T* find_stmt(const std::vector<Statement>& statements, std::string_view name) {
  for (const auto& s : statements) {
    if (const T* p = std::get_if<T>(&s)) {
      if (name.empty() || p->name == name) return p;
    }
  }
  return nullptr;
}

template <class T>
std::vector<const T*> all_stmts(const std::vector<Statement>& statements) {
  std::vector<const T*> out;
  for (const auto& s : statements) {
    if (const T* p = std::get_if<T>(&s)) out.push_back(p);
  }
  return out;
}

}  // namespace

const EquationStmt* SourceDocument::equation(std::string_view name) const {
  return find_stmt<EquationStmt>(statements, name);
}
const SymmetryStmt* SourceDocument::symmetry(std::string_view name) const {
  return name.empty() ? nullptr : find_stmt<SymmetryStmt>(statements, name);
}
const SubstitutionStmt* SourceDocument::substitution(std::string_view name) const {
  return find_stmt<SubstitutionStmt>(statements, name);
}
const VectorStmt* SourceDocument::vector(std::string_view name) const {
  return name.empty() ? nullptr : find_stmt<VectorStmt>(statements, name);
}
const ExpressionStmt* SourceDocument::expression(std::string_view name) const {
  return name.empty() ? nullptr : find_stmt<ExpressionStmt>(statements, name);
}
std::vector<const SymmetryStmt*> SourceDocument::symmetries() const { return all_stmts<SymmetryStmt>(statements); }
std::vector<const SubstitutionStmt*> SourceDocument::substitutions() const {
  return all_stmts<SubstitutionStmt>(statements);
}
std::vector<const VectorStmt*> SourceDocument::vectors() const { return all_stmts<VectorStmt>(statements); }

SourceDocument parse(std::string_view text, int order_cap) {
  auto ctx = std::make_shared<Context>(order_cap);
  SourceDocument doc;
  Parser parser(text, *ctx, &doc.warnings);
  parser.document(doc);
  doc.context = std::move(ctx);
  return doc;
}

RawExpr parse_raw_expression(std::string_view text, const Context& ctx) {
  // The parser only mutates the context for declarations, which an
  // expression never contains.
  Context copy = ctx;
  Parser parser(text, copy, nullptr);
  RawExpr raw = parser.expression();
  parser.expect_end();
  return raw;
}

DiffExpr parse_expression(std::string_view text, const Context& ctx, std::vector<std::string>* warnings) {
  Context copy = ctx;
  Parser parser(text, copy, warnings);
  DiffExpr e = parser.value();
  parser.expect_end();
  return e;
}

PointSymmetry parse_symmetry(std::string_view text, const Context& ctx) {
  Context copy = ctx;
  std::string_view body = text;
  auto first = body.find_first_not_of(" \t\n");
  bool keyword = first != std::string_view::npos && body.substr(first).rfind("symmetry", 0) == 0;
  if (keyword) body = body.substr(first + std::string_view("symmetry").size());
  Parser parser(body, copy, nullptr);
  bool braces = body.find('{') != std::string_view::npos;
  PointSymmetry X = parser.symmetry_body(braces);
  parser.accept_punct(";");
  parser.expect_end();
  return X;
}

std::string print(const Equation& eq) { return print(eq.lhs()) + " = 0"; }

std::string print(const PointSymmetry& X) {
  return "symmetry { tau = " + print(X.tau()) + "; xi = " + print(X.xi()) + "; eta = " + print(X.eta()) + " }";
}

std::string print(const ConservedVector& cv) {
  return "vector { c0 = " + print(cv.c0) + "; c1 = " + print(cv.c1) + " }";
}

std::string print_adjoint(const DiffExpr& e) {
  return print_grouped(e, {[](const Atom& a) { return a.is_jet('v'); },
                           [](const Atom& a) { return a.is_jet('u') || a.kind() == AtomKind::IndepVar; }});
}

std::string print(const SourceDocument& doc) {
  std::string out;
  const Context& ctx = *doc.context;
  for (const auto& d : doc.declarations) {
    switch (d.kind) {
      case Declaration::Kind::param:
        out += "param " + d.name + ";\n";
        break;
      case Declaration::Kind::func: {
        out += "func " + d.name + "(t)";
        const FunctionDecl* fn = ctx.function(d.name);
        if (fn && fn->derivative) out += " deriv = " + print(*fn->derivative);
        out += ";\n";
        break;
      }
      case Declaration::Kind::unknown:
        out += "unknown " + d.name + "(x,t,u);\n";
        break;
    }
  }
  for (const auto& s : doc.statements) {
    std::visit(
        [&](const auto& stmt) {
          using T = std::decay_t<decltype(stmt)>;
          if constexpr (std::is_same_v<T, EquationStmt>) {
            out += "eq " + stmt.name + ": " + print(stmt.equation) + ";\n";
          } else if constexpr (std::is_same_v<T, ExpressionStmt>) {
            out += "expr " + stmt.name + " = " + print(stmt.value) + ";\n";
          } else if constexpr (std::is_same_v<T, SymmetryStmt>) {
            std::string body = print(stmt.symmetry);
            out += "symmetry " + stmt.name + body.substr(std::string("symmetry").size()) + "\n";
          } else if constexpr (std::is_same_v<T, SubstitutionStmt>) {
            out += "phi " + stmt.name + " = " + print(stmt.substitution.phi()) + ";\n";
          } else {
            out += "vector " + stmt.name + " { c0 = " + print(stmt.c0) + "; c1 = " + print(stmt.c1) + " }\n";
          }
        },
        s);
  }
  return out;
}

}  // namespace nsa
