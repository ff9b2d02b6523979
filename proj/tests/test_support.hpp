#pragma once

#include "nsa/context.hpp"
#include "nsa/expr.hpp"
#include "nsa/parser.hpp"
#include "nsa/raw_expr.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace nsa::testing {

/// Shared symbol table for randomized suites:
///   param p, q;  func a(t);  func A(t) deriv = a;  unknown phi(x,t,u);
inline const Context& random_context() {
  static const Context ctx = [] {
    Context c;
    c.declare_param("p");
    c.declare_param("q");
    c.declare_function("a");
    c.declare_function("A");
    c.set_function_derivative("A", DiffExpr(Atom::coeff_fn("a")));
    c.declare_unknown("phi");
    return c;
  }();
  return ctx;
}

inline DiffExpr parse_in(const std::string& text, const Context& ctx = random_context()) {
  return parse_expression(text, ctx);
}

struct GeneratorOptions {
  int max_terms = 4;
  int max_factors = 3;
  int max_jet_order = 3;
  bool with_v = false;
  bool with_mixed = true;         // u_t, u_tx
  bool with_unknown = true;       // phi and its partials
  bool with_log = true;           // ln(u), ln(x)
  bool with_functions = true;     // a, a', A
  bool with_params = true;
  bool negative_powers = true;    // u^-1, x^-1
};

/// Seeded generator of canonical expressions and raw trees.
class ExprGenerator {
 public:
  explicit ExprGenerator(std::uint64_t seed, GeneratorOptions options = {}) : rng_(seed), opt_(options) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  Rational rational() {
    int num = uniform(-5, 5);
    if (num == 0) num = 1;
    int den = chance(0.3) ? uniform(2, 4) : 1;
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  ParamPoly coefficient() {
    ParamPoly c(rational());
    if (opt_.with_params && chance(0.25)) c = c * ParamPoly::param(chance(0.5) ? "p" : "q");
    if (opt_.with_params && chance(0.1)) c = c + ParamPoly(rational());
    return c;
  }

  Atom atom() {
    for (;;) {
      switch (uniform(0, 9)) {
        case 0:
          return Atom::indep(chance(0.5) ? 'x' : 't');
        case 1:
          if (!opt_.with_functions) break;
          switch (uniform(0, 2)) {
            case 0:
              return Atom::coeff_fn("a");
            case 1:
              return Atom::coeff_fn("a", 1);
            default:
              return Atom::coeff_fn("A");
          }
        case 2:
          if (!opt_.with_unknown) break;
          return Atom::unknown("phi", uniform(0, 1), uniform(0, 1) * (chance(0.3) ? 1 : 0), uniform(0, 1));
        case 3:
          if (!opt_.with_mixed) break;
          return Atom::jet('u', 1, uniform(0, 1));
        case 4:
          if (!opt_.with_v) break;
          return Atom::jet('v', 0, uniform(0, 2));
        case 5:
          if (!opt_.with_log) break;
          return Atom::log(DiffExpr(Atom::jet('u', 0, 0)));
        default:
          return Atom::jet('u', 0, uniform(0, opt_.max_jet_order));
      }
    }
  }

  int exponent(const Atom& a) {
    bool invertible = a.is_jet('u') && a.jet_order() == 0;
    invertible = invertible || a.is_indep('x');
    if (opt_.negative_powers && invertible && chance(0.2)) return -uniform(1, 2);
    return chance(0.75) ? 1 : 2;
  }

  DiffExpr monomial() {
    DiffExpr m(coefficient());
    int n = uniform(0, opt_.max_factors);
    for (int i = 0; i < n; ++i) {
      Atom a = atom();
      m *= DiffExpr(a, exponent(a));
    }
    return m;
  }

  DiffExpr expr() {
    DiffExpr e;
    int n = uniform(1, opt_.max_terms);
    for (int i = 0; i < n; ++i) e += monomial();
    return e;
  }

  DiffExpr nonzero_expr() {
    for (;;) {
      DiffExpr e = expr();
      if (!e.is_zero()) return e;
    }
  }

  /// Unnormalized tree; divisions and negative powers only hit monomials.
  RawExpr raw(int depth = 3) {
    if (depth == 0 || chance(0.25)) return RawExpr::atom(atom());
    switch (uniform(0, 7)) {
      case 0:
        return RawExpr::number(rational());
      case 1:
        return RawExpr::binary(RawExpr::Op::Add, raw(depth - 1), raw(depth - 1));
      case 2:
        return RawExpr::binary(RawExpr::Op::Sub, raw(depth - 1), raw(depth - 1));
      case 3:
        return RawExpr::binary(RawExpr::Op::Mul, raw(depth - 1), raw(depth - 1));
      case 4:
        return RawExpr::negate(raw(depth - 1));
      case 5:
        return RawExpr::power(raw(depth - 1), Rational(uniform(0, 2)));
      case 6: {
        Atom d = chance(0.5) ? Atom::jet('u', 0, 0) : Atom::indep('x');
        return RawExpr::binary(RawExpr::Op::Div, raw(depth - 1), RawExpr::atom(d));
      }
      default:
        return opt_.with_params ? RawExpr::binary(RawExpr::Op::Mul, RawExpr::param("p"), raw(depth - 1))
                                : raw(depth - 1);
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  GeneratorOptions opt_;
};

}  // namespace nsa::testing
