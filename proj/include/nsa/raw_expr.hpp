#pragma once

#include "nsa/expr.hpp"

#include <string>
#include <vector>

namespace nsa {

/// Unnormalized expression tree, as produced by the parser.
struct RawExpr {
  enum class Op { Number, Param, Leaf, Add, Sub, Mul, Div, Neg, Pow, Ln };

  Op op = Op::Number;
  Rational value;         // Number; exponent for Pow
  std::string name;       // Param
  std::vector<Atom> leaf; // Leaf (zero or one element)
  std::vector<RawExpr> children;

  static RawExpr number(const Rational& q);
  static RawExpr param(std::string name);
  static RawExpr atom(const Atom& a);
  static RawExpr binary(Op op, RawExpr lhs, RawExpr rhs);
  static RawExpr negate(RawExpr operand);
  static RawExpr power(RawExpr base, const Rational& exponent);
  static RawExpr ln(RawExpr argument);
};

/// Canonical form of a tree. Throws InvalidArgument on a non-integer
/// exponent, UnsupportedError when dividing by or inverting a sum.
DiffExpr normalize(const RawExpr& raw);

/// A tree whose normalization is e.
RawExpr to_raw(const DiffExpr& e);

/// ln(g) as an expression: 0 when g = 1.
DiffExpr ln(const DiffExpr& g);

}  // namespace nsa
