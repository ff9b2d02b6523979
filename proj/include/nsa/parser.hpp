#pragma once

#include "nsa/adjoint.hpp"
#include "nsa/calculus.hpp"
#include "nsa/conslaw.hpp"
#include "nsa/context.hpp"
#include "nsa/raw_expr.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nsa {

struct Declaration {
  enum class Kind { param, func, unknown };
  Kind kind;
  std::string name;
};

struct EquationStmt {
  std::string name;
  Equation equation;
};

struct ExpressionStmt {
  std::string name;
  DiffExpr value;
};

struct SymmetryStmt {
  std::string name;
  PointSymmetry symmetry;
};

struct SubstitutionStmt {
  std::string name;
  Substitution substitution;
};

struct VectorStmt {
  std::string name;
  DiffExpr c0;
  DiffExpr c1;
};

using Statement = std::variant<EquationStmt, ExpressionStmt, SymmetryStmt, SubstitutionStmt, VectorStmt>;

/// A parsed ".nsa" file.
///
///   param p, c1;                 func a(t);      func A(t) deriv = a;
///   unknown phi(x,t,u);          eq kdv: u_t + u*u_xxx = 0;
///   phi inv = c1/u;              symmetry X { tau = t; xi = 0; eta = -u }
///   vector C { c0 = u; c1 = u_xx }      expr h = x*ln(u);
struct SourceDocument {
  std::shared_ptr<const Context> context;
  std::vector<Declaration> declarations;
  std::vector<Statement> statements;
  std::vector<std::string> warnings;

  const EquationStmt* equation(std::string_view name = {}) const;
  const SymmetryStmt* symmetry(std::string_view name) const;
  const SubstitutionStmt* substitution(std::string_view name = {}) const;
  const VectorStmt* vector(std::string_view name) const;
  const ExpressionStmt* expression(std::string_view name) const;

  std::vector<const SymmetryStmt*> symmetries() const;
  std::vector<const SubstitutionStmt*> substitutions() const;
  std::vector<const VectorStmt*> vectors() const;
};

/// Throws ParseError (positioned) for syntax, undeclared identifiers,
/// non-integer exponents and jets of non-dependent symbols;
/// DeclarationError for duplicates and malformed statements;
/// OrderCapError when a jet exceeds the cap.
SourceDocument parse(std::string_view text, int order_cap = kDefaultOrderCap);

/// Expression in the symbol table of an existing document.
DiffExpr parse_expression(std::string_view text, const Context& ctx, std::vector<std::string>* warnings = nullptr);
RawExpr parse_raw_expression(std::string_view text, const Context& ctx);

/// Either "symmetry { ... }" or the bare assignment list
/// "tau = ...; xi = ...; eta = ...". Missing coefficients are zero.
PointSymmetry parse_symmetry(std::string_view text, const Context& ctx);

std::string print(const Equation& eq);
std::string print(const PointSymmetry& X);
std::string print(const ConservedVector& cv);
/// Canonical re-rendering of a whole document.
std::string print(const SourceDocument& doc);

/// Adjoint-style layout: grouped by v-jets, then by u-jets.
std::string print_adjoint(const DiffExpr& e);

}  // namespace nsa
