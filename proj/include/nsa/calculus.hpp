#pragma once

#include "nsa/context.hpp"
#include "nsa/expr.hpp"

#include <span>
#include <string>

namespace nsa {

enum class Direction { t, x };

/// D_t or D_x. Jets bump by one order, CoeffFn follows its declared rule
/// (and is constant in x), phi(x,t,u) follows the chain rule and
/// D(ln g) = Dg / g for a monomial g.
DiffExpr total_derivative(const DiffExpr& e, Direction dir, const Context& ctx);
DiffExpr total_derivative(const DiffExpr& e, Direction dir, int times, const Context& ctx);

/// Partial derivative with respect to a jet coordinate. Unknown functions
/// phi(x,t,u) depend on the order-zero jet u.
DiffExpr partial_derivative(const DiffExpr& e, const Atom& jet, const Context& ctx);

/// Variational derivative with respect to dependent `dep` ('u' or 'v').
DiffExpr euler(const DiffExpr& e, char dep, const Context& ctx);

/// Replaces every jet dep_J by D_J(phi). phi must be free of dep.
DiffExpr substitute_dependent(const DiffExpr& e, char dep, const DiffExpr& phi, const Context& ctx);

/// Replaces the coefficient function `name` by `value` and its primed
/// forms by the matching t-derivatives of `value`.
DiffExpr instantiate_function(const DiffExpr& e, const std::string& name, const DiffExpr& value,
                              const Context& ctx);

/// An evolution equation dep_t + H = 0, kept with its solved form dep_t = -H.
class Equation {
 public:
  /// Validates the evolutionary shape. A leading -dep_t is accepted and the
  /// whole left-hand side negated. Throws InvalidArgument otherwise, or
  /// UnsupportedError for mixed derivatives of u.
  static Equation from_lhs(const DiffExpr& lhs, char dep = 'u');

  const DiffExpr& lhs() const noexcept { return lhs_; }
  char dependent() const noexcept { return dep_; }
  /// Highest x-order of the dependent.
  int order() const noexcept { return order_; }
  /// -H, the value of dep_t on solutions.
  const DiffExpr& solved_rhs() const noexcept { return rhs_; }

 private:
  Equation() = default;

  DiffExpr lhs_;
  DiffExpr rhs_;
  char dep_ = 'u';
  int order_ = 0;
};

/// Rewrites t-derivatives of every governed dependent through the solved
/// forms until none remain.
DiffExpr reduce_mod(const DiffExpr& e, std::span<const Equation> eqs, const Context& ctx);
DiffExpr reduce_mod(const DiffExpr& e, const Equation& eq, const Context& ctx);

/// X = tau d/dt + xi d/dx + eta d/du with coefficients depending on
/// x, t, u (and declared coefficient functions) only.
class PointSymmetry {
 public:
  PointSymmetry(DiffExpr tau, DiffExpr xi, DiffExpr eta);

  const DiffExpr& tau() const noexcept { return tau_; }
  const DiffExpr& xi() const noexcept { return xi_; }
  const DiffExpr& eta() const noexcept { return eta_; }

  /// W = eta - tau*u_t - xi*u_x.
  DiffExpr characteristic() const;

 private:
  DiffExpr tau_;
  DiffExpr xi_;
  DiffExpr eta_;
};

/// pr X(F) reduced modulo the equation; zero iff X is a symmetry.
DiffExpr prolonged_action(const PointSymmetry& X, const Equation& eq, const Context& ctx);

}  // namespace nsa
