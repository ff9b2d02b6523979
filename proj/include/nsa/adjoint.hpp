#pragma once

#include "nsa/calculus.hpp"

#include <string>
#include <vector>

namespace nsa {

/// A candidate v = phi(x, t, u). phi may contain parameters, coefficient
/// functions, ln of admissible arguments and unknown functions phi(x,t,u).
class Substitution {
 public:
  /// Throws InvalidArgument if phi is zero or depends on v or on jets of
  /// order >= 1.
  explicit Substitution(DiffExpr phi);

  const DiffExpr& phi() const noexcept { return phi_; }

 private:
  DiffExpr phi_;
};

enum class SelfAdjointness { strict, quasi, weak, nonlinear, none };

std::string to_string(SelfAdjointness c);

/// Which partials of phi are nonzero (symbolically).
struct PhiDependence {
  bool on_u = false;  // phi_u != 0
  bool on_x = false;
  bool on_t = false;
};

struct NsaReport {
  DiffExpr lambda;
  DiffExpr residual;
  bool holds = false;
  SelfAdjointness classification = SelfAdjointness::none;
  PhiDependence dependence;
};

/// L = v * F.
DiffExpr formal_lagrangian(const Equation& eq);

/// F* = delta(v F) / delta u.
DiffExpr adjoint_equation(const Equation& eq, const Context& ctx);

/// The adjoint in solved form v_t = K, for reduction on solutions of the
/// combined system.
Equation adjoint_solved_form(const Equation& eq, const Context& ctx);

/// Tests F*|_{v=phi} = lambda F identically with lambda = -phi_u.
NsaReport nsa_check(const Equation& eq, const Substitution& sub, const Context& ctx);

PhiDependence phi_dependence(const Substitution& sub, const Context& ctx);

/// strict (phi = u), quasi (phi = phi(u), phi' != 0, phi != u), weak
/// (phi_u != 0 and explicit x or t), otherwise nonlinear. Does not check
/// that the identity holds; nsa_check does.
SelfAdjointness classify_substitution(const Substitution& sub, const Context& ctx);

struct DeterminingEquation {
  Factors key;           // jet monomial whose coefficient must vanish
  DiffExpr coefficient;  // the equation coefficient = 0
};

/// Coefficients of F*|_{v=phi} + phi_u F in the jets of u (u_t and every
/// jet of order >= 1), with phi the unknown function `unknown`(x,t,u).
/// Sorted by key. Identical coefficients are listed once; proportional
/// ones are kept.
std::vector<DeterminingEquation> determining_system(const Equation& family, const std::string& unknown,
                                                    const Context& ctx);

}  // namespace nsa
