#pragma once

#include "nsa/adjoint.hpp"
#include "nsa/calculus.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nsa {

/// Where a conserved vector came from and how it was rewritten.
struct Provenance {
  std::string equation_id;
  std::optional<PointSymmetry> symmetry;
  std::optional<DiffExpr> substitution;
  /// h with C0 = s*A0 + D_x h and C1 = s*A1 - D_t h.
  DiffExpr transfer;
  int sign = 1;
  bool normalized = false;
  std::vector<std::string> notes;
};

struct ConservedVector {
  DiffExpr c0;
  DiffExpr c1;
  Provenance provenance;
};

/// W = eta - tau*u_t - xi*u_x.
DiffExpr characteristic(const PointSymmetry& X);

/// Components of the conserved vector of the combined system F = 0,
/// F* = 0 for the formal Lagrangian v*F. The Lagrangian may only contain
/// u_t and pure x-derivatives of u; anything else raises UnsupportedError.
ConservedVector ibragimov_vector(const Equation& eq, const PointSymmetry& X, const Context& ctx,
                                 std::string equation_id = {});

enum class LocalizeCheck { enforce, warn };

/// Replaces v by phi in both components. With LocalizeCheck::enforce the
/// substitution must make the equation nonlinearly self-adjoint.
ConservedVector localize(const ConservedVector& cv, const Equation& eq, const Substitution& sub,
                         const Context& ctx, LocalizeCheck check = LocalizeCheck::enforce);

/// Moves total x-derivatives out of the density by monomial-wise
/// integration by parts: A0 = s*(C0 - D_x h), A1 = s*(C1 + D_t h) with the
/// sign s making the leading coefficient of A0 positive.
ConservedVector density_normalize(const ConservedVector& cv, const Equation& eq, const Context& ctx);

/// D_t C0 + D_x C1 reduced modulo the given equations.
DiffExpr verify_divergence(const ConservedVector& cv, std::span<const Equation> eqs, const Context& ctx);
DiffExpr verify_divergence(const ConservedVector& cv, const Equation& eq, const Context& ctx);

/// True when the normalized density vanishes and the normalized flux is
/// x-independent on solutions.
bool is_trivial(const ConservedVector& cv, const Equation& eq, const Context& ctx);

}  // namespace nsa
