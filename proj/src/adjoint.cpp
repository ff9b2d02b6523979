#include "nsa/adjoint.hpp"

#include "nsa/error.hpp"

#include <algorithm>

namespace nsa {

namespace {

const Atom& u_atom() {
  static const Atom u = Atom::jet('u', 0, 0);
  return u;
}

bool substitution_atom(const Atom& a) {
  switch (a.kind()) {
    case AtomKind::Jet:
      return a.is_jet('u') && a.jet_order() == 0;
    default:
      return true;
  }
}

}  // namespace

Substitution::Substitution(DiffExpr phi) : phi_(std::move(phi)) {
  if (phi_.is_zero()) throw InvalidArgument("substitution phi must be nonzero");
  if (contains_atom(phi_, [](const Atom& a) { return !substitution_atom(a); })) {
    throw InvalidArgument("substitution phi may depend on x, t, u only");
  }
}

std::string to_string(SelfAdjointness c) {
  switch (c) {
    case SelfAdjointness::strict:
      return "strict";
    case SelfAdjointness::quasi:
      return "quasi";
    case SelfAdjointness::weak:
      return "weak";
    case SelfAdjointness::nonlinear:
      return "nonlinear";
    case SelfAdjointness::none:
      return "none";
  }
  return "none";
}

DiffExpr formal_lagrangian(const Equation& eq) { return DiffExpr(Atom::jet('v', 0, 0)) * eq.lhs(); }

DiffExpr adjoint_equation(const Equation& eq, const Context& ctx) {
  return euler(formal_lagrangian(eq), 'u', ctx);
}

Equation adjoint_solved_form(const Equation& eq, const Context& ctx) {
  return Equation::from_lhs(adjoint_equation(eq, ctx), 'v');
}

PhiDependence phi_dependence(const Substitution& sub, const Context& ctx) {
  PhiDependence d;
  d.on_u = !partial_derivative(sub.phi(), u_atom(), ctx).is_zero();
  for (const auto& a : atoms_of(sub.phi())) {
    if (a.is_indep('x')) d.on_x = true;
    if (a.is_indep('t') || a.kind() == AtomKind::CoeffFn) d.on_t = true;
    if (a.kind() == AtomKind::UnknownFn) d.on_x = d.on_t = true;
  }
  return d;
}

SelfAdjointness classify_substitution(const Substitution& sub, const Context& ctx) {
  if (sub.phi() == DiffExpr(u_atom())) return SelfAdjointness::strict;
  PhiDependence d = phi_dependence(sub, ctx);
  if (!d.on_u) return SelfAdjointness::nonlinear;
  if (!d.on_x && !d.on_t) return SelfAdjointness::quasi;
  return SelfAdjointness::weak;
}

NsaReport nsa_check(const Equation& eq, const Substitution& sub, const Context& ctx) {
  if (eq.dependent() != 'u') throw InvalidArgument("nsa_check expects an equation in u");
  NsaReport report;
  DiffExpr adjoint = adjoint_equation(eq, ctx);
  report.lambda = -partial_derivative(sub.phi(), u_atom(), ctx);
  report.residual = substitute_dependent(adjoint, 'v', sub.phi(), ctx) - report.lambda * eq.lhs();
  report.holds = report.residual.is_zero();
  report.dependence = phi_dependence(sub, ctx);
  report.classification = report.holds ? classify_substitution(sub, ctx) : SelfAdjointness::none;
  return report;
}

std::vector<DeterminingEquation> determining_system(const Equation& family, const std::string& unknown,
                                                    const Context& ctx) {
  NsaReport report = nsa_check(family, Substitution(DiffExpr(Atom::unknown(unknown))), ctx);
  auto jets = [](const Atom& a) { return a.is_jet('u') && a.jet_order() >= 1; };
  std::vector<DeterminingEquation> out;
  for (auto& [key, coeff] : collect(report.residual, jets)) {
    bool duplicate = std::any_of(out.begin(), out.end(),
                                 [&](const DeterminingEquation& d) { return equal(d.coefficient, coeff); });
    if (!duplicate) out.push_back({key, std::move(coeff)});
  }
  return out;
}

}  // namespace nsa
