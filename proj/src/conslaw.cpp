#include "nsa/conslaw.hpp"

#include "nsa/error.hpp"
#include "nsa/printer.hpp"
#include "nsa/raw_expr.hpp"

#include <map>

namespace nsa {

namespace {

bool mentions_v(const DiffExpr& e) {
  return contains_atom(e, [](const Atom& a) { return a.is_jet('v'); });
}

struct Integration {
  Factors monomial;
  int order = 0;  // x-order of the top jet
};

/// A monomial that is linear in its highest pure-x jet u_{x^k}, k >= 1,
/// and otherwise integrable in u_{x^{k-1}} as a plain power.
std::optional<Integration> integrable(const Factors& factors) {
  int top = 0;
  int top_exp = 0;
  for (const auto& [a, e] : factors) {
    if (a.kind() == AtomKind::UnknownFn) return std::nullopt;
    if (a.kind() != AtomKind::Jet) continue;
    if (a.var() != 'u' || a.t_order() > 0) return std::nullopt;
    if (a.x_order() > top) {
      top = a.x_order();
      top_exp = e;
    }
  }
  if (top < 1 || top_exp != 1) return std::nullopt;
  for (const auto& [a, e] : factors) {
    if (a.kind() != AtomKind::Log) continue;
    bool blocks = contains_atom(a.argument(), [top](const Atom& b) {
      return b.is_jet('u') && (b.t_order() > 0 || b.x_order() >= top - 1);
    });
    if (blocks) return std::nullopt;
  }
  return Integration{factors, top};
}

/// G with D_x G = coeff * monomial + (terms of lower top order).
DiffExpr antiderivative(const ParamPoly& coeff, const Integration& in) {
  const Atom top = Atom::jet('u', 0, in.order);
  const Atom lower = Atom::jet('u', 0, in.order - 1);
  Factors rest;
  int n = 0;
  for (const auto& [a, e] : in.monomial) {
    if (a == top) continue;
    if (a == lower) {
      n = e;
      continue;
    }
    rest.emplace_back(a, e);
  }
  DiffExpr base = DiffExpr::monomial(coeff, rest);
  if (n == -1) return base * ln(DiffExpr(lower));
  return base * DiffExpr(lower).pow(n + 1) * DiffExpr(Rational(1, n + 1));
}

}  // namespace

DiffExpr characteristic(const PointSymmetry& X) { return X.characteristic(); }

ConservedVector ibragimov_vector(const Equation& eq, const PointSymmetry& X, const Context& ctx,
                                 std::string equation_id) {
  if (eq.dependent() != 'u') throw InvalidArgument("ibragimov_vector expects an equation in u");
  const DiffExpr L = formal_lagrangian(eq);
  int top = 0;
  for (const auto& a : atoms_of(L)) {
    if (!a.is_jet('u')) continue;
    bool pure_x = a.t_order() == 0;
    bool u_t = a.t_order() == 1 && a.x_order() == 0;
    if (!pure_x && !u_t) {
      throw UnsupportedError("Lagrangian depends on the mixed derivative " + a.to_string());
    }
    if (pure_x) top = std::max(top, a.x_order());
  }

  const DiffExpr W = X.characteristic();
  ConservedVector cv;
  cv.c0 = X.tau() * L + W * partial_derivative(L, Atom::jet('u', 1, 0), ctx);

  // dL[m] = dL/du_{x^m}; DW[k] = D_x^k W.
  std::vector<DiffExpr> dL(static_cast<std::size_t>(top) + 1);
  for (int m = 1; m <= top; ++m) dL[m] = partial_derivative(L, Atom::jet('u', 0, m), ctx);
  std::map<std::pair<int, int>, DiffExpr> dL_x;  // (m, j) -> D_x^j dL[m]
  auto dLx = [&](int m, int j) -> const DiffExpr& {
    auto key = std::make_pair(m, j);
    if (auto it = dL_x.find(key); it != dL_x.end()) return it->second;
    DiffExpr value = total_derivative(dL[m], Direction::x, j, ctx);
    return dL_x.emplace(key, std::move(value)).first->second;
  };

  DiffExpr c1 = X.xi() * L;
  DiffExpr DW = W;
  for (int k = 0; k < top; ++k) {
    DiffExpr bracket;
    for (int m = k + 1; m <= top; ++m) {
      const DiffExpr& piece = dLx(m, m - k - 1);
      if ((m - k - 1) % 2 == 0) {
        bracket += piece;
      } else {
        bracket -= piece;
      }
    }
    if (!bracket.is_zero()) c1 += DW * bracket;
    if (k + 1 < top) DW = total_derivative(DW, Direction::x, ctx);
  }
  cv.c1 = std::move(c1);
  cv.provenance.equation_id = std::move(equation_id);
  cv.provenance.symmetry = X;
  return cv;
}

ConservedVector localize(const ConservedVector& cv, const Equation& eq, const Substitution& sub,
                         const Context& ctx, LocalizeCheck check) {
  NsaReport report = nsa_check(eq, sub, ctx);
  ConservedVector out = cv;
  if (!report.holds) {
    std::string message = "v = " + print(sub.phi()) + " does not make the equation nonlinearly self-adjoint";
    if (check == LocalizeCheck::enforce) throw InvalidArgument(message);
    out.provenance.notes.push_back("warning: " + message);
  }
  out.c0 = substitute_dependent(cv.c0, 'v', sub.phi(), ctx);
  out.c1 = substitute_dependent(cv.c1, 'v', sub.phi(), ctx);
  out.provenance.substitution = sub.phi();
  return out;
}

ConservedVector density_normalize(const ConservedVector& cv, const Equation& eq, const Context& ctx) {
  (void)eq;
  if (mentions_v(cv.c0) || mentions_v(cv.c1)) {
    throw InvalidArgument("density_normalize requires components free of v; localize first");
  }
  DiffExpr density = cv.c0;
  DiffExpr h;
  constexpr int kMaxSteps = 10000;
  for (int step = 0; step < kMaxSteps; ++step) {
    std::optional<Integration> pick;
    ParamPoly pick_coeff;
    for (const auto& [factors, coeff] : density.terms()) {
      auto candidate = integrable(factors);
      if (candidate && (!pick || candidate->order > pick->order)) {
        pick = std::move(candidate);
        pick_coeff = coeff;
      }
    }
    if (!pick) break;
    DiffExpr G = antiderivative(pick_coeff, *pick);
    density -= total_derivative(G, Direction::x, ctx);
    h += G;
  }

  ConservedVector out = cv;
  int sign = 1;
  if (!density.is_zero() && density.terms().begin()->second.leading_sign() < 0) sign = -1;
  DiffExpr flux = cv.c1 + total_derivative(h, Direction::t, ctx);
  out.c0 = sign == 1 ? density : -density;
  out.c1 = sign == 1 ? flux : -flux;
  out.provenance.transfer = std::move(h);
  out.provenance.sign = sign;
  out.provenance.normalized = true;
  return out;
}

DiffExpr verify_divergence(const ConservedVector& cv, std::span<const Equation> eqs, const Context& ctx) {
  DiffExpr divergence = total_derivative(cv.c0, Direction::t, ctx) + total_derivative(cv.c1, Direction::x, ctx);
  return reduce_mod(divergence, eqs, ctx);
}

DiffExpr verify_divergence(const ConservedVector& cv, const Equation& eq, const Context& ctx) {
  return verify_divergence(cv, std::span<const Equation>(&eq, 1), ctx);
}

bool is_trivial(const ConservedVector& cv, const Equation& eq, const Context& ctx) {
  ConservedVector n = density_normalize(cv, eq, ctx);
  if (!reduce_mod(n.c0, eq, ctx).is_zero()) return false;
  return reduce_mod(total_derivative(n.c1, Direction::x, ctx), eq, ctx).is_zero();
}

}  // namespace nsa
