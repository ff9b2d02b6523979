#include "nsa/calculus.hpp"

#include "nsa/error.hpp"
#include "nsa/printer.hpp"

#include <map>
#include <set>
#include <tuple>

namespace nsa {

namespace {

/// Extends an atom-level derivation to expressions by the Leibniz rule.
template <class AtomRule>
DiffExpr apply_derivation(const DiffExpr& e, AtomRule&& rule) {
  std::map<Atom, DiffExpr> cache;
  DiffExpr out;
  for (const auto& [factors, coeff] : e.terms()) {
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const auto& [atom, exp] = factors[i];
      auto it = cache.find(atom);
      if (it == cache.end()) it = cache.emplace(atom, rule(atom)).first;
      const DiffExpr& d = it->second;
      if (d.is_zero()) continue;
      Factors rest = factors;
      if (exp == 1) {
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        rest[i].second = exp - 1;
      }
      ParamPoly scale = coeff * ParamPoly(Rational(exp));
      for (const auto& [df, dc] : d.terms()) out.add_term(multiply_factors(rest, df), scale * dc);
    }
  }
  return out;
}

DiffExpr log_derivative(const Atom& log_atom, const DiffExpr& d_arg) {
  if (d_arg.is_zero()) return {};
  return d_arg * log_atom.argument().inverse();
}

DiffExpr atom_total_derivative(const Atom& a, Direction dir, const Context& ctx) {
  const bool along_x = dir == Direction::x;
  switch (a.kind()) {
    case AtomKind::IndepVar:
      return DiffExpr(a.var() == (along_x ? 'x' : 't') ? 1L : 0L);
    case AtomKind::CoeffFn:
      return along_x ? DiffExpr() : ctx.function_derivative(a);
    case AtomKind::UnknownFn: {
      Atom direct = along_x ? Atom::unknown(a.name(), a.x_order() + 1, a.t_order(), a.u_order())
                            : Atom::unknown(a.name(), a.x_order(), a.t_order() + 1, a.u_order());
      Atom via_u = Atom::unknown(a.name(), a.x_order(), a.t_order(), a.u_order() + 1);
      ctx.check_order(direct);
      ctx.check_order(via_u);
      Atom u1 = along_x ? Atom::jet('u', 0, 1) : Atom::jet('u', 1, 0);
      return DiffExpr(direct) + DiffExpr(via_u) * DiffExpr(u1);
    }
    case AtomKind::Jet: {
      Atom next = along_x ? Atom::jet(a.var(), a.t_order(), a.x_order() + 1)
                          : Atom::jet(a.var(), a.t_order() + 1, a.x_order());
      ctx.check_order(next);
      return DiffExpr(next);
    }
    case AtomKind::Log:
      return log_derivative(a, total_derivative(a.argument(), dir, ctx));
  }
  return {};
}

DiffExpr atom_partial_derivative(const Atom& a, const Atom& jet, const Context& ctx) {
  switch (a.kind()) {
    case AtomKind::Jet:
      return DiffExpr(a == jet ? 1L : 0L);
    case AtomKind::UnknownFn:
      if (jet.is_jet('u') && jet.jet_order() == 0) {
        Atom next = Atom::unknown(a.name(), a.x_order(), a.t_order(), a.u_order() + 1);
        ctx.check_order(next);
        return DiffExpr(next);
      }
      return {};
    case AtomKind::Log:
      return log_derivative(a, partial_derivative(a.argument(), jet, ctx));
    default:
      return {};
  }
}

bool governed_t_jet(const Atom& a, const std::map<char, const Equation*>& eqs) {
  return a.kind() == AtomKind::Jet && a.t_order() > 0 && eqs.count(a.var()) != 0;
}

class Reducer {
 public:
  Reducer(std::span<const Equation> eqs, const Context& ctx) : ctx_(ctx) {
    for (const auto& eq : eqs) {
      if (!eqs_.emplace(eq.dependent(), &eq).second) {
        throw InvalidArgument(std::string("two equations govern ") + eq.dependent());
      }
    }
  }

  DiffExpr reduce(DiffExpr e) {
    auto governed = [this](const Atom& a) { return governed_t_jet(a, eqs_); };
    auto rule = [this](const Atom& a) -> std::optional<DiffExpr> {
      if (!governed_t_jet(a, eqs_)) return std::nullopt;
      return replacement(a.var(), a.t_order(), a.x_order());
    };
    // Replacements are themselves free of governed t-jets, so one pass
    // normally suffices; the bound only guards against a broken invariant.
    for (int pass = 0; pass < 64; ++pass) {
      if (!contains_atom(e, governed)) return e;
      e = substitute_atoms(e, rule);
    }
    throw Error("reduction did not reach a fixed point");
  }

 private:
  const DiffExpr& replacement(char dep, int m, int k) {
    auto key = std::make_tuple(dep, m, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    DiffExpr value;
    if (k > 0) {
      value = total_derivative(replacement(dep, m, k - 1), Direction::x, ctx_);
    } else if (m == 1) {
      if (!in_progress_.insert(dep).second) throw UnsupportedError("cyclic solved forms");
      value = reduce(eqs_.at(dep)->solved_rhs());
      in_progress_.erase(dep);
    } else {
      value = reduce(total_derivative(replacement(dep, m - 1, 0), Direction::t, ctx_));
    }
    return memo_.emplace(key, std::move(value)).first->second;
  }

  const Context& ctx_;
  std::map<char, const Equation*> eqs_;
  std::map<std::tuple<char, int, int>, DiffExpr> memo_;
  std::set<char> in_progress_;
};

/// Memoized D_t^m D_x^k of a fixed expression.
class JetDerivatives {
 public:
  JetDerivatives(DiffExpr base, const Context& ctx) : ctx_(ctx) { memo_.emplace(std::make_pair(0, 0), std::move(base)); }

  const DiffExpr& get(int m, int k) {
    auto key = std::make_pair(m, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    DiffExpr value = k > 0 ? total_derivative(get(m, k - 1), Direction::x, ctx_)
                           : total_derivative(get(m - 1, 0), Direction::t, ctx_);
    return memo_.emplace(key, std::move(value)).first->second;
  }

 private:
  const Context& ctx_;
  std::map<std::pair<int, int>, DiffExpr> memo_;
};

bool point_coefficient_atom(const Atom& a) {
  switch (a.kind()) {
    case AtomKind::IndepVar:
    case AtomKind::CoeffFn:
      return true;
    case AtomKind::Jet:
      return a.is_jet('u') && a.jet_order() == 0;
    case AtomKind::Log:
      return true;  // argument atoms are visited separately
    default:
      return false;
  }
}

}  // namespace

DiffExpr total_derivative(const DiffExpr& e, Direction dir, const Context& ctx) {
  return apply_derivation(e, [&](const Atom& a) { return atom_total_derivative(a, dir, ctx); });
}

DiffExpr total_derivative(const DiffExpr& e, Direction dir, int times, const Context& ctx) {
  DiffExpr out = e;
  for (int i = 0; i < times; ++i) out = total_derivative(out, dir, ctx);
  return out;
}

DiffExpr partial_derivative(const DiffExpr& e, const Atom& jet, const Context& ctx) {
  if (jet.kind() != AtomKind::Jet) throw InvalidArgument("partial derivative requires a jet coordinate");
  return apply_derivation(e, [&](const Atom& a) { return atom_partial_derivative(a, jet, ctx); });
}

DiffExpr euler(const DiffExpr& e, char dep, const Context& ctx) {
  std::set<Atom> jets;
  for (const auto& a : atoms_of(e)) {
    if (a.is_jet(dep)) jets.insert(a);
    if (a.kind() == AtomKind::UnknownFn && dep == 'u') jets.insert(Atom::jet('u', 0, 0));
  }
  DiffExpr out;
  for (const auto& jet : jets) {
    DiffExpr term = partial_derivative(e, jet, ctx);
    term = total_derivative(term, Direction::t, jet.t_order(), ctx);
    term = total_derivative(term, Direction::x, jet.x_order(), ctx);
    if (jet.jet_order() % 2 == 1) {
      out -= term;
    } else {
      out += term;
    }
  }
  return out;
}

DiffExpr substitute_dependent(const DiffExpr& e, char dep, const DiffExpr& phi, const Context& ctx) {
  if (contains_atom(phi, [dep](const Atom& a) { return a.is_jet(dep); })) {
    throw InvalidArgument(std::string("substitution for ") + dep + " depends on " + dep);
  }
  JetDerivatives derivs(phi, ctx);
  return substitute_atoms(e, [&](const Atom& a) -> std::optional<DiffExpr> {
    if (!a.is_jet(dep)) return std::nullopt;
    return derivs.get(a.t_order(), a.x_order());
  });
}

DiffExpr instantiate_function(const DiffExpr& e, const std::string& name, const DiffExpr& value,
                              const Context& ctx) {
  JetDerivatives derivs(value, ctx);
  return substitute_atoms(e, [&](const Atom& a) -> std::optional<DiffExpr> {
    if (a.kind() != AtomKind::CoeffFn || a.name() != name) return std::nullopt;
    return derivs.get(a.fn_order(), 0);
  });
}

// ---------------------------------------------------------------------------
// Equation

Equation Equation::from_lhs(const DiffExpr& lhs, char dep) {
  const Atom dep_t = Atom::jet(dep, 1, 0);
  const Factors solved_key{{dep_t, 1}};
  auto it = lhs.terms().find(solved_key);
  if (it == lhs.terms().end()) {
    throw InvalidArgument(std::string("equation is not evolutionary: no ") + dep_t.to_string() + " term in " +
                          print(lhs));
  }
  auto c = it->second.constant();
  if (!c || (*c != 1 && *c != -1)) {
    throw InvalidArgument("coefficient of " + dep_t.to_string() + " must be 1");
  }
  for (const auto& a : atoms_of(lhs)) {
    if (a.is_jet(dep) && a.t_order() > 0 && a.x_order() > 0) {
      throw UnsupportedError("mixed derivative " + a.to_string() + " in an evolution equation");
    }
  }
  Equation eq;
  eq.dep_ = dep;
  eq.lhs_ = *c == 1 ? lhs : -lhs;
  eq.rhs_ = DiffExpr(dep_t) - eq.lhs_;

  if (contains_atom(eq.rhs_, [dep](const Atom& a) { return a.is_jet(dep) && a.t_order() > 0; })) {
    throw InvalidArgument("equation must be linear in " + dep_t.to_string() + " with no other t-derivatives of " +
                          std::string(1, dep));
  }
  for (const auto& a : atoms_of(eq.lhs_)) {
    if (dep == 'u' && a.is_jet('v')) throw InvalidArgument("equation in u must not contain v");
    if (a.is_jet(dep) && a.t_order() == 0) eq.order_ = std::max(eq.order_, a.x_order());
  }
  return eq;
}

DiffExpr reduce_mod(const DiffExpr& e, std::span<const Equation> eqs, const Context& ctx) {
  Reducer reducer(eqs, ctx);
  return reducer.reduce(e);
}

DiffExpr reduce_mod(const DiffExpr& e, const Equation& eq, const Context& ctx) {
  return reduce_mod(e, std::span<const Equation>(&eq, 1), ctx);
}

// ---------------------------------------------------------------------------
// PointSymmetry

PointSymmetry::PointSymmetry(DiffExpr tau, DiffExpr xi, DiffExpr eta)
    : tau_(std::move(tau)), xi_(std::move(xi)), eta_(std::move(eta)) {
  auto bad = [](const Atom& a) { return !point_coefficient_atom(a); };
  for (const auto* part : {&tau_, &xi_, &eta_}) {
    if (contains_atom(*part, bad)) {
      throw InvalidArgument("point symmetry coefficients may depend on x, t, u only: " + print(*part));
    }
  }
}

DiffExpr PointSymmetry::characteristic() const {
  return eta_ - tau_ * DiffExpr(Atom::jet('u', 1, 0)) - xi_ * DiffExpr(Atom::jet('u', 0, 1));
}

DiffExpr prolonged_action(const PointSymmetry& X, const Equation& eq, const Context& ctx) {
  if (eq.order() + 1 > ctx.order_cap()) throw OrderCapError("equation order too close to the order cap");
  const DiffExpr& F = eq.lhs();
  JetDerivatives w(X.characteristic(), ctx);
  DiffExpr action;
  std::set<Atom> jets;
  for (const auto& a : atoms_of(F)) {
    if (a.is_jet('u')) jets.insert(a);
  }
  for (const auto& jet : jets) {
    DiffExpr dF = partial_derivative(F, jet, ctx);
    if (!dF.is_zero()) action += w.get(jet.t_order(), jet.x_order()) * dF;
  }
  action += X.tau() * total_derivative(F, Direction::t, ctx);
  action += X.xi() * total_derivative(F, Direction::x, ctx);
  return reduce_mod(action, eq, ctx);
}

}  // namespace nsa
