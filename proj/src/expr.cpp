#include "nsa/expr.hpp"

#include "nsa/error.hpp"
#include "nsa/printer.hpp"

#include <algorithm>
#include <set>

namespace nsa {

// ---------------------------------------------------------------------------
// Atom

Atom Atom::indep(char var) {
  if (var != 't' && var != 'x') throw InvalidArgument(std::string("not an independent variable: ") + var);
  Atom a;
  a.kind_ = AtomKind::IndepVar;
  a.var_ = var;
  return a;
}

Atom Atom::jet(char dep, int t_order, int x_order) {
  if (dep != 'u' && dep != 'v') throw InvalidArgument(std::string("not a dependent variable: ") + dep);
  if (t_order < 0 || x_order < 0) throw InvalidArgument("negative jet order");
  Atom a;
  a.kind_ = AtomKind::Jet;
  a.var_ = dep;
  a.t_ = t_order;
  a.x_ = x_order;
  return a;
}

Atom Atom::coeff_fn(std::string name, int order) {
  if (order < 0) throw InvalidArgument("negative derivative order");
  Atom a;
  a.kind_ = AtomKind::CoeffFn;
  a.name_ = std::move(name);
  a.t_ = order;
  return a;
}

Atom Atom::unknown(std::string name, int px, int pt, int pu) {
  if (px < 0 || pt < 0 || pu < 0) throw InvalidArgument("negative partial order");
  Atom a;
  a.kind_ = AtomKind::UnknownFn;
  a.name_ = std::move(name);
  a.x_ = px;
  a.t_ = pt;
  a.u_ = pu;
  return a;
}

Atom Atom::log(const DiffExpr& argument) {
  if (argument.is_zero()) throw InvalidArgument("ln(0) is undefined");
  if (argument.is_monomial()) {
    const auto& [factors, coeff] = *argument.terms().begin();
    if (factors.empty() && coeff.is_one()) throw InvalidArgument("ln(1) is not an atom");
    if (coeff.is_one() && factors.size() == 1 && factors[0].second == 1 &&
        factors[0].first.kind() == AtomKind::Log) {
      throw InvalidArgument("nested ln is not supported");
    }
  }
  Atom a;
  a.kind_ = AtomKind::Log;
  a.arg_ = std::make_shared<const DiffExpr>(argument);
  return a;
}

int compare(const Atom& a, const Atom& b) {
  auto three = [](auto x, auto y) { return x < y ? -1 : (y < x ? 1 : 0); };
  if (a.kind_ != b.kind_) return three(a.kind_, b.kind_);
  switch (a.kind_) {
    case AtomKind::IndepVar:
      return three(a.var_, b.var_);
    case AtomKind::CoeffFn:
      if (int c = a.name_.compare(b.name_); c != 0) return c < 0 ? -1 : 1;
      return three(a.t_, b.t_);
    case AtomKind::UnknownFn: {
      if (int c = a.name_.compare(b.name_); c != 0) return c < 0 ? -1 : 1;
      int ta = a.x_ + a.t_ + a.u_;
      int tb = b.x_ + b.t_ + b.u_;
      if (ta != tb) return three(ta, tb);
      if (a.x_ != b.x_) return three(b.x_, a.x_);
      if (a.t_ != b.t_) return three(b.t_, a.t_);
      return 0;
    }
    case AtomKind::Jet: {
      int oa = a.t_ + a.x_;
      int ob = b.t_ + b.x_;
      if (oa != ob) return three(oa, ob);
      if (a.t_ != b.t_) return three(b.t_, a.t_);
      return three(a.var_, b.var_);
    }
    case AtomKind::Log:
      if (a.arg_ == b.arg_) return 0;
      return compare(*a.arg_, *b.arg_);
  }
  return 0;
}

std::string Atom::to_string() const {
  switch (kind_) {
    case AtomKind::IndepVar:
      return std::string(1, var_);
    case AtomKind::CoeffFn:
      return name_ + std::string(static_cast<std::size_t>(t_), '\'');
    case AtomKind::UnknownFn: {
      if (x_ + t_ + u_ == 0) return name_;
      return name_ + "_" + std::string(static_cast<std::size_t>(x_), 'x') +
             std::string(static_cast<std::size_t>(t_), 't') + std::string(static_cast<std::size_t>(u_), 'u');
    }
    case AtomKind::Jet: {
      if (t_ + x_ == 0) return std::string(1, var_);
      return std::string(1, var_) + "_" + std::string(static_cast<std::size_t>(t_), 't') +
             std::string(static_cast<std::size_t>(x_), 'x');
    }
    case AtomKind::Log:
      return "ln(" + print(*arg_) + ")";
  }
  return {};
}

// ---------------------------------------------------------------------------
// Factors

bool FactorsLess::operator()(const Factors& a, const Factors& b) const {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i].first, b[i].first);
    if (c != 0) return c < 0;
    if (a[i].second != b[i].second) return a[i].second < b[i].second;
  }
  return a.size() < b.size();
}

Factors multiply_factors(const Factors& a, const Factors& b) {
  Factors out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    int c = 0;
    if (i == a.end()) {
      c = 1;
    } else if (j == b.end()) {
      c = -1;
    } else {
      c = compare(i->first, j->first);
    }
    if (c < 0) {
      out.push_back(*i++);
    } else if (c > 0) {
      out.push_back(*j++);
    } else {
      int e = i->second + j->second;
      if (e != 0) out.emplace_back(i->first, e);
      ++i;
      ++j;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// DiffExpr

DiffExpr::DiffExpr(const Rational& value) : DiffExpr(ParamPoly(value)) {}

DiffExpr::DiffExpr(long value) : DiffExpr(Rational(value)) {}

DiffExpr::DiffExpr(const ParamPoly& value) {
  if (!value.is_zero()) terms_.emplace(Factors{}, value);
}

DiffExpr::DiffExpr(const Atom& atom, int exponent) {
  if (exponent == 0) {
    terms_.emplace(Factors{}, ParamPoly(1));
  } else {
    terms_.emplace(Factors{{atom, exponent}}, ParamPoly(1));
  }
}

DiffExpr DiffExpr::monomial(const ParamPoly& coeff, Factors factors) {
  std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Factors merged;
  for (auto& f : factors) {
    if (!merged.empty() && merged.back().first == f.first) {
      merged.back().second += f.second;
      if (merged.back().second == 0) merged.pop_back();
    } else if (f.second != 0) {
      merged.push_back(std::move(f));
    }
  }
  DiffExpr out;
  out.add_term(merged, coeff);
  return out;
}

std::vector<Monomial> DiffExpr::monomials() const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& [f, c] : terms_) out.push_back({c, f});
  return out;
}

std::optional<ParamPoly> DiffExpr::as_constant() const {
  if (terms_.empty()) return ParamPoly();
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

void DiffExpr::add_term(const Factors& factors, const ParamPoly& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(factors);
  if (it == terms_.end()) {
    terms_.emplace(factors, coeff);
    return;
  }
  it->second += coeff;
  if (it->second.is_zero()) terms_.erase(it);
}

DiffExpr DiffExpr::operator-() const {
  DiffExpr out = *this;
  for (auto& [f, c] : out.terms_) c = -c;
  return out;
}

DiffExpr& DiffExpr::operator+=(const DiffExpr& other) {
  for (const auto& [f, c] : other.terms_) add_term(f, c);
  return *this;
}

DiffExpr& DiffExpr::operator-=(const DiffExpr& other) {
  for (const auto& [f, c] : other.terms_) add_term(f, -c);
  return *this;
}

DiffExpr operator*(const DiffExpr& a, const DiffExpr& b) {
  DiffExpr out;
  for (const auto& [fa, ca] : a.terms_) {
    for (const auto& [fb, cb] : b.terms_) out.add_term(multiply_factors(fa, fb), ca * cb);
  }
  return out;
}

DiffExpr& DiffExpr::operator*=(const DiffExpr& other) { return *this = *this * other; }

DiffExpr DiffExpr::inverse() const {
  if (terms_.size() != 1) {
    throw UnsupportedError("cannot invert a sum: " + print(*this));
  }
  const auto& [factors, coeff] = *terms_.begin();
  Factors inv = factors;
  for (auto& [a, e] : inv) e = -e;
  DiffExpr out;
  out.terms_.emplace(std::move(inv), coeff.inverse());
  return out;
}

DiffExpr DiffExpr::pow(int exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  DiffExpr result(1L);
  DiffExpr base = *this;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

int compare(const DiffExpr& a, const DiffExpr& b) {
  FactorsLess less;
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
    if (less(i->first, j->first)) return -1;
    if (less(j->first, i->first)) return 1;
    if (int c = compare(i->second, j->second); c != 0) return c;
  }
  if (i == a.terms_.end() && j == b.terms_.end()) return 0;
  return i == a.terms_.end() ? -1 : 1;
}

// ---------------------------------------------------------------------------
// Free functions

bool equal(const DiffExpr& a, const DiffExpr& b) { return (a - b).is_zero(); }

std::optional<Rational> proportional(const DiffExpr& a, const DiffExpr& b) {
  if (a.is_zero() || b.is_zero() || a.size() != b.size()) return std::nullopt;
  const auto& [fa, ca] = *a.terms().begin();
  const auto& [fb, cb] = *b.terms().begin();
  if (FactorsLess{}(fa, fb) || FactorsLess{}(fb, fa)) return std::nullopt;
  const auto& la = *ca.terms().begin();
  const auto& lb = *cb.terms().begin();
  if (la.first != lb.first) return std::nullopt;
  Rational r = la.second / lb.second;
  if (!equal(a, b * DiffExpr(r))) return std::nullopt;
  return r;
}

namespace {

void gather_atoms(const DiffExpr& e, std::set<Atom>& out) {
  for (const auto& [factors, coeff] : e.terms()) {
    for (const auto& [atom, exp] : factors) {
      out.insert(atom);
      if (atom.kind() == AtomKind::Log) gather_atoms(atom.argument(), out);
    }
  }
}

}  // namespace

std::vector<Atom> atoms_of(const DiffExpr& e) {
  std::set<Atom> s;
  gather_atoms(e, s);
  return {s.begin(), s.end()};
}

bool contains_atom(const DiffExpr& e, const std::function<bool(const Atom&)>& pred) {
  for (const auto& [factors, coeff] : e.terms()) {
    for (const auto& [atom, exp] : factors) {
      if (pred(atom)) return true;
      if (atom.kind() == AtomKind::Log && contains_atom(atom.argument(), pred)) return true;
    }
  }
  return false;
}

int max_jet_order(const DiffExpr& e, char dep) {
  int best = -1;
  for (const auto& a : atoms_of(e)) {
    if (a.is_jet(dep)) best = std::max(best, a.jet_order());
  }
  return best;
}

DiffExpr substitute_atoms(const DiffExpr& e,
                          const std::function<std::optional<DiffExpr>(const Atom&)>& rule) {
  std::map<Atom, std::optional<DiffExpr>> cache;
  auto replacement = [&](const Atom& atom) -> const std::optional<DiffExpr>& {
    auto it = cache.find(atom);
    if (it != cache.end()) return it->second;
    std::optional<DiffExpr> r = rule(atom);
    if (!r && atom.kind() == AtomKind::Log) {
      DiffExpr arg = substitute_atoms(atom.argument(), rule);
      if (arg != atom.argument()) {
        if (arg == DiffExpr(1L)) {
          r = DiffExpr();
        } else {
          r = DiffExpr(Atom::log(arg));
        }
      }
    }
    return cache.emplace(atom, std::move(r)).first->second;
  };

  DiffExpr out;
  for (const auto& [factors, coeff] : e.terms()) {
    Factors kept;
    DiffExpr product;
    bool replaced = false;
    for (const auto& [atom, exp] : factors) {
      const auto& r = replacement(atom);
      if (!r) {
        kept.emplace_back(atom, exp);
        continue;
      }
      DiffExpr p = r->pow(exp);
      product = replaced ? product * p : p;
      replaced = true;
    }
    if (!replaced) {
      out.add_term(kept, coeff);
      continue;
    }
    out += product * DiffExpr::monomial(coeff, std::move(kept));
  }
  return out;
}

DiffExpr substitute_params(const DiffExpr& e, const std::map<std::string, Rational>& values) {
  DiffExpr out;
  for (const auto& [factors, coeff] : e.terms()) out.add_term(factors, coeff.substitute(values));
  auto logs = [&](const Atom& a) -> std::optional<DiffExpr> {
    if (a.kind() != AtomKind::Log) return std::nullopt;
    DiffExpr arg = substitute_params(a.argument(), values);
    if (arg == a.argument()) return std::nullopt;
    if (arg == DiffExpr(1L)) return DiffExpr();
    return DiffExpr(Atom::log(arg));
  };
  return substitute_atoms(out, logs);
}

std::vector<std::string> params_of(const DiffExpr& e) {
  std::set<std::string> names;
  for (const auto& [factors, coeff] : e.terms()) {
    for (const auto& [mono, c] : coeff.terms()) {
      for (const auto& [name, exp] : mono) names.insert(name);
    }
    for (const auto& [atom, exp] : factors) {
      if (atom.kind() == AtomKind::Log) {
        for (auto& n : params_of(atom.argument())) names.insert(n);
      }
    }
  }
  return {names.begin(), names.end()};
}

std::vector<std::pair<Factors, DiffExpr>> collect(const DiffExpr& e,
                                                  const std::function<bool(const Atom&)>& selected) {
  std::map<Factors, DiffExpr, FactorsLess> groups;
  for (const auto& [factors, coeff] : e.terms()) {
    Factors key;
    Factors rest;
    for (const auto& [atom, exp] : factors) {
      if (selected(atom)) {
        if (exp < 0) throw InvalidArgument("collect: selected atom " + atom.to_string() + " has a negative exponent");
        key.emplace_back(atom, exp);
        continue;
      }
      if (atom.kind() == AtomKind::Log && contains_atom(atom.argument(), selected)) {
        throw InvalidArgument("collect: selected atom occurs inside " + atom.to_string());
      }
      rest.emplace_back(atom, exp);
    }
    groups[key].add_term(rest, coeff);
  }
  std::vector<std::pair<Factors, DiffExpr>> out;
  for (auto& [key, coeff] : groups) {
    if (!coeff.is_zero()) out.emplace_back(key, std::move(coeff));
  }
  return out;
}

}  // namespace nsa
