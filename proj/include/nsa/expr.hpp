#pragma once

#include "nsa/param_poly.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nsa {

class DiffExpr;

/// Default bound on jet and partial-derivative orders.
inline constexpr int kDefaultOrderCap = 12;

/// Declaration order is the atom order used for canonical sorting.
enum class AtomKind : unsigned char { IndepVar, CoeffFn, UnknownFn, Jet, Log };

/// A generator of the differential-function algebra.
///
///   IndepVar   t or x
///   CoeffFn    a declared function of t; `order` counts t-derivatives (a, a', a'')
///   UnknownFn  phi(x,t,u) with partial multi-index (px, pt, pu)
///   Jet        u_{t^m x^k} or v_{t^m x^k}
///   Log        ln(g) for a canonical, non-Log argument g
class Atom {
 public:
  static Atom indep(char var);
  static Atom jet(char dep, int t_order, int x_order);
  static Atom coeff_fn(std::string name, int order = 0);
  static Atom unknown(std::string name, int px = 0, int pt = 0, int pu = 0);
  /// Throws InvalidArgument for ln(0) or ln(ln(...)).
  static Atom log(const DiffExpr& argument);

  AtomKind kind() const noexcept { return kind_; }
  /// IndepVar: 't'/'x'. Jet: dependent letter.
  char var() const noexcept { return var_; }
  int t_order() const noexcept { return t_; }
  int x_order() const noexcept { return x_; }
  int u_order() const noexcept { return u_; }
  /// Derivative count of a CoeffFn.
  int fn_order() const noexcept { return t_; }
  int jet_order() const noexcept { return t_ + x_; }
  const std::string& name() const noexcept { return name_; }
  const DiffExpr& argument() const { return *arg_; }

  bool is_jet(char dep) const noexcept { return kind_ == AtomKind::Jet && var_ == dep; }
  bool is_indep(char v) const noexcept { return kind_ == AtomKind::IndepVar && var_ == v; }

  friend int compare(const Atom& a, const Atom& b);
  friend bool operator==(const Atom& a, const Atom& b) { return compare(a, b) == 0; }
  friend bool operator!=(const Atom& a, const Atom& b) { return compare(a, b) != 0; }
  friend bool operator<(const Atom& a, const Atom& b) { return compare(a, b) < 0; }

  /// Source spelling: x, a, a'', phi_xu, u_txx, ln(...).
  std::string to_string() const;

 private:
  Atom() = default;

  AtomKind kind_ = AtomKind::IndepVar;
  char var_ = 0;
  int t_ = 0;
  int x_ = 0;
  int u_ = 0;
  std::string name_;
  std::shared_ptr<const DiffExpr> arg_;
};

/// Atom -> nonzero integer exponent, sorted by atom order.
using Factors = std::vector<std::pair<Atom, int>>;

struct FactorsLess {
  bool operator()(const Factors& a, const Factors& b) const;
};

struct Monomial {
  ParamPoly coeff;
  Factors factors;
};

/// Canonical sum of monomials. Like terms are merged, zero coefficients
/// dropped, and terms kept sorted, so structural equality is mathematical
/// equality at the monomial level.
class DiffExpr {
 public:
  using Terms = std::map<Factors, ParamPoly, FactorsLess>;

  DiffExpr() = default;
  DiffExpr(const Rational& value);   // NOLINT
  DiffExpr(long value);              // NOLINT
  DiffExpr(const ParamPoly& value);  // NOLINT
  DiffExpr(const Atom& atom, int exponent = 1);  // NOLINT

  static DiffExpr monomial(const ParamPoly& coeff, Factors factors);
  static DiffExpr param(const std::string& name) { return DiffExpr(ParamPoly::param(name)); }

  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  const Terms& terms() const noexcept { return terms_; }
  std::vector<Monomial> monomials() const;

  /// Single term (possibly a constant).
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  /// Value when the expression is a parameter polynomial with no atoms.
  std::optional<ParamPoly> as_constant() const;
  /// Multiplicative inverse of a monomial with invertible coefficient.
  DiffExpr inverse() const;
  DiffExpr pow(int exponent) const;

  DiffExpr operator-() const;
  DiffExpr& operator+=(const DiffExpr& other);
  DiffExpr& operator-=(const DiffExpr& other);
  DiffExpr& operator*=(const DiffExpr& other);
  friend DiffExpr operator+(DiffExpr a, const DiffExpr& b) { return a += b; }
  friend DiffExpr operator-(DiffExpr a, const DiffExpr& b) { return a -= b; }
  friend DiffExpr operator*(const DiffExpr& a, const DiffExpr& b);

  /// Adds coeff * factors in place.
  void add_term(const Factors& factors, const ParamPoly& coeff);

  friend int compare(const DiffExpr& a, const DiffExpr& b);
  friend bool operator==(const DiffExpr& a, const DiffExpr& b) { return compare(a, b) == 0; }
  friend bool operator!=(const DiffExpr& a, const DiffExpr& b) { return compare(a, b) != 0; }
  friend bool operator<(const DiffExpr& a, const DiffExpr& b) { return compare(a, b) < 0; }

 private:
  Terms terms_;
};

Factors multiply_factors(const Factors& a, const Factors& b);

/// true iff normalize(a - b) is the empty sum.
bool equal(const DiffExpr& a, const DiffExpr& b);

/// If a = r * b for a nonzero rational r, returns r.
std::optional<Rational> proportional(const DiffExpr& a, const DiffExpr& b);

/// Every atom occurring in e, including those inside ln arguments.
std::vector<Atom> atoms_of(const DiffExpr& e);
bool contains_atom(const DiffExpr& e, const std::function<bool(const Atom&)>& pred);
/// Highest jet order of the given dependent (-1 if absent).
int max_jet_order(const DiffExpr& e, char dep);

/// Replaces atoms (at top level and inside ln arguments) by expressions.
/// Negative powers require the replacement to be a monomial.
DiffExpr substitute_atoms(const DiffExpr& e,
                          const std::function<std::optional<DiffExpr>(const Atom&)>& rule);

DiffExpr substitute_params(const DiffExpr& e, const std::map<std::string, Rational>& values);

/// Parameter names used in any coefficient.
std::vector<std::string> params_of(const DiffExpr& e);

/// Groups e by the product of its factors that satisfy `selected`.
/// Keys are distinct and sorted; coefficients are free of selected atoms.
/// Throws InvalidArgument if a selected atom has a negative exponent or
/// occurs inside a ln argument.
std::vector<std::pair<Factors, DiffExpr>> collect(const DiffExpr& e,
                                                  const std::function<bool(const Atom&)>& selected);

}  // namespace nsa
