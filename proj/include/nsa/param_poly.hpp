#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nsa {

using Rational = mpq_class;

/// Laurent polynomial in named parameters with exact rational coefficients.
/// This is the coefficient ring of every monomial.
class ParamPoly {
 public:
  /// Sorted by parameter name; exponents are nonzero.
  using Mono = std::vector<std::pair<std::string, int>>;

  struct MonoLess {
    bool operator()(const Mono& a, const Mono& b) const;
  };
  using Terms = std::map<Mono, Rational, MonoLess>;

  ParamPoly() = default;
  ParamPoly(const Rational& value);  // NOLINT: implicit by intent
  ParamPoly(long value) : ParamPoly(Rational(value)) {}  // NOLINT

  static ParamPoly param(const std::string& name, int exponent = 1);

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_one() const;
  bool is_single_term() const noexcept { return terms_.size() == 1; }
  /// Value when free of parameters.
  std::optional<Rational> constant() const;
  const Terms& terms() const noexcept { return terms_; }

  /// Sign of the coefficient of the leading term (0 for zero).
  int leading_sign() const;

  ParamPoly operator-() const;
  ParamPoly& operator+=(const ParamPoly& other);
  ParamPoly& operator-=(const ParamPoly& other);
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);

  /// Inverse of a single-term polynomial; throws UnsupportedError otherwise.
  ParamPoly inverse() const;

  ParamPoly substitute(const std::map<std::string, Rational>& values) const;

  friend int compare(const ParamPoly& a, const ParamPoly& b);
  friend bool operator==(const ParamPoly& a, const ParamPoly& b) { return compare(a, b) == 0; }
  friend bool operator<(const ParamPoly& a, const ParamPoly& b) { return compare(a, b) < 0; }

  /// Infix form, e.g. "5*p + 2".
  std::string to_string() const;

 private:
  void add_term(const Mono& mono, const Rational& coeff);

  Terms terms_;
};

std::string rational_to_string(const Rational& q);

}  // namespace nsa
