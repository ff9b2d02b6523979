#include "nsa/param_poly.hpp"

#include "nsa/error.hpp"

#include <algorithm>
#include <sstream>

namespace nsa {

namespace {

int degree(const ParamPoly::Mono& m) {
  int d = 0;
  for (const auto& [name, e] : m) d += e;
  return d;
}

ParamPoly::Mono multiply(const ParamPoly::Mono& a, const ParamPoly::Mono& b) {
  ParamPoly::Mono out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() || j != b.end()) {
    if (j == b.end() || (i != a.end() && i->first < j->first)) {
      out.push_back(*i++);
    } else if (i == a.end() || j->first < i->first) {
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

}  // namespace

std::string rational_to_string(const Rational& q) { return q.get_str(); }

// Higher total degree first, then lexicographic; the constant term sorts last.
bool ParamPoly::MonoLess::operator()(const Mono& a, const Mono& b) const {
  int da = degree(a);
  int db = degree(b);
  if (da != db) return da > db;
  return a < b;
}

ParamPoly::ParamPoly(const Rational& value) {
  if (value == 0) return;
  Rational v = value;
  v.canonicalize();
  terms_.emplace(Mono{}, std::move(v));
}

ParamPoly ParamPoly::param(const std::string& name, int exponent) {
  ParamPoly p;
  if (exponent == 0) {
    p.terms_.emplace(Mono{}, Rational(1));
  } else {
    p.terms_.emplace(Mono{{name, exponent}}, Rational(1));
  }
  return p;
}

bool ParamPoly::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.empty() && terms_.begin()->second == 1;
}

std::optional<Rational> ParamPoly::constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

int ParamPoly::leading_sign() const {
  if (terms_.empty()) return 0;
  return sgn(terms_.begin()->second);
}

void ParamPoly::add_term(const Mono& mono, const Rational& coeff) {
  if (coeff == 0) return;
  auto [it, inserted] = terms_.emplace(mono, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  ParamPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(multiply(ma, mb), ca * cb);
  }
  return out;
}

ParamPoly ParamPoly::inverse() const {
  if (terms_.size() != 1) {
    throw UnsupportedError("cannot invert the parameter polynomial " + to_string());
  }
  const auto& [mono, coeff] = *terms_.begin();
  Mono inv = mono;
  for (auto& [name, e] : inv) e = -e;
  ParamPoly out;
  out.terms_.emplace(std::move(inv), Rational(1) / coeff);
  return out;
}

ParamPoly ParamPoly::substitute(const std::map<std::string, Rational>& values) const {
  ParamPoly out;
  for (const auto& [mono, coeff] : terms_) {
    Rational c = coeff;
    Mono rest;
    for (const auto& [name, e] : mono) {
      auto it = values.find(name);
      if (it == values.end()) {
        rest.emplace_back(name, e);
        continue;
      }
      if (it->second == 0 && e < 0) {
        throw InvalidArgument("parameter " + name + " set to 0 appears with a negative power");
      }
      Rational base = e > 0 ? it->second : Rational(1) / it->second;
      for (int k = 0; k < std::abs(e); ++k) c *= base;
    }
    out.add_term(rest, c);
  }
  return out;
}

int compare(const ParamPoly& a, const ParamPoly& b) {
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  ParamPoly::MonoLess less;
  for (; i != a.terms_.end() && j != b.terms_.end(); ++i, ++j) {
    if (less(i->first, j->first)) return -1;
    if (less(j->first, i->first)) return 1;
    int c = cmp(i->second, j->second);
    if (c != 0) return c < 0 ? -1 : 1;
  }
  if (i == a.terms_.end() && j == b.terms_.end()) return 0;
  return i == a.terms_.end() ? -1 : 1;
}

std::string ParamPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, coeff] : terms_) {
    Rational mag = abs(coeff);
    if (first) {
      if (coeff < 0) os << "-";
    } else {
      os << (coeff < 0 ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (mono.empty() || mag != 1) {
      os << rational_to_string(mag);
      need_star = true;
    }
    for (const auto& [name, e] : mono) {
      if (need_star) os << "*";
      os << name;
      if (e != 1) os << "^" << e;
      need_star = true;
    }
  }
  return os.str();
}

}  // namespace nsa
