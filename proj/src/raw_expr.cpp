#include "nsa/raw_expr.hpp"

#include "nsa/error.hpp"

namespace nsa {

RawExpr RawExpr::number(const Rational& q) {
  RawExpr r;
  r.op = Op::Number;
  r.value = q;
  return r;
}

RawExpr RawExpr::param(std::string name) {
  RawExpr r;
  r.op = Op::Param;
  r.name = std::move(name);
  return r;
}

RawExpr RawExpr::atom(const Atom& a) {
  RawExpr r;
  r.op = Op::Leaf;
  r.leaf.push_back(a);
  return r;
}

RawExpr RawExpr::binary(Op op, RawExpr lhs, RawExpr rhs) {
  RawExpr r;
  r.op = op;
  r.children.push_back(std::move(lhs));
  r.children.push_back(std::move(rhs));
  return r;
}

RawExpr RawExpr::negate(RawExpr operand) {
  RawExpr r;
  r.op = Op::Neg;
  r.children.push_back(std::move(operand));
  return r;
}

RawExpr RawExpr::power(RawExpr base, const Rational& exponent) {
  RawExpr r;
  r.op = Op::Pow;
  r.value = exponent;
  r.children.push_back(std::move(base));
  return r;
}

RawExpr RawExpr::ln(RawExpr argument) {
  RawExpr r;
  r.op = Op::Ln;
  r.children.push_back(std::move(argument));
  return r;
}

DiffExpr ln(const DiffExpr& g) {
  if (g == DiffExpr(1L)) return DiffExpr();
  return DiffExpr(Atom::log(g));
}

DiffExpr normalize(const RawExpr& raw) {
  using Op = RawExpr::Op;
  switch (raw.op) {
    case Op::Number:
      return DiffExpr(raw.value);
    case Op::Param:
      return DiffExpr::param(raw.name);
    case Op::Leaf:
      return DiffExpr(raw.leaf.at(0));
    case Op::Add:
      return normalize(raw.children.at(0)) + normalize(raw.children.at(1));
    case Op::Sub:
      return normalize(raw.children.at(0)) - normalize(raw.children.at(1));
    case Op::Mul:
      return normalize(raw.children.at(0)) * normalize(raw.children.at(1));
    case Op::Div: {
      DiffExpr denominator = normalize(raw.children.at(1));
      if (denominator.is_zero()) throw InvalidArgument("division by zero");
      return normalize(raw.children.at(0)) * denominator.inverse();
    }
    case Op::Neg:
      return -normalize(raw.children.at(0));
    case Op::Pow: {
      if (raw.value.get_den() != 1) {
        throw InvalidArgument("non-integer exponent " + rational_to_string(raw.value));
      }
      if (!raw.value.get_num().fits_sint_p()) throw InvalidArgument("exponent out of range");
      long e = raw.value.get_num().get_si();
      DiffExpr base = normalize(raw.children.at(0));
      if (base.is_zero() && e < 0) throw InvalidArgument("division by zero");
      return base.pow(static_cast<int>(e));
    }
    case Op::Ln:
      return ln(normalize(raw.children.at(0)));
  }
  return {};
}

namespace {

RawExpr atom_to_raw(const Atom& a) {
  if (a.kind() == AtomKind::Log) return RawExpr::ln(to_raw(a.argument()));
  return RawExpr::atom(a);
}

}  // namespace

RawExpr to_raw(const DiffExpr& e) {
  if (e.is_zero()) return RawExpr::number(0);
  std::optional<RawExpr> sum;
  for (const auto& [factors, coeff] : e.terms()) {
    std::optional<RawExpr> c;
    for (const auto& [mono, q] : coeff.terms()) {
      RawExpr t = RawExpr::number(q);
      for (const auto& [name, exp] : mono) {
        t = RawExpr::binary(RawExpr::Op::Mul, std::move(t), RawExpr::power(RawExpr::param(name), exp));
      }
      c = c ? RawExpr::binary(RawExpr::Op::Add, std::move(*c), std::move(t)) : std::move(t);
    }
    RawExpr term = std::move(*c);
    for (const auto& [atom, exp] : factors) {
      term = RawExpr::binary(RawExpr::Op::Mul, std::move(term), RawExpr::power(atom_to_raw(atom), exp));
    }
    sum = sum ? RawExpr::binary(RawExpr::Op::Add, std::move(*sum), std::move(term)) : std::move(term);
  }
  return std::move(*sum);
}

}  // namespace nsa
