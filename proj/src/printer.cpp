#include "nsa/printer.hpp"

#include "nsa/error.hpp"

namespace nsa {

namespace {

void append_term(std::string& out, const ParamPoly& coeff, const std::string& body, bool first) {
  bool negative = false;
  std::string text;
  if (coeff.is_single_term()) {
    const auto& [mono, q] = *coeff.terms().begin();
    negative = q < 0;
    Rational mag = abs(q);
    std::vector<std::string> parts;
    if (mag != 1 || (mono.empty() && body.empty())) parts.push_back(rational_to_string(mag));
    for (const auto& [name, e] : mono) parts.push_back(e == 1 ? name : name + "^" + std::to_string(e));
    if (!body.empty()) parts.push_back(body);
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) text += "*";
      text += parts[i];
    }
  } else {
    negative = coeff.leading_sign() < 0;
    text = "(" + (negative ? -coeff : coeff).to_string() + ")";
    if (!body.empty()) text += "*" + body;
  }
  if (first) {
    out += negative ? "-" : "";
  } else {
    out += negative ? " - " : " + ";
  }
  out += text;
}

std::string grouped(const DiffExpr& e, const std::vector<AtomPredicate>& levels, std::size_t level) {
  if (e.is_zero()) return "0";
  if (level >= levels.size()) return print(e);
  std::vector<std::pair<Factors, DiffExpr>> groups;
  try {
    groups = collect(e, levels[level]);
  } catch (const InvalidArgument&) {
    // Negative powers or logs of a grouping atom: skip this level.
    return grouped(e, levels, level + 1);
  }
  std::string out;
  bool first = true;
  for (const auto& [key, coeff] : groups) {
    std::string key_text = print_factors(key);
    if (coeff.is_monomial()) {
      const auto& [factors, c] = *coeff.terms().begin();
      std::string body = print_factors(factors);
      if (!key_text.empty()) body = body.empty() ? key_text : body + "*" + key_text;
      append_term(out, c, body, first);
    } else if (key_text.empty()) {
      out += first ? "" : " + ";
      out += grouped(coeff, levels, level + 1);
    } else {
      out += first ? "" : " + ";
      out += "(" + grouped(coeff, levels, level + 1) + ")*" + key_text;
    }
    first = false;
  }
  return out;
}

}  // namespace

std::string print_factors(const Factors& factors) {
  std::string out;
  for (const auto& [atom, e] : factors) {
    if (!out.empty()) out += "*";
    out += atom.to_string();
    if (e != 1) out += "^" + std::to_string(e);
  }
  return out;
}

std::string print(const DiffExpr& e) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [factors, coeff] : e.terms()) {
    append_term(out, coeff, print_factors(factors), first);
    first = false;
  }
  return out;
}

std::string print_grouped(const DiffExpr& e, const std::vector<AtomPredicate>& levels) {
  return grouped(e, levels, 0);
}

}  // namespace nsa
