#include "nsa/context.hpp"

#include "nsa/error.hpp"

#include <array>

namespace nsa {

Context::Context(int order_cap) : order_cap_(order_cap) {
  if (order_cap < 1) throw InvalidArgument("order cap must be positive");
}

bool Context::is_reserved(const std::string& name) {
  static const std::array<const char*, 13> reserved = {"t",   "x",    "u",      "v",       "ln",       "param", "func",
                                                       "unknown", "deriv", "eq", "symmetry", "vector", "expr"};
  for (const char* r : reserved) {
    if (name == r) return true;
  }
  return false;
}

void Context::check_new_name(const std::string& name) const {
  if (is_reserved(name)) throw DeclarationError("'" + name + "' is reserved");
  if (is_declared(name)) throw DeclarationError("duplicate declaration of '" + name + "'");
}

bool Context::is_declared(const std::string& name) const {
  return params_.count(name) || unknowns_.count(name) || functions_.count(name);
}

void Context::declare_param(const std::string& name) {
  check_new_name(name);
  params_.insert(name);
}

void Context::declare_function(const std::string& name) {
  check_new_name(name);
  functions_.emplace(name, FunctionDecl{name, std::nullopt});
}

void Context::set_function_derivative(const std::string& name, DiffExpr derivative) {
  auto it = functions_.find(name);
  if (it == functions_.end()) throw DeclarationError("undeclared function '" + name + "'");
  for (const auto& atom : atoms_of(derivative)) {
    bool ok = atom.is_indep('t') || atom.kind() == AtomKind::CoeffFn || atom.kind() == AtomKind::Log;
    if (!ok) {
      throw DeclarationError("derivative rule of '" + name + "' may depend on t and coefficient functions only");
    }
    if (atom.kind() == AtomKind::CoeffFn && atom.fn_order() != 0 && functions_.at(atom.name()).derivative) {
      throw DeclarationError("derivative rule of '" + name + "' uses a derivative of a ruled function");
    }
  }
  it->second.derivative = std::move(derivative);
}

Context Context::with_param_values(const std::map<std::string, Rational>& values) const {
  Context copy = *this;
  for (auto& [name, decl] : copy.functions_) {
    if (decl.derivative) decl.derivative = substitute_params(*decl.derivative, values);
  }
  return copy;
}

void Context::declare_unknown(const std::string& name) {
  check_new_name(name);
  unknowns_.insert(name);
}

const FunctionDecl* Context::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

DiffExpr Context::function_derivative(const Atom& fn) const {
  const FunctionDecl* decl = function(fn.name());
  if (!decl) throw DeclarationError("undeclared function '" + fn.name() + "'");
  if (decl->derivative) {
    if (fn.fn_order() != 0) {
      throw InvalidArgument("function '" + fn.name() + "' has an explicit derivative rule and no primed forms");
    }
    return *decl->derivative;
  }
  Atom next = Atom::coeff_fn(fn.name(), fn.fn_order() + 1);
  check_order(next);
  return DiffExpr(next);
}

void Context::check_order(const Atom& atom) const {
  int order = 0;
  switch (atom.kind()) {
    case AtomKind::Jet:
      order = atom.jet_order();
      break;
    case AtomKind::UnknownFn:
      order = atom.x_order() + atom.t_order() + atom.u_order();
      break;
    case AtomKind::CoeffFn:
      order = atom.fn_order();
      break;
    default:
      return;
  }
  if (order > order_cap_) {
    throw OrderCapError("order cap " + std::to_string(order_cap_) + " exceeded by " + atom.to_string());
  }
}

}  // namespace nsa
