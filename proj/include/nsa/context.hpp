#pragma once

#include "nsa/expr.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>

namespace nsa {

/// A declared coefficient function of t. Without an explicit derivative the
/// function spawns the chain a -> a' -> a'' ...; with one, D_t a = derivative.
struct FunctionDecl {
  std::string name;
  std::optional<DiffExpr> derivative;
};

/// Symbol table plus the jet-order cap. Built once (usually by the parser)
/// and then shared read-only.
class Context {
 public:
  explicit Context(int order_cap = kDefaultOrderCap);

  int order_cap() const noexcept { return order_cap_; }

  /// Each throws DeclarationError on reserved or duplicate names.
  void declare_param(const std::string& name);
  void declare_function(const std::string& name);
  void set_function_derivative(const std::string& name, DiffExpr derivative);
  void declare_unknown(const std::string& name);

  bool is_param(const std::string& name) const { return params_.count(name) != 0; }
  bool is_unknown(const std::string& name) const { return unknowns_.count(name) != 0; }
  const FunctionDecl* function(const std::string& name) const;
  bool is_declared(const std::string& name) const;

  const std::set<std::string>& params() const noexcept { return params_; }
  const std::set<std::string>& unknowns() const noexcept { return unknowns_; }
  const std::map<std::string, FunctionDecl>& functions() const noexcept { return functions_; }

  /// D_t of a coefficient-function atom.
  DiffExpr function_derivative(const Atom& fn) const;

  /// Throws OrderCapError if the atom's order exceeds the cap.
  void check_order(const Atom& atom) const;

  /// A copy whose derivative rules have the given parameters replaced by
  /// values. The parameters stay declared.
  Context with_param_values(const std::map<std::string, Rational>& values) const;

  static bool is_reserved(const std::string& name);

 private:
  void check_new_name(const std::string& name) const;

  int order_cap_;
  std::set<std::string> params_;
  std::set<std::string> unknowns_;
  std::map<std::string, FunctionDecl> functions_;
};

}  // namespace nsa
