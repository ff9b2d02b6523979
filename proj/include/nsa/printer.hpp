#pragma once

#include "nsa/expr.hpp"

#include <functional>
#include <string>
#include <vector>

namespace nsa {

using AtomPredicate = std::function<bool(const Atom&)>;

/// Canonical flat form, e.g. "2*u*u_x", "-(5*p + 2)*u", "0".
std::string print(const DiffExpr& e);

std::string print_factors(const Factors& factors);

/// Nested form: groups by the atoms selected by levels[0], then each group
/// coefficient by levels[1], and so on. Re-parses to the same expression.
std::string print_grouped(const DiffExpr& e, const std::vector<AtomPredicate>& levels);

}  // namespace nsa
