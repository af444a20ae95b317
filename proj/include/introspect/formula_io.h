#pragma once

#include <string>
#include <string_view>

#include "introspect/fol.h"
#include "introspect/sexpr.h"

namespace introspect {

// Text syntax:
//   true | (lit P t...) | (action A t...) | (not f) | (and f...) | (or f...)
//   | (exists ?X f) | (forall ?X f)
// Terms starting with '?' are variables; everything else is a constant.
Formula parse_formula(std::string_view text);
Formula formula_from_sexpr(const SExpr& e);
Term term_from_atom(const SExpr& e);

std::string to_string(const Term& t);
std::string to_string(const Formula& f);

}  // namespace introspect
