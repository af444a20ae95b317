#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace introspect {

// Minimal s-expression tree. `;` starts a comment running to end of line.
struct SExpr {
  bool list = false;
  std::string atom;
  std::vector<SExpr> items;
  int line = 0;

  bool is_atom() const { return !list; }
  bool is_atom(std::string_view text) const { return !list && atom == text; }
  // Head keyword of a list whose first item is an atom, else "".
  std::string_view head() const;
  std::string str() const;
};

std::vector<SExpr> read_sexprs(std::string_view text);
// Exactly one expression; throws ParseError otherwise.
SExpr read_sexpr(std::string_view text);

}  // namespace introspect
