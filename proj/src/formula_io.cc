#include "introspect/formula_io.h"

#include "introspect/errors.h"

namespace introspect {
namespace {

[[noreturn]] void fail(const SExpr& e, const std::string& msg) {
  throw ParseError("line " + std::to_string(e.line) + ": " + msg + " in '" +
                   e.str() + "'");
}

std::vector<Term> terms_from(const SExpr& e, std::size_t first) {
  std::vector<Term> out;
  for (std::size_t i = first; i < e.items.size(); ++i) {
    out.push_back(term_from_atom(e.items[i]));
  }
  return out;
}

Symbol variable_name(const SExpr& e) {
  if (!e.is_atom() || e.atom.size() < 2 || e.atom[0] != '?') {
    fail(e, "expected a variable like ?X");
  }
  return Symbol::intern(std::string_view(e.atom).substr(1));
}

}  // namespace

Term term_from_atom(const SExpr& e) {
  if (!e.is_atom() || e.atom.empty()) fail(e, "expected a term");
  if (e.atom[0] == '?') return Term::variable(variable_name(e));
  return Term::constant(e.atom);
}

Formula formula_from_sexpr(const SExpr& e) {
  if (e.is_atom("true")) return Formula::truth();
  if (!e.list || e.head().empty()) fail(e, "expected a formula");
  std::string_view head = e.head();
  const auto n = e.items.size();
  if (head == "lit" || head == "action") {
    if (n < 2 || !e.items[1].is_atom()) fail(e, "missing name");
    Symbol name = Symbol::intern(e.items[1].atom);
    if (head == "lit") return Formula::lit(Literal(name, terms_from(e, 2)));
    return Formula::action(name, terms_from(e, 2));
  }
  if (head == "not") {
    if (n != 2) fail(e, "'not' takes exactly one operand");
    return Formula::negate(formula_from_sexpr(e.items[1]));
  }
  if (head == "and" || head == "or") {
    std::vector<Formula> cs;
    for (std::size_t i = 1; i < n; ++i) cs.push_back(formula_from_sexpr(e.items[i]));
    if (cs.empty()) fail(e, "connective needs at least one operand");
    return head == "and" ? Formula::conj(std::move(cs))
                         : Formula::disj(std::move(cs));
  }
  if (head == "exists" || head == "forall") {
    if (n != 3) fail(e, "quantifier takes a variable and a body");
    Symbol v = variable_name(e.items[1]);
    Formula body = formula_from_sexpr(e.items[2]);
    return head == "exists" ? Formula::exists(v, std::move(body))
                            : Formula::forall(v, std::move(body));
  }
  fail(e, "unknown formula keyword '" + std::string(head) + "'");
}

Formula parse_formula(std::string_view text) {
  return formula_from_sexpr(read_sexpr(text));
}

std::string to_string(const Term& t) {
  return t.is_variable() ? "?" + t.symbol().name() : t.symbol().name();
}

std::string to_string(const Formula& f) {
  using K = Formula::Kind;
  auto with_terms = [](std::string out, const std::vector<Term>& terms) {
    for (const Term& t : terms) out += " " + to_string(t);
    return out + ")";
  };
  switch (f.kind()) {
    case K::kTrue:
      return "true";
    case K::kLiteral:
      return with_terms("(lit " + f.literal().predicate().name(),
                        f.literal().terms());
    case K::kAction:
      return with_terms("(action " + f.action_name().name(), f.action_terms());
    case K::kNot:
      return "(not " + to_string(f.child()) + ")";
    case K::kAnd:
    case K::kOr: {
      std::string out = f.kind() == K::kAnd ? "(and" : "(or";
      for (const Formula& c : f.children()) out += " " + to_string(c);
      return out + ")";
    }
    case K::kExists:
    case K::kForall:
      return std::string(f.kind() == K::kExists ? "(exists ?" : "(forall ?") +
             f.bound().name() + " " + to_string(f.child()) + ")";
  }
  return "";
}

}  // namespace introspect
