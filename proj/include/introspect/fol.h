#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "introspect/atoms.h"
#include "introspect/state.h"

namespace introspect {

class Term {
 public:
  Term() = default;
  static Term constant(Symbol name) { return Term(name, false); }
  static Term variable(Symbol name) { return Term(name, true); }
  static Term constant(std::string_view name) {
    return constant(Symbol::intern(name));
  }
  static Term variable(std::string_view name) {
    return variable(Symbol::intern(name));
  }

  bool is_variable() const { return variable_; }
  bool is_constant() const { return !variable_; }
  Symbol symbol() const { return name_; }

  friend bool operator==(const Term& a, const Term& b) {
    return a.variable_ == b.variable_ && a.name_ == b.name_;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.variable_ != b.variable_) return a.variable_ < b.variable_;
    return a.name_ < b.name_;
  }

 private:
  Term(Symbol name, bool variable) : name_(name), variable_(variable) {}
  Symbol name_;
  bool variable_ = false;
};

// A predicate applied to terms. Arity is checked against declarations by
// the domain loader, not here.
class Literal {
 public:
  Literal() = default;
  Literal(Symbol predicate, std::vector<Term> terms)
      : predicate_(predicate), terms_(std::move(terms)) {}

  Symbol predicate() const { return predicate_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t arity() const { return terms_.size(); }
  bool ground() const;
  // Requires ground().
  Atom to_atom() const;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.predicate_ == b.predicate_ && a.terms_ == b.terms_;
  }

 private:
  Symbol predicate_;
  std::vector<Term> terms_;
};

// Variable -> constant.
using Substitution = std::map<Symbol, Symbol>;

// Immutable FOL formula with shared structure. Copies are cheap.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    kTrue,
    kLiteral,
    kAnd,
    kOr,
    kNot,
    kExists,
    kForall,
    kAction,
  };

  // TrueConst.
  Formula();

  static Formula truth() { return Formula(); }
  static Formula lit(Literal literal);
  static Formula conj(std::vector<Formula> children);
  static Formula disj(std::vector<Formula> children);
  static Formula negate(Formula child);
  static Formula exists(Symbol var, Formula body);
  static Formula forall(Symbol var, Formula body);
  static Formula action(Symbol schema, std::vector<Term> terms);

  Kind kind() const;
  const Literal& literal() const;
  const std::vector<Formula>& children() const;
  // Operand of Not, body of a quantifier.
  const Formula& child() const;
  Symbol bound() const;
  Symbol action_name() const;
  const std::vector<Term>& action_terms() const;

  // Every variable bound by some quantifier inside this formula, sorted.
  const std::vector<Symbol>& bound_variables() const;
  bool mentions_action() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) {
    return !(a == b);
  }

  struct Node;  // opaque

 private:
  explicit Formula(std::shared_ptr<const Node> node)
      : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Innermost-last variable bindings used during evaluation.
class Bindings {
 public:
  Bindings() = default;
  explicit Bindings(const Substitution& sub);

  void push(Symbol var, Symbol value) { items_.emplace_back(var, value); }
  void pop() { items_.pop_back(); }
  std::size_t size() const { return items_.size(); }
  void truncate(std::size_t n) { items_.resize(n); }
  // Returns an invalid Symbol when unbound.
  Symbol lookup(Symbol var) const;

 private:
  std::vector<std::pair<Symbol, Symbol>> items_;
};

// Resolves a literal under bindings; throws MalformedFormula on a free
// variable.
Atom ground_literal(const Literal& lit, const Bindings& env);
GroundAction ground_action_atom(const Formula& f, const Bindings& env);

bool evaluate(const Formula& f, const RelState& s);
bool evaluate(const Formula& f, const RelState& s, const GroundAction& ctx);
// Low-level entry: `ctx` may be null when the formula has no ActionAtoms.
bool evaluate(const Formula& f, const RelState& s, const GroundAction* ctx,
              Bindings& env);

Formula substitute(const Formula& f, const Substitution& binding);
std::set<Symbol> free_variables(const Formula& f);

}  // namespace introspect
