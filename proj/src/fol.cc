#include "introspect/fol.h"

#include <algorithm>
#include <iterator>

namespace introspect {

struct Formula::Node {
  Kind kind = Kind::kTrue;
  Literal literal;
  std::vector<Formula> children;  // And/Or operands; single entry for Not and
                                  // quantifiers
  Symbol bound;                   // quantified variable or action name
  std::vector<Term> action_terms;
  std::vector<Symbol> bound_vars;
  bool mentions_action = false;
};

namespace {

const std::shared_ptr<const Formula::Node>& true_node() {
  static const auto kTrue = std::make_shared<const Formula::Node>();
  return kTrue;
}

std::vector<Symbol> merge_bound(const std::vector<Formula>& children) {
  std::vector<Symbol> out;
  for (const Formula& c : children) {
    std::vector<Symbol> merged;
    std::set_union(out.begin(), out.end(), c.bound_variables().begin(),
                   c.bound_variables().end(), std::back_inserter(merged));
    out = std::move(merged);
  }
  return out;
}

bool any_action(const std::vector<Formula>& children) {
  return std::any_of(children.begin(), children.end(),
                     [](const Formula& c) { return c.mentions_action(); });
}

}  // namespace

bool Literal::ground() const {
  return std::none_of(terms_.begin(), terms_.end(),
                      [](const Term& t) { return t.is_variable(); });
}

Atom Literal::to_atom() const {
  std::array<Symbol, kMaxArity> args{};
  if (terms_.size() > kMaxArity) {
    throw Error("literal '" + predicate_.name() + "' exceeds maximum arity");
  }
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].is_variable()) {
      throw MalformedFormula("literal '" + predicate_.name() +
                             "' has unbound variable ?" +
                             terms_[i].symbol().name());
    }
    args[i] = terms_[i].symbol();
  }
  return Atom(predicate_, std::span<const Symbol>(args.data(), terms_.size()));
}

Formula::Formula() : node_(true_node()) {}

Formula Formula::lit(Literal literal) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kLiteral;
  n->literal = std::move(literal);
  return Formula(std::move(n));
}

Formula Formula::conj(std::vector<Formula> children) {
  if (children.empty()) throw MalformedFormula("'and' needs at least one child");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAnd;
  n->bound_vars = merge_bound(children);
  n->mentions_action = any_action(children);
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> children) {
  if (children.empty()) throw MalformedFormula("'or' needs at least one child");
  auto n = std::make_shared<Node>();
  n->kind = Kind::kOr;
  n->bound_vars = merge_bound(children);
  n->mentions_action = any_action(children);
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::negate(Formula child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kNot;
  n->bound_vars = child.bound_variables();
  n->mentions_action = child.mentions_action();
  n->children.push_back(std::move(child));
  return Formula(std::move(n));
}

static void fill_quantifier(Formula::Node& n, Formula::Kind kind, Symbol var,
                            Formula body) {
  const auto& inner = body.bound_variables();
  if (std::binary_search(inner.begin(), inner.end(), var)) {
    throw MalformedFormula("quantifier rebinds variable ?" + var.name());
  }
  n.kind = kind;
  n.bound = var;
  n.bound_vars = inner;
  n.bound_vars.insert(
      std::upper_bound(n.bound_vars.begin(), n.bound_vars.end(), var), var);
  n.mentions_action = body.mentions_action();
  n.children.push_back(std::move(body));
}

Formula Formula::exists(Symbol var, Formula body) {
  auto n = std::make_shared<Node>();
  fill_quantifier(*n, Kind::kExists, var, std::move(body));
  return Formula(std::move(n));
}

Formula Formula::forall(Symbol var, Formula body) {
  auto n = std::make_shared<Node>();
  fill_quantifier(*n, Kind::kForall, var, std::move(body));
  return Formula(std::move(n));
}

Formula Formula::action(Symbol schema, std::vector<Term> terms) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::kAction;
  n->bound = schema;
  n->action_terms = std::move(terms);
  n->mentions_action = true;
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const Literal& Formula::literal() const { return node_->literal; }
const std::vector<Formula>& Formula::children() const {
  return node_->children;
}
const Formula& Formula::child() const { return node_->children.front(); }
Symbol Formula::bound() const { return node_->bound; }
Symbol Formula::action_name() const { return node_->bound; }
const std::vector<Term>& Formula::action_terms() const {
  return node_->action_terms;
}
const std::vector<Symbol>& Formula::bound_variables() const {
  return node_->bound_vars;
}
bool Formula::mentions_action() const { return node_->mentions_action; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const Formula::Node& x = *a.node_;
  const Formula::Node& y = *b.node_;
  if (x.kind != y.kind) return false;
  switch (x.kind) {
    case Formula::Kind::kTrue:
      return true;
    case Formula::Kind::kLiteral:
      return x.literal == y.literal;
    case Formula::Kind::kAction:
      return x.bound == y.bound && x.action_terms == y.action_terms;
    case Formula::Kind::kExists:
    case Formula::Kind::kForall:
      if (x.bound != y.bound) return false;
      [[fallthrough]];
    default:
      return x.children == y.children;
  }
}

Bindings::Bindings(const Substitution& sub) {
  for (const auto& [var, value] : sub) push(var, value);
}

Symbol Bindings::lookup(Symbol var) const {
  for (auto it = items_.rbegin(); it != items_.rend(); ++it) {
    if (it->first == var) return it->second;
  }
  return Symbol();
}

namespace {

Symbol resolve(const Term& t, const Bindings& env) {
  if (t.is_constant()) return t.symbol();
  Symbol v = env.lookup(t.symbol());
  if (!v.valid()) {
    throw MalformedFormula("unbound variable ?" + t.symbol().name());
  }
  return v;
}

}  // namespace

Atom ground_literal(const Literal& lit, const Bindings& env) {
  const auto& terms = lit.terms();
  if (terms.size() > kMaxArity) {
    throw Error("literal '" + lit.predicate().name() + "' exceeds maximum arity");
  }
  std::array<Symbol, kMaxArity> args{};
  for (std::size_t i = 0; i < terms.size(); ++i) args[i] = resolve(terms[i], env);
  return Atom(lit.predicate(), std::span<const Symbol>(args.data(), terms.size()));
}

GroundAction ground_action_atom(const Formula& f, const Bindings& env) {
  const auto& terms = f.action_terms();
  if (terms.size() > kMaxArity) {
    throw Error("action '" + f.action_name().name() + "' exceeds maximum arity");
  }
  std::array<Symbol, kMaxArity> args{};
  for (std::size_t i = 0; i < terms.size(); ++i) args[i] = resolve(terms[i], env);
  return GroundAction(f.action_name(),
                      std::span<const Symbol>(args.data(), terms.size()));
}

bool evaluate(const Formula& f, const RelState& s, const GroundAction* ctx,
              Bindings& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
      return true;
    case K::kLiteral:
      return s.holds(ground_literal(f.literal(), env));
    case K::kAction: {
      GroundAction a = ground_action_atom(f, env);
      if (ctx == nullptr) {
        throw MissingContext("action atom " + a.str() +
                             " evaluated without a transition");
      }
      return a == *ctx;
    }
    case K::kNot:
      return !evaluate(f.child(), s, ctx, env);
    case K::kAnd:
      for (const Formula& c : f.children()) {
        if (!evaluate(c, s, ctx, env)) return false;
      }
      return true;
    case K::kOr:
      for (const Formula& c : f.children()) {
        if (evaluate(c, s, ctx, env)) return true;
      }
      return false;
    case K::kExists:
    case K::kForall: {
      const bool universal = f.kind() == K::kForall;
      for (Symbol c : s.constants()) {
        env.push(f.bound(), c);
        bool v = evaluate(f.child(), s, ctx, env);
        env.pop();
        if (universal && !v) return false;
        if (!universal && v) return true;
      }
      return universal;
    }
  }
  return false;
}

bool evaluate(const Formula& f, const RelState& s) {
  Bindings env;
  return evaluate(f, s, nullptr, env);
}

bool evaluate(const Formula& f, const RelState& s, const GroundAction& ctx) {
  Bindings env;
  return evaluate(f, s, &ctx, env);
}

namespace {

std::vector<Term> substitute_terms(const std::vector<Term>& terms,
                                   const Substitution& binding, bool& changed) {
  std::vector<Term> out = terms;
  for (Term& t : out) {
    if (!t.is_variable()) continue;
    auto it = binding.find(t.symbol());
    if (it != binding.end()) {
      t = Term::constant(it->second);
      changed = true;
    }
  }
  return out;
}

Formula substitute_rec(const Formula& f, const Substitution& binding) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
      return f;
    case K::kLiteral: {
      bool changed = false;
      auto terms = substitute_terms(f.literal().terms(), binding, changed);
      if (!changed) return f;
      return Formula::lit(Literal(f.literal().predicate(), std::move(terms)));
    }
    case K::kAction: {
      bool changed = false;
      auto terms = substitute_terms(f.action_terms(), binding, changed);
      if (!changed) return f;
      return Formula::action(f.action_name(), std::move(terms));
    }
    case K::kNot: {
      Formula c = substitute_rec(f.child(), binding);
      if (c == f.child()) return f;
      return Formula::negate(std::move(c));
    }
    case K::kAnd:
    case K::kOr: {
      std::vector<Formula> cs;
      cs.reserve(f.children().size());
      for (const Formula& c : f.children()) cs.push_back(substitute_rec(c, binding));
      return f.kind() == K::kAnd ? Formula::conj(std::move(cs))
                                 : Formula::disj(std::move(cs));
    }
    case K::kExists:
      return Formula::exists(f.bound(), substitute_rec(f.child(), binding));
    case K::kForall:
      return Formula::forall(f.bound(), substitute_rec(f.child(), binding));
  }
  return f;
}

void collect_free(const Formula& f, std::vector<Symbol>& bound,
                  std::set<Symbol>& out) {
  using K = Formula::Kind;
  auto visit_terms = [&](const std::vector<Term>& terms) {
    for (const Term& t : terms) {
      if (t.is_variable() &&
          std::find(bound.begin(), bound.end(), t.symbol()) == bound.end()) {
        out.insert(t.symbol());
      }
    }
  };
  switch (f.kind()) {
    case K::kTrue:
      return;
    case K::kLiteral:
      visit_terms(f.literal().terms());
      return;
    case K::kAction:
      visit_terms(f.action_terms());
      return;
    case K::kExists:
    case K::kForall:
      bound.push_back(f.bound());
      collect_free(f.child(), bound, out);
      bound.pop_back();
      return;
    default:
      for (const Formula& c : f.children()) collect_free(c, bound, out);
  }
}

}  // namespace

Formula substitute(const Formula& f, const Substitution& binding) {
  const auto& inner = f.bound_variables();
  for (const auto& [var, value] : binding) {
    if (std::binary_search(inner.begin(), inner.end(), var)) {
      throw MalformedBinding("variable ?" + var.name() +
                             " is bound by a quantifier inside the formula");
    }
  }
  if (binding.empty()) return f;
  return substitute_rec(f, binding);
}

std::set<Symbol> free_variables(const Formula& f) {
  std::vector<Symbol> bound;
  std::set<Symbol> out;
  collect_free(f, bound, out);
  return out;
}

}  // namespace introspect
