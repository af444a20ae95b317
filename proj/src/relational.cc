#include "introspect/relational.h"

#include <algorithm>
#include <iterator>
#include <set>

#include "introspect/formula_io.h"

namespace introspect {
namespace {

void flatten_and(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::kAnd) {
    for (const Formula& c : f.children()) flatten_and(c, out);
  } else if (f.kind() != Formula::Kind::kTrue) {
    out.push_back(f);
  }
}

std::size_t param_index(const std::vector<Symbol>& params, Symbol var) {
  return static_cast<std::size_t>(
      std::find(params.begin(), params.end(), var) - params.begin());
}

}  // namespace

DomainDef::DomainDef(std::string name, std::vector<PredicateDecl> predicates,
                     std::vector<ActionSchema> schemas, DecisionList reward,
                     DecisionList termination)
    : name_(std::move(name)),
      predicates_(std::move(predicates)),
      schemas_(std::move(schemas)),
      reward_(std::move(reward)),
      termination_(std::move(termination)) {
  for (std::size_t i = 0; i < predicates_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (predicates_[i].name == predicates_[j].name) {
        throw Error("predicate '" + predicates_[i].name.name() +
                    "' declared twice");
      }
    }
    if (predicates_[i].arity > kMaxArity) {
      throw Error("predicate '" + predicates_[i].name.name() +
                  "' exceeds maximum arity");
    }
  }

  for (std::size_t i = 0; i < schemas_.size(); ++i) {
    const ActionSchema& a = schemas_[i];
    const std::string where = "action " + a.name.name();
    for (std::size_t j = 0; j < i; ++j) {
      if (schemas_[j].name == a.name) throw Error(where + " declared twice");
    }
    if (a.params.size() > kMaxArity) throw Error(where + " has too many parameters");
    std::set<Symbol> params(a.params.begin(), a.params.end());
    if (params.size() != a.params.size()) throw Error(where + " repeats a parameter");

    validate_formula(a.precondition, where + " precondition", false);
    for (Symbol v : free_variables(a.precondition)) {
      if (!params.count(v)) {
        throw MalformedFormula(where + " precondition uses unbound ?" + v.name());
      }
    }

    Compiled c;
    c.conjuncts_by_level.resize(a.params.size() + 1);
    std::vector<Formula> conjuncts;
    flatten_and(a.precondition, conjuncts);
    for (const Formula& conj : conjuncts) {
      std::size_t level = 0;
      for (Symbol v : free_variables(conj)) {
        level = std::max(level, param_index(a.params, v) + 1);
      }
      c.conjuncts_by_level[level].push_back(conj);
    }

    auto compile_effects = [&](const std::vector<Literal>& lits,
                               std::vector<AtomTemplate>& out, const char* kind) {
      for (const Literal& l : lits) {
        validate_formula(Formula::lit(l), where + " " + kind, false);
        AtomTemplate t{l.predicate(), {}};
        for (const Term& term : l.terms()) {
          if (!term.is_variable()) {
            throw Error(where + " " + kind + " uses constant '" +
                        term.symbol().name() + "'; schemas must be fully parameterized");
          }
          if (!params.count(term.symbol())) {
            throw Error(where + " " + kind + " uses unbound ?" + term.symbol().name());
          }
          t.param_positions.push_back(param_index(a.params, term.symbol()));
        }
        out.push_back(std::move(t));
      }
    };
    compile_effects(a.add, c.add, "add");
    compile_effects(a.del, c.del, "del");
    for (const Literal& x : a.add) {
      for (const Literal& y : a.del) {
        if (x == y) {
          throw Error(where + " both adds and deletes " + to_string(Formula::lit(x)));
        }
      }
    }
    compiled_.push_back(std::move(c));
  }

  for (std::size_t i = 0; i < reward_.clauses().size(); ++i) {
    validate_formula(reward_.clauses()[i].guard, "reward clause " + std::to_string(i + 1), true);
  }
  for (std::size_t i = 0; i < termination_.clauses().size(); ++i) {
    validate_formula(termination_.clauses()[i].guard,
                     "termination clause " + std::to_string(i + 1), true);
    to_termination(termination_.clauses()[i].value);
  }
}

void DomainDef::validate_formula(const Formula& f, const std::string& where,
                                 bool allow_actions) const {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::kTrue:
      return;
    case K::kLiteral: {
      const Literal& l = f.literal();
      auto arity = arity_of(l.predicate());
      if (!arity) {
        throw Error(where + ": undeclared predicate '" + l.predicate().name() + "'");
      }
      if (*arity != l.arity()) {
        throw Error(where + ": '" + l.predicate().name() + "' expects " +
                    std::to_string(*arity) + " terms, got " + std::to_string(l.arity()));
      }
      for (const Term& t : l.terms()) {
        if (t.is_constant() && !allow_actions) {
          throw Error(where + " uses constant '" + t.symbol().name() +
                      "'; schemas must be fully parameterized");
        }
      }
      return;
    }
    case K::kAction: {
      if (!allow_actions) throw Error(where + ": action atoms are not allowed here");
      auto idx = schema_index(f.action_name());
      if (!idx) {
        throw Error(where + ": unknown action '" + f.action_name().name() + "'");
      }
      if (schemas_[*idx].params.size() != f.action_terms().size()) {
        throw Error(where + ": wrong argument count for '" + f.action_name().name() + "'");
      }
      return;
    }
    case K::kNot:
    case K::kExists:
    case K::kForall:
      validate_formula(f.child(), where, allow_actions);
      return;
    case K::kAnd:
    case K::kOr:
      for (const Formula& c : f.children()) validate_formula(c, where, allow_actions);
      return;
  }
}

std::optional<std::size_t> DomainDef::schema_index(Symbol name) const {
  for (std::size_t i = 0; i < schemas_.size(); ++i) {
    if (schemas_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> DomainDef::arity_of(Symbol predicate) const {
  for (const PredicateDecl& p : predicates_) {
    if (p.name == predicate) return p.arity;
  }
  return std::nullopt;
}

namespace {

Atom instantiate(const DomainDef::AtomTemplate& t, std::span<const Symbol> args) {
  std::array<Symbol, kMaxArity> out{};
  for (std::size_t i = 0; i < t.param_positions.size(); ++i) {
    out[i] = args[t.param_positions[i]];
  }
  return Atom(t.predicate, std::span<const Symbol>(out.data(), t.param_positions.size()));
}

std::size_t checked_schema(const GroundAction& a, const DomainDef& domain) {
  auto idx = domain.schema_index(a.head());
  if (!idx) throw MalformedAction("unknown action '" + a.head().name() + "'");
  if (domain.schemas()[*idx].params.size() != a.arity()) {
    throw MalformedAction("action " + a.str() + " has wrong arity");
  }
  return *idx;
}

bool precondition_holds(const RelState& s, const GroundAction& a,
                        const DomainDef& domain, std::size_t idx) {
  const ActionSchema& schema = domain.schemas()[idx];
  for (Symbol c : a.args()) {
    if (!s.has_constant(c)) {
      throw MalformedAction("action " + a.str() + " uses unknown constant '" +
                            c.name() + "'");
    }
  }
  Bindings env;
  for (std::size_t i = 0; i < schema.params.size(); ++i) env.push(schema.params[i], a.arg(i));
  return evaluate(schema.precondition, s, nullptr, env);
}

RelState apply_unchecked(const RelState& s, const GroundAction& a,
                         const DomainDef::Compiled& c) {
  std::vector<Atom> del;
  del.reserve(c.del.size());
  for (const auto& t : c.del) del.push_back(instantiate(t, a.args()));
  std::vector<Atom> add;
  add.reserve(c.add.size());
  for (const auto& t : c.add) add.push_back(instantiate(t, a.args()));
  std::sort(del.begin(), del.end());
  std::sort(add.begin(), add.end());
  add.erase(std::unique(add.begin(), add.end()), add.end());

  std::vector<Atom> kept;
  kept.reserve(s.facts().size());
  std::set_difference(s.facts().begin(), s.facts().end(), del.begin(), del.end(),
                      std::back_inserter(kept));
  std::vector<Atom> out;
  out.reserve(kept.size() + add.size());
  std::set_union(kept.begin(), kept.end(), add.begin(), add.end(),
                 std::back_inserter(out));
  return s.with_facts(std::move(out));
}

void ground_rec(const RelState& s, const DomainDef& domain, std::size_t schema_idx,
                std::size_t depth, Bindings& env, std::array<Symbol, kMaxArity>& args,
                std::vector<GroundAction>& out) {
  const ActionSchema& schema = domain.schemas()[schema_idx];
  const auto& levels = domain.compiled(schema_idx).conjuncts_by_level;
  if (depth == schema.params.size()) {
    out.emplace_back(schema.name, std::span<const Symbol>(args.data(), depth));
    return;
  }
  for (Symbol c : s.constants()) {
    env.push(schema.params[depth], c);
    args[depth] = c;
    bool ok = true;
    for (const Formula& conj : levels[depth + 1]) {
      if (!evaluate(conj, s, nullptr, env)) {
        ok = false;
        break;
      }
    }
    if (ok) ground_rec(s, domain, schema_idx, depth + 1, env, args, out);
    env.pop();
  }
}

}  // namespace

bool is_applicable(const RelState& s, const GroundAction& a,
                   const DomainDef& domain) {
  return precondition_holds(s, a, domain, checked_schema(a, domain));
}

RelState apply(const RelState& s, const GroundAction& a, const DomainDef& domain) {
  std::size_t idx = checked_schema(a, domain);
  if (!precondition_holds(s, a, domain, idx)) {
    throw PreconditionViolation("action " + a.str() + " is not applicable");
  }
  return apply_unchecked(s, a, domain.compiled(idx));
}

std::vector<GroundAction> applicable_actions(const RelState& s,
                                             const DomainDef& domain) {
  std::vector<GroundAction> out;
  Bindings env;
  std::array<Symbol, kMaxArity> args{};
  for (std::size_t i = 0; i < domain.schemas().size(); ++i) {
    bool ok = true;
    for (const Formula& conj : domain.compiled(i).conjuncts_by_level[0]) {
      if (!evaluate(conj, s, nullptr, env)) {
        ok = false;
        break;
      }
    }
    if (ok) ground_rec(s, domain, i, 0, env, args, out);
  }
  return out;
}

std::vector<std::pair<GroundAction, RelState>> expand(const RelState& s,
                                                      const DomainDef& domain) {
  std::vector<std::pair<GroundAction, RelState>> out;
  for (GroundAction& a : applicable_actions(s, domain)) {
    std::size_t idx = *domain.schema_index(a.head());
    RelState next = apply_unchecked(s, a, domain.compiled(idx));
    out.emplace_back(std::move(a), std::move(next));
  }
  return out;
}

}  // namespace introspect
