#pragma once

#include <optional>
#include <string>
#include <vector>

#include "introspect/fol.h"
#include "introspect/reward.h"

namespace introspect {

struct PredicateDecl {
  Symbol name;
  std::size_t arity = 0;
};

// STRIPS-style schema with an arbitrary-formula precondition. Schemas are
// fully parameterized: no constants appear in pre/add/del.
struct ActionSchema {
  Symbol name;
  std::vector<Symbol> params;
  Formula precondition;
  std::vector<Literal> add;
  std::vector<Literal> del;
};

class DomainDef {
 public:
  // Validates declarations, arities and schema well-formedness; throws
  // Error on any violation.
  DomainDef(std::string name, std::vector<PredicateDecl> predicates,
            std::vector<ActionSchema> schemas, DecisionList reward,
            DecisionList termination);

  const std::string& name() const { return name_; }
  const std::vector<PredicateDecl>& predicates() const { return predicates_; }
  const std::vector<ActionSchema>& schemas() const { return schemas_; }
  const DecisionList& reward() const { return reward_; }
  const DecisionList& termination() const { return termination_; }

  // Index into schemas(), or nullopt.
  std::optional<std::size_t> schema_index(Symbol name) const;
  std::optional<std::size_t> arity_of(Symbol predicate) const;

  // Grounding support, precomputed from each schema.
  struct AtomTemplate {
    Symbol predicate;
    std::vector<std::size_t> param_positions;
  };
  struct Compiled {
    // Top-level conjuncts of the precondition grouped by the number of
    // parameters that must be bound before they can be checked: entry 0 is
    // parameter-free, entry k+1 holds conjuncts whose last parameter is k.
    std::vector<std::vector<Formula>> conjuncts_by_level;
    std::vector<AtomTemplate> add;
    std::vector<AtomTemplate> del;
  };
  const Compiled& compiled(std::size_t schema) const { return compiled_[schema]; }

 private:
  void validate_formula(const Formula& f, const std::string& where,
                        bool allow_actions) const;

  std::string name_;
  std::vector<PredicateDecl> predicates_;
  std::vector<ActionSchema> schemas_;
  DecisionList reward_;
  DecisionList termination_;
  std::vector<Compiled> compiled_;
};

bool is_applicable(const RelState& s, const GroundAction& a,
                   const DomainDef& domain);
// Throws PreconditionViolation when `a` is not applicable.
RelState apply(const RelState& s, const GroundAction& a,
               const DomainDef& domain);
// All applicable groundings in schema declaration order, then lexicographic
// arguments.
std::vector<GroundAction> applicable_actions(const RelState& s,
                                             const DomainDef& domain);
// applicable_actions paired with their successor states.
std::vector<std::pair<GroundAction, RelState>> expand(const RelState& s,
                                                      const DomainDef& domain);

}  // namespace introspect
