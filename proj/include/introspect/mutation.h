#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "introspect/relational.h"

namespace introspect {

// A set of ground literals to make true, a set to make false, and possibly
// the action that must be taken on the final transition. The distinguished
// IMMUTABLY_VALID value marks a formula that already holds and cannot be
// falsified.
struct Mutation {
  bool immutably_valid = false;
  std::vector<Atom> make_true;   // sorted, unique
  std::vector<Atom> make_false;  // sorted, unique
  std::optional<GroundAction> required_action;

  static Mutation valid() {
    Mutation m;
    m.immutably_valid = true;
    return m;
  }
  static Mutation require(GroundAction a) {
    Mutation m;
    m.required_action = a;
    return m;
  }
  static Mutation set_true(Atom a) {
    Mutation m;
    m.make_true.push_back(a);
    return m;
  }
  static Mutation set_false(Atom a) {
    Mutation m;
    m.make_false.push_back(a);
    return m;
  }

  // `+A(x) -B(y) @Act(z)` or `IMMUTABLY_VALID`.
  std::string str() const;

  friend bool operator==(const Mutation& a, const Mutation& b);
  friend bool operator!=(const Mutation& a, const Mutation& b) { return !(a == b); }
  // IMMUTABLY_VALID first, then by make_true, make_false, action (names).
  friend bool operator<(const Mutation& a, const Mutation& b);
};

// Sorted, duplicate-free.
using MutationSet = std::vector<Mutation>;

// Predicate-level mutability: a predicate can become true if it appears in
// some add list and false if it appears in some delete list.
class MutabilityIndex {
 public:
  explicit MutabilityIndex(const DomainDef& domain);
  bool can_become_true(Symbol predicate) const { return addable_.count(predicate) > 0; }
  bool can_become_false(Symbol predicate) const { return deletable_.count(predicate) > 0; }
  // Schema of the given name, or null.
  const ActionSchema* schema(Symbol name) const;

 private:
  std::unordered_set<Symbol> addable_;
  std::unordered_set<Symbol> deletable_;
  std::vector<ActionSchema> schemas_;
};

inline constexpr std::size_t kDefaultMutationCap = 10000;

// Throws MalformedFormula on free variables and MutationOverflow when any
// intermediate result exceeds `cap` mutations.
MutationSet mutate_true(const RelState& s, const Formula& f, const MutabilityIndex& idx,
                        std::size_t cap = kDefaultMutationCap);
MutationSet mutate_false(const RelState& s, const Formula& f, const MutabilityIndex& idx,
                         std::size_t cap = kDefaultMutationCap);

// Merge of all inputs; nullopt when they contradict (a literal required both
// true and false, or two different required actions).
std::optional<Mutation> satisfy_all(const std::vector<Mutation>& ms);
MutationSet satisfy_each(const std::vector<MutationSet>& sets,
                         std::size_t cap = kDefaultMutationCap);
MutationSet satisfy_any(const std::vector<MutationSet>& sets);

bool is_satisfied(const Mutation& m, const RelState& s,
                  const std::optional<GroundAction>& a = std::nullopt);

// facts ∪ make_true \ make_false. IMMUTABLY_VALID leaves s unchanged.
RelState apply_mutation(const RelState& s, const Mutation& m);

// One mutation per line, in set order.
std::string dump(const MutationSet& ms);

}  // namespace introspect
