#include "introspect/mutation.h"

#include <algorithm>
#include <iterator>

namespace introspect {
namespace {

void normalize(MutationSet& ms) {
  std::sort(ms.begin(), ms.end());
  ms.erase(std::unique(ms.begin(), ms.end()), ms.end());
}

std::vector<Atom> sorted_union(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  std::vector<Atom> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool intersects(const std::vector<Atom>& a, const std::vector<Atom>& b) {
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      return true;
    }
  }
  return false;
}

std::optional<Mutation> merge(const Mutation& a, const Mutation& b) {
  if (a.immutably_valid) return b;
  if (b.immutably_valid) return a;
  Mutation m;
  if (a.required_action && b.required_action && *a.required_action != *b.required_action) {
    return std::nullopt;
  }
  m.required_action = a.required_action ? a.required_action : b.required_action;
  m.make_true = sorted_union(a.make_true, b.make_true);
  m.make_false = sorted_union(a.make_false, b.make_false);
  if (intersects(m.make_true, m.make_false)) return std::nullopt;
  return m;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw MutationOverflow("mutation set grew beyond " + std::to_string(cap) + " entries");
  }
}

class Mutator {
 public:
  Mutator(const RelState& s, const MutabilityIndex& idx, std::size_t cap)
      : s_(s), idx_(idx), cap_(cap) {}

  MutationSet run(const Formula& f, bool want_true) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::kTrue:
        if (want_true) return {Mutation::valid()};
        return {};
      case K::kLiteral: {
        Atom a = ground_literal(f.literal(), env_);
        Symbol p = a.head();
        if (want_true) {
          if (idx_.can_become_true(p)) return {Mutation::set_true(a)};
          if (s_.holds(a)) return {Mutation::valid()};
          return {};
        }
        if (idx_.can_become_false(p)) return {Mutation::set_false(a)};
        if (!s_.holds(a)) return {Mutation::valid()};
        return {};
      }
      case K::kAction: {
        // A negated action atom never blocks a mutation; the transition
        // check in the inner search rejects the forbidden action instead.
        if (!want_true) return {Mutation::valid()};
        GroundAction a = ground_action_atom(f, env_);
        if (!may_become_applicable(a)) return {};
        return {Mutation::require(a)};
      }
      case K::kNot:
        return run(f.child(), !want_true);
      case K::kAnd:
      case K::kOr: {
        std::vector<MutationSet> parts;
        parts.reserve(f.children().size());
        for (const Formula& c : f.children()) parts.push_back(run(c, want_true));
        const bool each = (f.kind() == K::kAnd) == want_true;
        return each ? satisfy_each(parts, cap_) : satisfy_any_capped(parts);
      }
      case K::kExists:
      case K::kForall: {
        std::vector<MutationSet> parts;
        parts.reserve(s_.constants().size());
        for (Symbol c : s_.constants()) {
          env_.push(f.bound(), c);
          parts.push_back(run(f.child(), want_true));
          env_.pop();
        }
        const bool each = (f.kind() == K::kForall) == want_true;
        return each ? satisfy_each(parts, cap_) : satisfy_any_capped(parts);
      }
    }
    return {};
  }

 private:
  // False when the action's precondition has no mutation at all, i.e. the
  // action can never fire from any state reachable from s.
  bool may_become_applicable(const GroundAction& a) {
    const ActionSchema* schema = idx_.schema(a.head());
    if (schema == nullptr || schema->params.size() != a.args().size()) return true;
    Mutator inner(s_, idx_, cap_);
    for (std::size_t i = 0; i < schema->params.size(); ++i) inner.env_.push(schema->params[i], a.args()[i]);
    return !inner.run(schema->precondition, true).empty();
  }

  MutationSet satisfy_any_capped(const std::vector<MutationSet>& parts) {
    MutationSet out = satisfy_any(parts);
    check_cap(out.size(), cap_);
    return out;
  }

  const RelState& s_;
  const MutabilityIndex& idx_;
  std::size_t cap_;
  Bindings env_;
};

void append_atoms(std::string& out, char sign, const std::vector<Atom>& atoms) {
  for (const Atom& a : atoms) {
    if (!out.empty()) out += ' ';
    out += sign;
    out += a.str();
  }
}

}  // namespace

std::string Mutation::str() const {
  if (immutably_valid) return "IMMUTABLY_VALID";
  std::string out;
  append_atoms(out, '+', make_true);
  append_atoms(out, '-', make_false);
  if (required_action) {
    if (!out.empty()) out += ' ';
    out += '@' + required_action->str();
  }
  return out;
}

bool operator==(const Mutation& a, const Mutation& b) {
  return a.immutably_valid == b.immutably_valid && a.make_true == b.make_true &&
         a.make_false == b.make_false && a.required_action == b.required_action;
}

bool operator<(const Mutation& a, const Mutation& b) {
  if (a.immutably_valid != b.immutably_valid) return a.immutably_valid;
  if (a.make_true != b.make_true) return a.make_true < b.make_true;
  if (a.make_false != b.make_false) return a.make_false < b.make_false;
  if (a.required_action.has_value() != b.required_action.has_value()) {
    return !a.required_action.has_value();
  }
  return a.required_action && *a.required_action < *b.required_action;
}

MutabilityIndex::MutabilityIndex(const DomainDef& domain) {
  for (const ActionSchema& a : domain.schemas()) {
    for (const Literal& l : a.add) addable_.insert(l.predicate());
    for (const Literal& l : a.del) deletable_.insert(l.predicate());
  }
  schemas_ = domain.schemas();
}

const ActionSchema* MutabilityIndex::schema(Symbol name) const {
  for (const ActionSchema& a : schemas_) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::optional<Mutation> satisfy_all(const std::vector<Mutation>& ms) {
  Mutation acc = Mutation::valid();
  for (const Mutation& m : ms) {
    auto merged = merge(acc, m);
    if (!merged) return std::nullopt;
    acc = std::move(*merged);
  }
  return acc;
}

MutationSet satisfy_each(const std::vector<MutationSet>& sets, std::size_t cap) {
  // Pairwise folding is equivalent to merging each full choice at once:
  // merging is associative and a contradiction never disappears.
  MutationSet acc{Mutation::valid()};
  for (const MutationSet& set : sets) {
    if (set.empty()) return {};
    MutationSet next;
    for (const Mutation& a : acc) {
      for (const Mutation& b : set) {
        if (auto m = merge(a, b)) next.push_back(std::move(*m));
      }
      check_cap(next.size(), cap * 4);
    }
    normalize(next);
    check_cap(next.size(), cap);
    if (next.empty()) return {};
    acc = std::move(next);
  }
  return acc;
}

MutationSet satisfy_any(const std::vector<MutationSet>& sets) {
  MutationSet out;
  for (const MutationSet& set : sets) {
    for (const Mutation& m : set) {
      if (m.immutably_valid) return {Mutation::valid()};
      out.push_back(m);
    }
  }
  normalize(out);
  return out;
}

MutationSet mutate_true(const RelState& s, const Formula& f, const MutabilityIndex& idx,
                        std::size_t cap) {
  return Mutator(s, idx, cap).run(f, true);
}

MutationSet mutate_false(const RelState& s, const Formula& f, const MutabilityIndex& idx,
                         std::size_t cap) {
  return Mutator(s, idx, cap).run(f, false);
}

bool is_satisfied(const Mutation& m, const RelState& s, const std::optional<GroundAction>& a) {
  if (m.immutably_valid) return true;
  for (const Atom& x : m.make_true) {
    if (!s.holds(x)) return false;
  }
  for (const Atom& x : m.make_false) {
    if (s.holds(x)) return false;
  }
  return !m.required_action || (a && *a == *m.required_action);
}

RelState apply_mutation(const RelState& s, const Mutation& m) {
  if (m.immutably_valid) return s;
  std::vector<Atom> kept;
  std::set_difference(s.facts().begin(), s.facts().end(), m.make_false.begin(),
                      m.make_false.end(), std::back_inserter(kept));
  std::vector<Atom> out = sorted_union(kept, m.make_true);
  for (const Atom& x : m.make_true) {
    for (Symbol c : x.args()) {
      if (!s.has_constant(c)) throw Error("mutation uses unknown constant " + c.name());
    }
  }
  return s.with_facts(std::move(out));
}

std::string dump(const MutationSet& ms) {
  std::string out;
  for (const Mutation& m : ms) out += m.str() + "\n";
  return out;
}

}  // namespace introspect
