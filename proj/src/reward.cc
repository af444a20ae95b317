#include "introspect/reward.h"

#include <string>

namespace introspect {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kFailure:
      return "FAILURE";
    case Termination::kContinue:
      return "CONTINUE";
    case Termination::kSuccess:
      return "SUCCESS";
  }
  return "?";
}

std::string_view to_string(EvalOver e) {
  return e == EvalOver::kPriorState ? "prior" : "next";
}

DecisionList::DecisionList() : clauses_{Clause{Formula::truth(), 0.0}} {}

DecisionList::DecisionList(std::vector<Clause> clauses, EvalOver over)
    : clauses_(std::move(clauses)), over_(over) {
  if (clauses_.empty()) throw Error("decision list has no clauses");
  if (clauses_.back().guard.kind() != Formula::Kind::kTrue) {
    throw Error("decision list must end with an unconditional clause");
  }
  for (std::size_t i = 0; i < clauses_.size(); ++i) {
    if (!free_variables(clauses_[i].guard).empty()) {
      throw MalformedFormula("decision list guard " + std::to_string(i + 1) +
                             " has free variables");
    }
    if (i == 0 || clauses_[i].value > max_value_) {
      max_value_ = clauses_[i].value;
      max_index_ = i;
    }
  }
}

double DecisionList::evaluate(const RelState& s, const GroundAction& a,
                              const RelState& s2) const {
  const RelState& over = selected(s, s2);
  for (const Clause& c : clauses_) {
    if (introspect::evaluate(c.guard, over, a)) return c.value;
  }
  return clauses_.back().value;  // unreachable: last guard is true
}

double evaluate_reward(const DecisionList& reward, const RelState& s,
                       const GroundAction& a, const RelState& s2) {
  return reward.evaluate(s, a, s2);
}

Termination to_termination(double value) {
  if (value == -1) return Termination::kFailure;
  if (value == 0) return Termination::kContinue;
  if (value == 1) return Termination::kSuccess;
  throw Error("termination value " + std::to_string(value) +
              " is not one of -1, 0, +1");
}

Termination evaluate_termination(const DecisionList& termination,
                                 const RelState& s, const GroundAction& a,
                                 const RelState& s2) {
  return to_termination(termination.evaluate(s, a, s2));
}

Formula extract_maximal_reward_condition(const DecisionList& reward) {
  const auto& clauses = reward.clauses();
  const std::size_t i = reward.max_index();
  if (i == 0) return clauses[0].guard;
  std::vector<Formula> parts;
  parts.reserve(i + 1);
  for (std::size_t j = 0; j < i; ++j) parts.push_back(Formula::negate(clauses[j].guard));
  parts.push_back(clauses[i].guard);
  return Formula::conj(std::move(parts));
}

}  // namespace introspect
