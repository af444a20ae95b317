#pragma once

#include <string_view>
#include <vector>

#include "introspect/fol.h"

namespace introspect {

// Which state of a transition (s, a, s') binds the literals of a decision
// list. ActionAtoms always bind to a.
enum class EvalOver { kPriorState, kNextState };

enum class Termination : int { kFailure = -1, kContinue = 0, kSuccess = 1 };

std::string_view to_string(Termination t);
std::string_view to_string(EvalOver e);

struct Clause {
  Formula guard;
  double value = 0;
};

// First-match list of (guard, value). The final guard is always TrueConst so
// the list is total.
class DecisionList {
 public:
  // [(true, 0)] over the next state.
  DecisionList();
  DecisionList(std::vector<Clause> clauses, EvalOver over);

  const std::vector<Clause>& clauses() const { return clauses_; }
  EvalOver eval_over() const { return over_; }
  double max_value() const { return max_value_; }
  // Index of the earliest clause attaining max_value().
  std::size_t max_index() const { return max_index_; }

  const RelState& selected(const RelState& s, const RelState& s2) const {
    return over_ == EvalOver::kPriorState ? s : s2;
  }
  double evaluate(const RelState& s, const GroundAction& a,
                  const RelState& s2) const;

 private:
  std::vector<Clause> clauses_;
  EvalOver over_ = EvalOver::kNextState;
  double max_value_ = 0;
  std::size_t max_index_ = 0;
};

double evaluate_reward(const DecisionList& reward, const RelState& s,
                       const GroundAction& a, const RelState& s2);
// Throws Error when the matched value is not one of -1, 0, +1.
Termination evaluate_termination(const DecisionList& termination,
                                 const RelState& s, const GroundAction& a,
                                 const RelState& s2);
Termination to_termination(double value);

// not f1 and ... and not f_{i-1} and f_i for the first clause i attaining the
// maximum value; f_1 itself when i is the first clause.
Formula extract_maximal_reward_condition(const DecisionList& reward);

}  // namespace introspect
