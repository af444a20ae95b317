#include "introspect/relational_mdp.h"

namespace introspect {

RelationalMdp::Step RelationalMdp::label(const RelState& s, GroundAction a,
                                         RelState next) const {
  Step t{std::move(a), std::move(next), 0, Termination::kContinue};
  t.reward = evaluate_reward(domain_->reward(), s, t.action, t.next);
  t.status = evaluate_termination(domain_->termination(), s, t.action, t.next);
  return t;
}

std::vector<RelationalMdp::Step> RelationalMdp::successors(const RelState& s) const {
  std::vector<Step> out;
  for (auto& [a, next] : expand(s, *domain_)) out.push_back(label(s, std::move(a), std::move(next)));
  return out;
}

std::optional<RelationalMdp::Step> RelationalMdp::step(const RelState& s,
                                                       const GroundAction& a) const {
  try {
    if (!is_applicable(s, a, *domain_)) return std::nullopt;
  } catch (const MalformedAction&) {
    return std::nullopt;
  }
  return label(s, a, apply(s, a, *domain_));
}

}  // namespace introspect
