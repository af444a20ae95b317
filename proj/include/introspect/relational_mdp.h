#pragma once

#include <memory>

#include "introspect/mdp.h"
#include "introspect/relational.h"

namespace introspect {

// A relational domain plus an initial state, viewed as an Mdp.
class RelationalMdp {
 public:
  using State = RelState;
  using Action = GroundAction;
  using Step = Transition<RelState, GroundAction>;

  RelationalMdp(std::shared_ptr<const DomainDef> domain, RelState s0)
      : domain_(std::move(domain)), s0_(std::move(s0)) {}

  const RelState& initial() const { return s0_; }
  const DomainDef& domain() const { return *domain_; }
  std::shared_ptr<const DomainDef> domain_ptr() const { return domain_; }

  std::vector<Step> successors(const RelState& s) const;
  std::optional<Step> step(const RelState& s, const GroundAction& a) const;
  double max_reward() const { return domain_->reward().max_value(); }

  // Reward and termination of an already computed transition.
  Step label(const RelState& s, GroundAction a, RelState next) const;

 private:
  std::shared_ptr<const DomainDef> domain_;
  RelState s0_;
};

}  // namespace introspect
