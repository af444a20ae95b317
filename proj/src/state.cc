#include "introspect/state.h"

#include <algorithm>

namespace introspect {
namespace {

const std::shared_ptr<const std::vector<Symbol>>& no_constants() {
  static const auto kEmpty = std::make_shared<const std::vector<Symbol>>();
  return kEmpty;
}

}  // namespace

RelState::RelState() : constants_(no_constants()) { rehash(); }

RelState::RelState(std::vector<Symbol> constants, std::vector<Atom> facts) {
  std::sort(constants.begin(), constants.end());
  constants.erase(std::unique(constants.begin(), constants.end()),
                  constants.end());
  constants_ = std::make_shared<const std::vector<Symbol>>(std::move(constants));
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
  for (const Atom& f : facts) {
    for (Symbol a : f.args()) {
      if (!has_constant(a)) {
        throw Error("fact " + f.str() + " uses unknown constant '" + a.name() +
                    "'");
      }
    }
  }
  facts_ = std::move(facts);
  rehash();
}

RelState::RelState(std::shared_ptr<const std::vector<Symbol>> constants,
                   std::vector<Atom> facts)
    : constants_(std::move(constants)), facts_(std::move(facts)) {
  rehash();
}

RelState RelState::with_facts(std::vector<Atom> sorted_facts) const {
  return RelState(constants_, std::move(sorted_facts));
}

bool RelState::holds(const Atom& atom) const {
  return std::binary_search(facts_.begin(), facts_.end(), atom);
}

bool RelState::has_constant(Symbol c) const {
  return std::binary_search(constants_->begin(), constants_->end(), c);
}

void RelState::rehash() {
  std::size_t h = constants_->size();
  for (Symbol c : *constants_) {
    h = h * 31 + std::hash<Symbol>{}(c);
  }
  for (const Atom& f : facts_) {
    h ^= f.hash() + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  }
  hash_ = h;
}

bool operator==(const RelState& a, const RelState& b) {
  if (a.hash_ != b.hash_) return false;
  if (a.constants_ != b.constants_ && *a.constants_ != *b.constants_) {
    return false;
  }
  return a.facts_ == b.facts_;
}

bool operator<(const RelState& a, const RelState& b) {
  if (a.constants_ != b.constants_ && *a.constants_ != *b.constants_) {
    return *a.constants_ < *b.constants_;
  }
  return a.facts_ < b.facts_;
}

std::string RelState::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < facts_.size(); ++i) {
    if (i) out += ", ";
    out += facts_[i].str();
  }
  out += "}";
  return out;
}

std::ostream& operator<<(std::ostream& os, const RelState& s) {
  return os << s.str();
}

}  // namespace introspect
