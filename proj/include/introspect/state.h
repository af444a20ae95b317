#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "introspect/atoms.h"

namespace introspect {

// A set of constants plus the ground literals true over them. Both are kept
// sorted by name, so equal states have identical representations.
class RelState {
 public:
  RelState();
  // Validates that every fact is over the given constants; duplicates are
  // collapsed.
  RelState(std::vector<Symbol> constants, std::vector<Atom> facts);

  const std::vector<Symbol>& constants() const { return *constants_; }
  const std::vector<Atom>& facts() const { return facts_; }
  bool holds(const Atom& atom) const;
  bool has_constant(Symbol c) const;
  std::size_t hash() const { return hash_; }

  // Same constants, new fact set. `sorted_facts` must already be sorted and
  // unique and range over this state's constants.
  RelState with_facts(std::vector<Atom> sorted_facts) const;

  // Deterministic total order (constants, then facts, by name).
  friend bool operator<(const RelState& a, const RelState& b);
  friend bool operator==(const RelState& a, const RelState& b);
  friend bool operator!=(const RelState& a, const RelState& b) {
    return !(a == b);
  }

  std::string str() const;

 private:
  RelState(std::shared_ptr<const std::vector<Symbol>> constants,
           std::vector<Atom> facts);
  void rehash();

  std::shared_ptr<const std::vector<Symbol>> constants_;
  std::vector<Atom> facts_;
  std::size_t hash_ = 0;
};

std::ostream& operator<<(std::ostream& os, const RelState& s);

}  // namespace introspect

template <>
struct std::hash<introspect::RelState> {
  std::size_t operator()(const introspect::RelState& s) const noexcept {
    return s.hash();
  }
};
