#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>

#include "introspect/errors.h"
#include "introspect/symbol.h"

namespace introspect {

inline constexpr std::size_t kMaxArity = 4;

// A head symbol applied to constant arguments, stored inline. Used for both
// ground literals and ground actions; the tag keeps the two apart.
template <class Tag>
class Compound {
 public:
  Compound() = default;
  Compound(Symbol head, std::span<const Symbol> args) : head_(head) {
    if (args.size() > kMaxArity) {
      throw Error("'" + head.name() + "' has " + std::to_string(args.size()) +
                  " arguments; at most " + std::to_string(kMaxArity) +
                  " are supported");
    }
    arity_ = static_cast<std::uint8_t>(args.size());
    std::copy(args.begin(), args.end(), args_.begin());
  }
  Compound(Symbol head, std::initializer_list<Symbol> args)
      : Compound(head, std::span<const Symbol>(args.begin(), args.size())) {}

  Symbol head() const { return head_; }
  std::size_t arity() const { return arity_; }
  std::span<const Symbol> args() const { return {args_.data(), arity_}; }
  Symbol arg(std::size_t i) const { return args_[i]; }

  std::string str() const {
    std::string out = head_.name();
    out += '(';
    for (std::size_t i = 0; i < arity_; ++i) {
      if (i) out += ',';
      out += args_[i].name();
    }
    out += ')';
    return out;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<Symbol>{}(head_) * 0x9E3779B97F4A7C15ull;
    for (std::size_t i = 0; i < arity_; ++i) {
      h ^= std::hash<Symbol>{}(args_[i]) + 0x9E3779B97F4A7C15ull + (h << 6) +
           (h >> 2);
    }
    return h;
  }

  friend bool operator==(const Compound& a, const Compound& b) {
    if (a.head_ != b.head_ || a.arity_ != b.arity_) return false;
    for (std::size_t i = 0; i < a.arity_; ++i) {
      if (a.args_[i] != b.args_[i]) return false;
    }
    return true;
  }
  friend bool operator!=(const Compound& a, const Compound& b) {
    return !(a == b);
  }
  // Lexicographic on names: head, then arguments.
  friend bool operator<(const Compound& a, const Compound& b) {
    if (a.head_ != b.head_) return a.head_ < b.head_;
    std::size_t n = std::min(a.arity_, b.arity_);
    for (std::size_t i = 0; i < n; ++i) {
      if (a.args_[i] != b.args_[i]) return a.args_[i] < b.args_[i];
    }
    return a.arity_ < b.arity_;
  }

 private:
  Symbol head_;
  std::uint8_t arity_ = 0;
  std::array<Symbol, kMaxArity> args_{};
};

struct AtomTag {};
struct ActionTag {};

// Ground literal, e.g. On(a,d).
using Atom = Compound<AtomTag>;
// Ground action, e.g. Unstack(a,d). Equality is (schema name, args).
using GroundAction = Compound<ActionTag>;

template <class Tag>
std::ostream& operator<<(std::ostream& os, const Compound<Tag>& c) {
  return os << c.str();
}

}  // namespace introspect

template <class Tag>
struct std::hash<introspect::Compound<Tag>> {
  std::size_t operator()(const introspect::Compound<Tag>& c) const noexcept {
    return c.hash();
  }
};
