#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace introspect {

// Interned identifier. Equality and hashing are by identity; ordering is by
// name so that anything sorted on symbols is reproducible across runs.
class Symbol {
 public:
  struct Entry {
    std::string name;
    std::uint32_t id;
  };

  Symbol() = default;

  static Symbol intern(std::string_view name);

  bool valid() const { return entry_ != nullptr; }
  const std::string& name() const;
  std::uint32_t id() const { return entry_ ? entry_->id : 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.entry_ == b.entry_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.entry_ != b.entry_; }
  friend bool operator<(Symbol a, Symbol b) {
    if (a.entry_ == b.entry_) return false;
    return a.name() < b.name();
  }

 private:
  explicit Symbol(const Entry* e) : entry_(e) {}
  const Entry* entry_ = nullptr;
};

inline std::ostream& operator<<(std::ostream& os, Symbol s) {
  return os << s.name();
}

}  // namespace introspect

template <>
struct std::hash<introspect::Symbol> {
  std::size_t operator()(introspect::Symbol s) const noexcept {
    return std::hash<std::uint32_t>{}(s.id());
  }
};
