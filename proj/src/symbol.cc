#include "introspect/symbol.h"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace introspect {
namespace {

struct SymbolTable {
  std::shared_mutex mutex;
  std::deque<Symbol::Entry> entries;  // stable addresses
  std::unordered_map<std::string_view, const Symbol::Entry*> index;
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

const std::string& empty_name() {
  static const std::string kEmpty;
  return kEmpty;
}

}  // namespace

Symbol Symbol::intern(std::string_view name) {
  SymbolTable& t = table();
  {
    std::shared_lock lock(t.mutex);
    auto it = t.index.find(name);
    if (it != t.index.end()) return Symbol(it->second);
  }
  std::unique_lock lock(t.mutex);
  auto it = t.index.find(name);
  if (it != t.index.end()) return Symbol(it->second);
  auto id = static_cast<std::uint32_t>(t.entries.size() + 1);
  const Entry& e = t.entries.emplace_back(Entry{std::string(name), id});
  t.index.emplace(std::string_view(e.name), &e);
  return Symbol(&e);
}

const std::string& Symbol::name() const {
  return entry_ ? entry_->name : empty_name();
}

}  // namespace introspect
