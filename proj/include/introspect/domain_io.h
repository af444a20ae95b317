#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "introspect/relational.h"

namespace introspect {

// Domain file layout:
//   (domain NAME
//     (predicates (P 1) (Q 2) ...)
//     (action A (?X ?Y) (pre <formula>) (add (P ?X) ...) (del (Q ?X ?Y) ...))
//     (reward (over prior|next) (when <formula> <value>) ... (else <value>))
//     (termination (over next) (when <formula> success) ... (else continue)))
// Termination values may be written as failure/continue/success or -1/0/1.
std::shared_ptr<const DomainDef> parse_domain(std::string_view text);
std::string domain_to_string(const DomainDef& d);

// Problem (initial state) layout:
//   (problem NAME (domain ID) (constants c1 c2 ...) (init (P c1) ...))
struct Problem {
  std::string name;
  std::string domain;
  RelState state;
};
Problem parse_problem(std::string_view text);
std::string problem_to_string(const Problem& p);

std::string read_file(const std::string& path);

// Built-in domain files, compiled into the library: "blocks_world", "bins",
// "drawers".
std::string_view builtin_domain_text(std::string_view id);
std::shared_ptr<const DomainDef> builtin_domain(std::string_view id);

}  // namespace introspect
