#include "introspect/domain_io.h"

#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "introspect/formula_io.h"

namespace introspect {

// Generated at configure time from data/domains/*.dom.
extern const std::map<std::string_view, std::string_view>& embedded_domains();

namespace {

[[noreturn]] void fail(const SExpr& e, const std::string& msg) {
  throw ParseError("line " + std::to_string(e.line) + ": " + msg);
}

const SExpr& atom_at(const SExpr& e, std::size_t i, const char* what) {
  if (i >= e.items.size() || !e.items[i].is_atom()) fail(e, std::string("expected ") + what);
  return e.items[i];
}

double parse_number(const SExpr& e) {
  if (!e.is_atom()) fail(e, "expected a number");
  try {
    std::size_t used = 0;
    double v = std::stod(e.atom, &used);
    if (used != e.atom.size()) throw std::invalid_argument(e.atom);
    return v;
  } catch (const std::logic_error&) {
    fail(e, "expected a number, got '" + e.atom + "'");
  }
}

double parse_value(const SExpr& e, bool termination) {
  if (termination && e.is_atom()) {
    if (e.atom == "success") return 1;
    if (e.atom == "continue") return 0;
    if (e.atom == "failure") return -1;
  }
  return parse_number(e);
}

// (P ?X ?Y) inside add/del lists.
Literal literal_from(const SExpr& e) {
  if (!e.list || e.items.empty() || !e.items[0].is_atom()) fail(e, "expected a literal");
  std::vector<Term> terms;
  for (std::size_t i = 1; i < e.items.size(); ++i) terms.push_back(term_from_atom(e.items[i]));
  return Literal(Symbol::intern(e.items[0].atom), std::move(terms));
}

DecisionList decision_list_from(const SExpr& e, bool termination) {
  EvalOver over = EvalOver::kNextState;
  std::vector<Clause> clauses;
  bool closed = false;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& item = e.items[i];
    std::string_view h = item.head();
    if (closed) fail(item, "clauses after 'else'");
    if (h == "over") {
      const SExpr& which = atom_at(item, 1, "prior or next");
      if (which.atom == "prior") {
        over = EvalOver::kPriorState;
      } else if (which.atom == "next") {
        over = EvalOver::kNextState;
      } else {
        fail(item, "expected prior or next");
      }
    } else if (h == "when") {
      if (item.items.size() != 3) fail(item, "'when' takes a formula and a value");
      clauses.push_back({formula_from_sexpr(item.items[1]), parse_value(item.items[2], termination)});
    } else if (h == "else") {
      if (item.items.size() != 2) fail(item, "'else' takes a value");
      clauses.push_back({Formula::truth(), parse_value(item.items[1], termination)});
      closed = true;
    } else {
      fail(item, "unknown decision list entry");
    }
  }
  if (!closed) fail(e, "decision list must end with (else <value>)");
  return DecisionList(std::move(clauses), over);
}

ActionSchema schema_from(const SExpr& e) {
  ActionSchema a;
  a.name = Symbol::intern(atom_at(e, 1, "an action name").atom);
  if (e.items.size() < 3 || !e.items[2].list) fail(e, "expected a parameter list");
  for (const SExpr& p : e.items[2].items) {
    Term t = term_from_atom(p);
    if (!t.is_variable()) fail(p, "parameters must be variables");
    a.params.push_back(t.symbol());
  }
  for (std::size_t i = 3; i < e.items.size(); ++i) {
    const SExpr& part = e.items[i];
    std::string_view h = part.head();
    if (h == "pre") {
      if (part.items.size() != 2) fail(part, "'pre' takes one formula");
      a.precondition = formula_from_sexpr(part.items[1]);
    } else if (h == "add" || h == "del") {
      auto& out = h == "add" ? a.add : a.del;
      for (std::size_t j = 1; j < part.items.size(); ++j) out.push_back(literal_from(part.items[j]));
    } else {
      fail(part, "unknown action section");
    }
  }
  return a;
}

std::string value_string(double v, bool termination) {
  if (termination) {
    switch (to_termination(v)) {
      case Termination::kSuccess:
        return "success";
      case Termination::kContinue:
        return "continue";
      case Termination::kFailure:
        return "failure";
    }
  }
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string literal_string(const Literal& l) {
  std::string out = "(" + l.predicate().name();
  for (const Term& t : l.terms()) out += " " + to_string(t);
  return out + ")";
}

std::string decision_list_string(const char* head, const DecisionList& d, bool termination) {
  std::string out = std::string("  (") + head + " (over " + std::string(to_string(d.eval_over())) + ")";
  for (const Clause& c : d.clauses()) {
    if (c.guard.kind() == Formula::Kind::kTrue && &c == &d.clauses().back()) {
      out += "\n    (else " + value_string(c.value, termination) + ")";
    } else {
      out += "\n    (when " + to_string(c.guard) + " " + value_string(c.value, termination) + ")";
    }
  }
  return out + ")";
}

}  // namespace

std::shared_ptr<const DomainDef> parse_domain(std::string_view text) {
  SExpr e = read_sexpr(text);
  if (e.head() != "domain") fail(e, "expected (domain ...)");
  std::string name = atom_at(e, 1, "a domain name").atom;
  std::vector<PredicateDecl> predicates;
  std::vector<ActionSchema> schemas;
  std::optional<DecisionList> reward, termination;
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& item = e.items[i];
    std::string_view h = item.head();
    if (h == "predicates") {
      for (std::size_t j = 1; j < item.items.size(); ++j) {
        const SExpr& p = item.items[j];
        if (!p.list || p.items.size() != 2) fail(p, "expected (Name arity)");
        predicates.push_back({Symbol::intern(atom_at(p, 0, "a predicate name").atom),
                              static_cast<std::size_t>(parse_number(p.items[1]))});
      }
    } else if (h == "action") {
      schemas.push_back(schema_from(item));
    } else if (h == "reward") {
      reward = decision_list_from(item, false);
    } else if (h == "termination") {
      termination = decision_list_from(item, true);
    } else {
      fail(item, "unknown domain section");
    }
  }
  return std::make_shared<const DomainDef>(std::move(name), std::move(predicates),
                                           std::move(schemas), reward.value_or(DecisionList()),
                                           termination.value_or(DecisionList()));
}

std::string domain_to_string(const DomainDef& d) {
  std::string out = "(domain " + d.name() + "\n  (predicates";
  for (const PredicateDecl& p : d.predicates()) {
    out += " (" + p.name.name() + " " + std::to_string(p.arity) + ")";
  }
  out += ")";
  for (const ActionSchema& a : d.schemas()) {
    out += "\n  (action " + a.name.name() + " (";
    for (std::size_t i = 0; i < a.params.size(); ++i) {
      out += (i ? " ?" : "?") + a.params[i].name();
    }
    out += ")\n    (pre " + to_string(a.precondition) + ")\n    (add";
    for (const Literal& l : a.add) out += " " + literal_string(l);
    out += ")\n    (del";
    for (const Literal& l : a.del) out += " " + literal_string(l);
    out += "))";
  }
  out += "\n" + decision_list_string("reward", d.reward(), false);
  out += "\n" + decision_list_string("termination", d.termination(), true);
  return out + ")\n";
}

Problem parse_problem(std::string_view text) {
  SExpr e = read_sexpr(text);
  if (e.head() != "problem") fail(e, "expected (problem ...)");
  Problem p;
  p.name = atom_at(e, 1, "a problem name").atom;
  std::vector<Symbol> constants;
  std::vector<Atom> facts;
  for (std::size_t i = 2; i < e.items.size(); ++i) {
    const SExpr& item = e.items[i];
    std::string_view h = item.head();
    if (h == "domain") {
      p.domain = atom_at(item, 1, "a domain id").atom;
    } else if (h == "constants") {
      for (std::size_t j = 1; j < item.items.size(); ++j) {
        constants.push_back(Symbol::intern(atom_at(item, j, "a constant").atom));
      }
    } else if (h == "init") {
      for (std::size_t j = 1; j < item.items.size(); ++j) {
        Literal l = literal_from(item.items[j]);
        if (!l.ground()) fail(item.items[j], "initial facts must be ground");
        facts.push_back(l.to_atom());
      }
    } else {
      fail(item, "unknown problem section");
    }
  }
  try {
    p.state = RelState(std::move(constants), std::move(facts));
  } catch (const Error& err) {
    fail(e, err.what());
  }
  return p;
}

std::string problem_to_string(const Problem& p) {
  std::string out = "(problem " + p.name + "\n  (domain " + p.domain + ")\n  (constants";
  for (Symbol c : p.state.constants()) out += " " + c.name();
  out += ")\n  (init";
  for (const Atom& a : p.state.facts()) {
    out += "\n    (" + a.head().name();
    for (Symbol s : a.args()) out += " " + s.name();
    out += ")";
  }
  return out + "))\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string_view builtin_domain_text(std::string_view id) {
  const auto& m = embedded_domains();
  auto it = m.find(id);
  if (it == m.end()) throw Error("unknown built-in domain '" + std::string(id) + "'");
  return it->second;
}

std::shared_ptr<const DomainDef> builtin_domain(std::string_view id) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const DomainDef>, std::less<>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(id);
  if (it != cache.end()) return it->second;
  auto d = parse_domain(builtin_domain_text(id));
  cache.emplace(std::string(id), d);
  return d;
}

}  // namespace introspect
