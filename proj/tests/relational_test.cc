#include <algorithm>
#include <random>

#include "doctest.h"
#include "introspect/domain_io.h"
#include "introspect/formula_io.h"

using namespace introspect;

namespace {

Symbol sym(const char* s) { return Symbol::intern(s); }

GroundAction act(const char* name, std::initializer_list<const char*> args) {
  std::vector<Symbol> xs;
  for (const char* a : args) xs.push_back(sym(a));
  return GroundAction(sym(name), std::span<const Symbol>(xs));
}

Atom atom(const char* name, std::initializer_list<const char*> args) {
  std::vector<Symbol> xs;
  for (const char* a : args) xs.push_back(sym(a));
  return Atom(sym(name), std::span<const Symbol>(xs));
}

RelState fixture(const char* file) {
  return parse_problem(read_file(std::string(INTROSPECT_DATA_DIR "/fixtures/") + file)).state;
}

std::vector<std::string> names(const std::vector<GroundAction>& as) {
  std::vector<std::string> out;
  for (const auto& a : as) out.push_back(a.str());
  return out;
}

// Reference grounding: full Cartesian product filtered by is_applicable.
std::vector<GroundAction> brute_force_ground(const RelState& s, const DomainDef& d) {
  std::vector<GroundAction> out;
  for (const ActionSchema& schema : d.schemas()) {
    std::size_t k = schema.params.size();
    std::size_t n = s.constants().size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) combos *= n;
    if (k > 0 && n == 0) combos = 0;
    std::vector<GroundAction> mine;
    for (std::size_t c = 0; c < combos; ++c) {
      std::vector<Symbol> args(k);
      std::size_t rest = c;
      for (std::size_t i = k; i-- > 0;) {
        args[i] = s.constants()[rest % n];
        rest /= n;
      }
      GroundAction a(schema.name, std::span<const Symbol>(args));
      if (is_applicable(s, a, d)) mine.push_back(a);
    }
    out.insert(out.end(), mine.begin(), mine.end());
  }
  return out;
}

}  // namespace

TEST_CASE("built-in domains load") {
  for (const char* id : {"blocks_world", "bins", "drawers"}) {
    auto d = builtin_domain(id);
    CHECK(d->name() == id);
    // Printing and re-reading yields the same schemas and decision lists.
    auto again = parse_domain(domain_to_string(*d));
    REQUIRE(again->schemas().size() == d->schemas().size());
    for (std::size_t i = 0; i < d->schemas().size(); ++i) {
      CHECK(again->schemas()[i].precondition == d->schemas()[i].precondition);
      CHECK(again->schemas()[i].add == d->schemas()[i].add);
      CHECK(again->schemas()[i].del == d->schemas()[i].del);
    }
    REQUIRE(again->reward().clauses().size() == d->reward().clauses().size());
    CHECK(again->reward().eval_over() == d->reward().eval_over());
    CHECK(again->reward().clauses()[0].guard == d->reward().clauses()[0].guard);
    CHECK(again->termination().clauses()[0].value == d->termination().clauses()[0].value);
  }
  CHECK_THROWS(builtin_domain("mazes"));
  CHECK(builtin_domain("bins")->reward().eval_over() == EvalOver::kPriorState);
}

TEST_CASE("domain validation") {
  const char* ok_head = "(domain t (predicates (P 1) (Q 2))";
  auto load = [&](const std::string& body) { return parse_domain(std::string(ok_head) + body + ")"); };
  CHECK_NOTHROW(load("(action A (?X) (pre (lit P ?X)) (add (Q ?X ?X)) (del (P ?X)))"));
  CHECK_THROWS(load("(action A (?X) (pre (lit P ?X ?X)) (add) (del))"));       // arity
  CHECK_THROWS(load("(action A (?X) (pre (lit R ?X)) (add) (del))"));          // undeclared
  CHECK_THROWS(load("(action A (?X) (pre (lit P ?Y)) (add) (del))"));          // free var
  CHECK_THROWS(load("(action A (?X) (pre (lit P a)) (add) (del))"));           // constant
  CHECK_THROWS(load("(action A (?X) (pre true) (add (P a)) (del))"));          // constant
  CHECK_THROWS(load("(action A (?X) (pre true) (add (P ?X)) (del (P ?X)))"));  // add and del
  CHECK_THROWS(load("(action A (?X) (pre (action A ?X)) (add) (del))"));       // action in pre
  CHECK_THROWS(load("(action A (?X ?X) (pre true) (add) (del))"));            // repeated param
  CHECK_THROWS(load("(action A (?X) (pre true) (add) (del)) (action A (?Y) (pre true) (add) (del))"));
  CHECK_THROWS(load("(reward (over next) (when (action B a) 1) (else 0))"));  // unknown action
  CHECK_THROWS(load("(action A (?X) (pre true) (add) (del)) (reward (over next) (when (action A a b) 1) (else 0))"));
  CHECK_THROWS(load("(termination (over next) (when true 2) (else 0))"));
  CHECK_THROWS(load("(reward (over next) (when (lit P ?X) 1) (else 0))"));   // open guard
  CHECK_THROWS(load("(reward (over next) (when true 1))"));                  // no else
  CHECK_THROWS_AS(parse_domain("(domain t (predicates (P 1 2)))"), ParseError);
}

TEST_CASE("is_applicable and apply on the four-block fixture") {
  auto d = builtin_domain("blocks_world");
  RelState s = fixture("blocks_towers.prob");
  CHECK(is_applicable(s, act("Pick", {"b"}), *d));
  CHECK_FALSE(is_applicable(s, act("Pick", {"d"}), *d));
  CHECK_THROWS_AS(is_applicable(s, act("Pick", {"zz"}), *d), MalformedAction);
  CHECK_THROWS_AS(is_applicable(s, act("Pick", {"a", "b"}), *d), MalformedAction);
  CHECK_THROWS_AS(is_applicable(s, act("Fly", {"a"}), *d), MalformedAction);

  RelState u = apply(s, act("Unstack", {"a", "d"}), *d);
  CHECK(u.holds(atom("Holding", {"a"})));
  CHECK(u.holds(atom("Clear", {"d"})));
  CHECK_FALSE(u.holds(atom("On", {"a", "d"})));
  CHECK_FALSE(u.holds(atom("Clear", {"a"})));
  CHECK_FALSE(u.holds(atom("HandEmpty", {})));
  CHECK(s.holds(atom("On", {"a", "d"})));  // input unmodified

  RelState p = apply(u, act("Place", {"a"}), *d);
  CHECK(p.holds(atom("OnTable", {"a"})));
  CHECK(p.holds(atom("Clear", {"a"})));
  CHECK(p.holds(atom("HandEmpty", {})));
  CHECK_FALSE(p.holds(atom("Holding", {"a"})));
  CHECK(p == fixture("blocks_towers_flat.prob"));

  // Pick then Place restores the state.
  CHECK(apply(apply(s, act("Pick", {"b"}), *d), act("Place", {"b"}), *d) == s);
  CHECK_THROWS_AS(apply(s, act("Pick", {"d"}), *d), PreconditionViolation);
}

TEST_CASE("applicable_actions order") {
  auto d = builtin_domain("blocks_world");
  RelState s = fixture("blocks_towers.prob");
  CHECK(names(applicable_actions(s, *d)) ==
        std::vector<std::string>{"Pick(b)", "Pick(c)", "Unstack(a,d)"});
  RelState held(std::vector<Symbol>{sym("a"), sym("d")},
                {atom("Holding", {"a"}), atom("OnTable", {"d"}), atom("Clear", {"d"})});
  CHECK(names(applicable_actions(held, *d)) == std::vector<std::string>{"Place(a)", "Stack(a,d)"});
  CHECK(applicable_actions(RelState(), *d).empty());
}

TEST_CASE("property: grounding matches brute force, frame property, determinism") {
  auto d = builtin_domain("blocks_world");
  auto bins = builtin_domain("bins");
  std::mt19937_64 rng(11);
  RelState s = fixture("blocks_towers.prob");
  RelState b = fixture("bins_2x2.prob");
  for (int step = 0; step < 400; ++step) {
    for (auto [state, dom] : {std::pair{&s, d.get()}, std::pair{&b, bins.get()}}) {
      auto acts = applicable_actions(*state, *dom);
      REQUIRE(names(acts) == names(brute_force_ground(*state, *dom)));
      if (acts.empty()) continue;
      GroundAction a = acts[std::uniform_int_distribution<std::size_t>(0, acts.size() - 1)(rng)];
      RelState next = apply(*state, a, *dom);
      CHECK(next == apply(*state, a, *dom));
      // Facts outside the effect lists are untouched.
      const ActionSchema& schema = dom->schemas()[*dom->schema_index(a.head())];
      std::vector<Atom> touched;
      Bindings env;
      for (std::size_t i = 0; i < schema.params.size(); ++i) env.push(schema.params[i], a.arg(i));
      for (const Literal& l : schema.add) touched.push_back(ground_literal(l, env));
      for (const Literal& l : schema.del) touched.push_back(ground_literal(l, env));
      for (const Atom& f : state->facts()) {
        if (std::find(touched.begin(), touched.end(), f) == touched.end()) CHECK(next.holds(f));
      }
      for (const Atom& f : next.facts()) {
        if (std::find(touched.begin(), touched.end(), f) == touched.end()) CHECK(state->holds(f));
      }
      *state = next;
    }
  }
}

TEST_CASE("problem text round trip") {
  Problem p = parse_problem(read_file(INTROSPECT_DATA_DIR "/fixtures/bins_2x2.prob"));
  CHECK(p.domain == "bins");
  CHECK(p.state.constants().size() == 4);
  CHECK(p.state.facts().size() == 8);
  Problem q = parse_problem(problem_to_string(p));
  CHECK(q.state == p.state);
  CHECK(q.name == p.name);
  CHECK_THROWS(parse_problem("(problem x (constants a) (init (P b)))"));
  CHECK_THROWS(parse_problem("(problem x (constants a) (init (P ?X)))"));
}
