#pragma once

#include <stdexcept>
#include <string>

namespace introspect {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A formula that cannot be evaluated or mutated as given (e.g. unbound
// variables, empty connectives, shadowed quantifiers).
class MalformedFormula : public Error {
 public:
  using Error::Error;
};

class MalformedBinding : public Error {
 public:
  using Error::Error;
};

// An ActionAtom was evaluated without a transition to bind it to.
class MissingContext : public Error {
 public:
  using Error::Error;
};

class MalformedAction : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class MutationOverflow : public Error {
 public:
  using Error::Error;
};

class OracleOverflow : public Error {
 public:
  using Error::Error;
};

}  // namespace introspect
