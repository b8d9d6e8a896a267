#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contact {

/** Base class of every error raised by the library. */
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error("dimension error: " + what) {}
};

class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& what) : Error("shape error: " + what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

/** A computation was refused because its size exceeds a configured limit. */
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error("resource limit: " + what) {}
};

class TableConsistencyError : public Error {
 public:
  explicit TableConsistencyError(const std::string& what)
      : Error("table consistency error: " + what) {}
};

class Infeasible : public Error {
 public:
  explicit Infeasible(const std::string& what) : Error("infeasible: " + what) {}
};

class DegenerateObjective : public Error {
 public:
  explicit DegenerateObjective(const std::string& what)
      : Error("degenerate objective: " + what) {}
};

class NotInPolytope : public Error {
 public:
  NotInPolytope(std::size_t index, const std::string& what)
      : Error("point violates inequality " + std::to_string(index) + ": " + what), index(index) {}
  std::size_t index;
};

class NotAVertex : public Error {
 public:
  explicit NotAVertex(const std::string& what) : Error("not a vertex: " + what) {}
};

class UnboundedEdge : public Error {
 public:
  explicit UnboundedEdge(const std::string& what) : Error("unbounded edge: " + what) {}
};

class NotASymmetry : public Error {
 public:
  NotASymmetry(std::size_t generator, const std::string& what)
      : Error("generator " + std::to_string(generator) + " is not a symmetry: " + what),
        generator(generator) {}
  std::size_t generator;
};

class BadSeed : public Error {
 public:
  explicit BadSeed(const std::string& what) : Error("bad seed: " + what) {}
};

class ActionMismatch : public Error {
 public:
  explicit ActionMismatch(const std::string& what) : Error("action mismatch: " + what) {}
};

/** Equivalence could not be decided within the search budget, even after escalation. */
class UndecidedError : public Error {
 public:
  explicit UndecidedError(const std::string& what) : Error("undecided: " + what) {}
};

class RuleDomainError : public Error {
 public:
  explicit RuleDomainError(const std::string& what) : Error("rule domain error: " + what) {}
};

/** An invariant that the mathematics guarantees was violated; indicates a bug or bad data. */
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error("internal error: " + what) {}
};

}  // namespace contact
