#pragma once

#include <stdexcept>
#include <string>

namespace seamkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (not JSON, wrong value types, missing keys).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Well-formed input that violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Panel boundary does not close; carries the largest joint gap.
class OpenBoundaryError : public Error {
 public:
  OpenBoundaryError(const std::string& what, double gap) : Error(what), max_gap(gap) {}
  double max_gap;
};

/// Panel boundary crosses itself; carries the offending pair of panel edges.
class SelfIntersectionError : public Error {
 public:
  SelfIntersectionError(const std::string& what, int a, int b)
      : Error(what), edge_a(a), edge_b(b) {}
  int edge_a;
  int edge_b;
};

/// A transform was requested from a zero-length source segment.
class DegenerateEdgeError : public Error {
 public:
  DegenerateEdgeError(const std::string& what, int edge) : Error(what), edge_index(edge) {}
  int edge_index;
};

}  // namespace seamkit
