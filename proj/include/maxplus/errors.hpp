#pragma once

#include <stdexcept>
#include <string>

namespace maxplus {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// rho(A) is the semiring zero: G(A) has no circuit.
class AcyclicError : public Error {
 public:
  AcyclicError() : Error("matrix graph has no circuit (rho = -inf)") {}
};

class NotIrreducibleError : public Error {
 public:
  NotIrreducibleError() : Error("matrix is not irreducible") {}
};

class ZeroVectorError : public Error {
 public:
  ZeroVectorError() : Error("vector is identically -inf") {}
};

class NotEigenvectorError : public Error {
 public:
  using Error::Error;
};

class NotSuperEigenvectorError : public Error {
 public:
  using Error::Error;
};

class NoCriticalNodesError : public Error {
 public:
  NoCriticalNodesError() : Error("critical graph is empty") {}
};

class NoPathError : public Error {
 public:
  using Error::Error;
};

class UnreachableBasepointError : public Error {
 public:
  using Error::Error;
};

class CapReachedError : public Error {
 public:
  using Error::Error;
};

}  // namespace maxplus
