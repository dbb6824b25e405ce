#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nsb {

using Index = std::int64_t;
using Symbol = int;

/// Closed integer interval [lo, hi]. Empty when hi < lo.
struct IndexRange {
  Index lo = 0;
  Index hi = -1;

  static IndexRange symmetric(Index n) { return {-n, n}; }
  static IndexRange from_start(Index start, Index length) { return {start, start + length - 1}; }

  Index size() const { return hi < lo ? 0 : hi - lo + 1; }
  bool empty() const { return hi < lo; }
  bool contains(Index n) const { return n >= lo && n <= hi; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Error categories. The CLI maps PreconditionError/ConfigError to exit code 2
// and everything else derived from Error to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ZeroMassError : public Error {
 public:
  ZeroMassError(const std::string& what, Index index) : Error(what), index_(index) {}
  Index index() const { return index_; }

 private:
  Index index_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace nsb
