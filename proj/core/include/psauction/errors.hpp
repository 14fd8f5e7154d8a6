#pragma once

#include <stdexcept>
#include <string>

namespace psauction {

// Bracket expansion exhausted without a sign change. Signals either a
// function with no root in reach or a non-monotone input.
class BracketFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An integrand returned NaN or +/-inf at a quadrature node.
class NonFiniteError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfRangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// The model provides neither a closed-form conditional oracle nor the
// samplers required for the nested Monte Carlo fallback.
class OracleUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InadmissibleContract : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ascending-clock simulation ran past the highest plausible price.
class NonTermination : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace psauction
