#pragma once

#include <stdexcept>
#include <string>

namespace pmatch {

// Enumeration over 3^L configurations would exceed the configured cap.
struct CapExceeded : std::runtime_error {
  int L;
  int cap;
  CapExceeded(int L_, int cap_);
};

// A conditional statistic was requested but the conditioning event has zero
// probability mass (e.g. type-I error with e = 0).
struct DegenerateCondition : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The target type-I error alpha cannot be attained with a swap probability
// of at most 1/2; feasibility requires alpha <= a/2.
struct InfeasibleAlpha : std::domain_error {
  double alpha;
  double a;
  InfeasibleAlpha(double alpha_, double a_);
};

// Observed market rates violate the model's requirements.
struct InvalidObservation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Conditional-rate denominator is zero at some rank.
struct ZeroDenominator : std::runtime_error {
  int rank;
  explicit ZeroDenominator(int rank_);
};

// Aggregate counts are inconsistent (more exits than applicants).
struct NegativeDenominator : std::runtime_error {
  int rank;
  explicit NegativeDenominator(int rank_);
};

// Malformed input file, with position diagnostics.
struct ParseError : std::runtime_error {
  std::string file;
  int line;  // 1-based; 0 when not line-oriented (JSON)
  ParseError(std::string file_, int line_, const std::string& message);
};

}  // namespace pmatch
