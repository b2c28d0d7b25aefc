#include "pmatch/errors.hpp"

namespace pmatch {

CapExceeded::CapExceeded(int L_, int cap_)
    : std::runtime_error("enumeration cap exceeded: L = " +
                         std::to_string(L_) + " > cap " +
                         std::to_string(cap_)),
      L(L_),
      cap(cap_) {}

InfeasibleAlpha::InfeasibleAlpha(double alpha_, double a_)
    : std::domain_error("target type-I error alpha = " +
                        std::to_string(alpha_) +
                        " is infeasible: requires alpha <= a/2 = " +
                        std::to_string(a_ / 2)),
      alpha(alpha_),
      a(a_) {}

ZeroDenominator::ZeroDenominator(int rank_)
    : std::runtime_error("conditional-rate denominator is zero at rank " +
                         std::to_string(rank_)),
      rank(rank_) {}

NegativeDenominator::NegativeDenominator(int rank_)
    : std::runtime_error(
          "inconsistent counts: denominator is negative at rank " +
          std::to_string(rank_)),
      rank(rank_) {}

ParseError::ParseError(std::string file_, int line_,
                       const std::string& message)
    : std::runtime_error(line_ > 0 ? file_ + ":" + std::to_string(line_) +
                                         ": " + message
                                   : file_ + ": " + message),
      file(std::move(file_)),
      line(line_) {}

}  // namespace pmatch
