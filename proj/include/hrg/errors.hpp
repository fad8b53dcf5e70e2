#pragma once

#include <stdexcept>
#include <string>

namespace hrg {

/// Invalid or mismatched configuration: bad (N, K), invalid c-sequence,
/// mismatched spaces, malformed input files.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Analytic precondition violated (subcritical lambda, probability > 1, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The fixed-point recursion hit a level where lambda_k = c_k * beta_{k-1}^2 <= 1.
class RecursionBreakdown : public DomainError {
public:
    RecursionBreakdown(unsigned level, double lambda)
        : DomainError("fixed-point recursion breakdown at level " + std::to_string(level) +
                      ": lambda = " + std::to_string(lambda) + " <= 1"),
          level_(level),
          lambda_(lambda) {}

    unsigned level() const noexcept { return level_; }
    double lambda() const noexcept { return lambda_; }

private:
    unsigned level_;
    double lambda_;
};

} // namespace hrg
