#pragma once

#include <stdexcept>
#include <string>

namespace copra {

// Command-line / expression-grammar misuse, as opposed to a failure during a
// computation. The CLI maps this to exit code 2 and everything else to 1.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Adaptive quadrature could not reach the requested tolerance within its node
// budget. Carries the best estimate obtained and the bound actually achieved.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& message, double best_estimate_, double achieved_bound_)
        : std::runtime_error(message), best_estimate(best_estimate_), achieved_bound(achieved_bound_) {}

    double best_estimate = 0.0;
    double achieved_bound = 0.0;
};

// A ratio of two partial sums whose denominator vanished.
class UndefinedRatio : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A pointwise approximation-function rule produced a value outside [0, 1/2];
// carries the argument at which it happened.
class PsiRangeError : public std::domain_error {
public:
    PsiRangeError(uint64_t q_, const std::string& message)
        : std::domain_error(message), q(q_) {}

    uint64_t q = 0;
};

}  // namespace copra
