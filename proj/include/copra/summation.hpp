#pragma once

#include <cstddef>
#include <vector>

namespace copra {

// Kahan compensated accumulator. Series and piecewise integrals add many
// terms of wildly different magnitude; compensation keeps partial sums stable
// without requiring any particular term order from the caller.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }

    double total() const { return sum; }
};

namespace detail {
inline double pairwise_sum_range(const double* p, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += p[i];
        return s;
    }
    size_t h = n / 2;
    return pairwise_sum_range(p, h) + pairwise_sum_range(p + h, n - h);
}
}  // namespace detail

// Sums slots[0..n) with a fixed pairwise tree. Parallel loops write slot i
// and reduce through this afterwards, so totals never depend on scheduling.
inline double pairwise_sum(const std::vector<double>& slots) {
    return slots.empty() ? 0.0 : detail::pairwise_sum_range(slots.data(), slots.size());
}

}  // namespace copra
