#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace copra {

struct PrimePower {
    uint64_t prime = 0;
    uint32_t exponent = 0;
};

// Prime factorization of a positive integer, primes ascending.
struct Factorization {
    uint64_t value = 1;
    std::vector<PrimePower> factors;
};

// phi(n) for all n up to a limit, from one linear sieve pass.
struct TotientTable {
    uint64_t limit = 0;
    std::vector<uint64_t> values;  // values[n] = phi(n) for 1 <= n <= limit

    uint64_t operator()(uint64_t n) const;
};

std::vector<uint64_t> primes_up_to(uint64_t limit);

bool is_prime(uint64_t n);

Factorization factorize(uint64_t n);

uint64_t totient(uint64_t n);

// phi(n)/n as a double, computed as the product over prime factors of
// (1 - 1/p); avoids forming phi(n) first so the ratio is exact-per-factor.
double phi_ratio(uint64_t n);

TotientTable totient_sieve(uint64_t limit);

// Ascending distinct primes dividing q*r / gcd(q,r)^2 — equivalently the
// primes whose exponent differs between q and r.
std::vector<uint64_t> cross_radical_primes(uint64_t q, uint64_t r);

// Cutoff used by the overlap estimates:
//   A(d) = exp( log(d+100) * logloglog(d+100) / (8 * loglog(d+100)) + 1 ).
// Defined and increasing for every d >= 0.
double threshold_A(double d);

enum class MertensVariant {
    OverPMinus1,        // (1 + 1/(p-1))
    OverP,              // (1 + 1/p)
    OverPSquaredMinus1, // (1 + 1/(p^2-1)), the tail product
};

// Product of the chosen factor over cross-radical primes p > cutoff.
// Empty products are 1.
double mertens_product(uint64_t q, uint64_t r, double cutoff, MertensVariant variant);

// x^e by repeated squaring in a fixed order; exact identity for e in {0,1}
// (returns 1.0 and x respectively), which several bit-stability contracts
// depend on.
inline double pow_int(double x, unsigned e) {
    double r = 1.0;
    while (e) {
        if (e & 1u) r *= x;
        x *= x;
        e >>= 1u;
    }
    return r;
}

}  // namespace copra
