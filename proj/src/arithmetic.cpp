#include "copra/arithmetic.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace copra {

uint64_t TotientTable::operator()(uint64_t n) const {
    if (n == 0 || n > limit)
        throw std::out_of_range("totient table query out of range: n=" + std::to_string(n) +
                                ", limit=" + std::to_string(limit));
    return values[n];
}

std::vector<uint64_t> primes_up_to(uint64_t limit) {
    std::vector<uint64_t> primes;
    if (limit < 2) return primes;
    std::vector<char> composite(limit + 1, 0);
    for (uint64_t n = 2; n <= limit; ++n) {
        if (composite[n]) continue;
        primes.push_back(n);
        for (uint64_t m = n * n; m <= limit; m += n) composite[m] = 1;
    }
    return primes;
}

Factorization factorize(uint64_t n) {
    if (n == 0) throw std::invalid_argument("factorize: n must be positive");
    Factorization f;
    f.value = n;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        PrimePower pp{p, 0};
        while (n % p == 0) {
            n /= p;
            ++pp.exponent;
        }
        f.factors.push_back(pp);
    }
    if (n > 1) f.factors.push_back(PrimePower{n, 1});
    return f;
}

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2))
        if (n % p == 0) return false;
    return true;
}

uint64_t totient(uint64_t n) {
    Factorization f = factorize(n);
    uint64_t phi = 1;
    for (const PrimePower& pp : f.factors) {
        uint64_t q = pp.prime - 1;
        for (uint32_t e = 1; e < pp.exponent; ++e) q *= pp.prime;
        phi *= q;
    }
    return phi;
}

double phi_ratio(uint64_t n) {
    Factorization f = factorize(n);
    double r = 1.0;
    for (const PrimePower& pp : f.factors) r *= 1.0 - 1.0 / static_cast<double>(pp.prime);
    return r;
}

TotientTable totient_sieve(uint64_t limit) {
    if (limit == 0) throw std::invalid_argument("totient_sieve: limit must be >= 1");
    TotientTable t;
    t.limit = limit;
    t.values.assign(limit + 1, 0);
    if (limit >= 1) t.values[1] = 1;
    std::vector<uint64_t> primes;
    for (uint64_t n = 2; n <= limit; ++n) {
        if (t.values[n] == 0) {
            primes.push_back(n);
            t.values[n] = n - 1;
        }
        for (uint64_t p : primes) {
            if (p > limit / n) break;
            if (n % p == 0) {
                t.values[n * p] = t.values[n] * p;
                break;
            }
            t.values[n * p] = t.values[n] * (p - 1);
        }
    }
    return t;
}

std::vector<uint64_t> cross_radical_primes(uint64_t q, uint64_t r) {
    if (q == 0 || r == 0) throw std::invalid_argument("cross_radical_primes: q, r must be positive");
    uint64_t g = std::gcd(q, r);
    // p | qr/(q,r)^2 iff p divides q/g or r/g; factor the two cofactors
    // separately to avoid forming their (possibly huge) product.
    Factorization a = factorize(q / g);
    Factorization b = factorize(r / g);
    std::vector<uint64_t> primes;
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        uint64_t pa = i < a.factors.size() ? a.factors[i].prime : UINT64_MAX;
        uint64_t pb = j < b.factors.size() ? b.factors[j].prime : UINT64_MAX;
        uint64_t p = pa < pb ? pa : pb;
        primes.push_back(p);
        if (pa == p) ++i;
        if (pb == p) ++j;
    }
    return primes;
}

double threshold_A(double d) {
    if (!(d >= 0.0)) throw std::invalid_argument("threshold_A: d must be >= 0");
    double l = std::log(d + 100.0);
    double ll = std::log(l);
    double lll = std::log(ll);
    return std::exp(l * lll / (8.0 * ll) + 1.0);
}

double mertens_product(uint64_t q, uint64_t r, double cutoff, MertensVariant variant) {
    double prod = 1.0;
    for (uint64_t p : cross_radical_primes(q, r)) {
        if (static_cast<double>(p) <= cutoff) continue;
        double pd = static_cast<double>(p);
        switch (variant) {
            case MertensVariant::OverPMinus1: prod *= 1.0 + 1.0 / (pd - 1.0); break;
            case MertensVariant::OverP: prod *= 1.0 + 1.0 / pd; break;
            case MertensVariant::OverPSquaredMinus1: prod *= 1.0 + 1.0 / (pd * pd - 1.0); break;
        }
    }
    return prod;
}

}  // namespace copra
