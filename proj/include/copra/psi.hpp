#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace copra {

// ---------------------------------------------------------------------------
// Support predicates: subsets of the positive integers used to restrict an
// approximation function to a sparse support.
// ---------------------------------------------------------------------------

struct SupportPredicate {
    enum class Kind {
        All,        // every positive integer
        Primes,     // prime numbers
        Powers,     // base^j for j >= 1
        Progression,  // n == a (mod m)
        List,       // explicit sorted list
        Sampled,    // pseudorandom set with a prescribed density profile
        Custom,     // arbitrary pure membership test (not textual)
    };
    enum class Profile {
        LoglogOverLogSq,  // density loglog(n)/log(n)^2
        OneOverLogSq,     // density 1/log(n)^2
    };

    Kind kind = Kind::All;
    std::uint64_t base = 2;           // Powers
    std::uint64_t residue = 0;        // Progression: n == residue (mod modulus)
    std::uint64_t modulus = 1;        // Progression
    std::vector<std::uint64_t> list;  // List, sorted ascending
    Profile profile = Profile::LoglogOverLogSq;  // Sampled
    std::uint64_t seed = 0;                      // Sampled
    std::function<bool(std::uint64_t)> custom;   // Custom
};

SupportPredicate predicate_all();
SupportPredicate predicate_primes();
SupportPredicate predicate_powers(std::uint64_t base);
SupportPredicate predicate_progression(std::uint64_t residue, std::uint64_t modulus);
SupportPredicate predicate_list(std::vector<std::uint64_t> values);
SupportPredicate predicate_sampled(SupportPredicate::Profile profile, std::uint64_t seed);
SupportPredicate predicate_custom(std::function<bool(std::uint64_t)> fn);

// Pure membership test; n must be >= 1.
bool predicate_contains(const SupportPredicate& pred, std::uint64_t n);

// Text forms: `all`, `primes`, `powers:2`, `ap:a=1,m=4`, `list:3,5,7`,
// `sampled:profile=upper,seed=7` (upper = loglog/log^2, lower = 1/log^2).
SupportPredicate parse_predicate(const std::string& text);
std::string predicate_to_text(const SupportPredicate& pred);

// ---------------------------------------------------------------------------
// Approximation functions psi: positive integers -> [0, 1/2].
// ---------------------------------------------------------------------------

struct PsiSpec {
    enum class Kind {
        Constant,     // psi(q) = c
        PowerLaw,     // psi(q) = c / q^s, values above 1/2 evaluate to 0
        PowerLog,     // psi(q) = 1 / (q * log(q)^t), values above 1/2 (or at
                      // q = 1, where the formula is undefined) evaluate to 0
        Table,        // explicit values at listed q, 0 elsewhere
        Restricted,   // base psi on a support predicate, 0 off it
        EpsilonOverQ,  // psi(q) = eps / q
        Custom,       // arbitrary pointwise rule, range-checked per call
    };

    Kind kind = Kind::Constant;
    double c = 0.25;   // Constant level / PowerLaw coefficient
    double s = 0.0;    // PowerLaw exponent
    double t = 1.0;    // PowerLog exponent
    double eps = 0.1;  // EpsilonOverQ numerator
    std::vector<std::pair<std::uint64_t, double>> table;  // sorted by q
    std::string table_path;                               // provenance for text form
    std::shared_ptr<const PsiSpec> restricted_base;       // Restricted
    SupportPredicate support;                             // Restricted
    std::function<double(std::uint64_t)> custom;          // Custom
};

PsiSpec make_psi_constant(double c);
PsiSpec make_psi_power_law(double c, double s);
PsiSpec make_psi_power_log(double t);
PsiSpec make_psi_table(std::vector<std::pair<std::uint64_t, double>> entries);
// Reads a CSV file with header `q,value`.
PsiSpec load_psi_table(const std::string& path);
PsiSpec make_psi_restricted(SupportPredicate pred, PsiSpec base);
PsiSpec make_psi_eps_over_q(double eps);
PsiSpec make_psi_custom(std::function<double(std::uint64_t)> fn);

// Deterministic evaluation; throws PsiRangeError if a custom rule yields a
// value outside [0, 1/2], naming the offending q.
double eval_psi(const PsiSpec& spec, std::uint64_t q);

// Text forms: `const:0.25`, `pow:c=1,s=3`, `powlog:t=2`, `eps_over_q:0.1`,
// `table:<path>`, `restrict:<predicate>;<base spec>`.
PsiSpec parse_psi(const std::string& text);
std::string psi_to_text(const PsiSpec& spec);

// ---------------------------------------------------------------------------
// Hausdorff-exponent heuristics and support densities.
// ---------------------------------------------------------------------------

struct DyadicCheckpoint {
    std::uint64_t Q = 0;
    double partial_sum = 0.0;
};

struct ExponentEntry {
    double s = 0.0;
    double partial_sum = 0.0;   // sum over q <= Q of q * (psi(q)/q)^s
    double octave_ratio = 0.0;  // last dyadic increment over the previous one
    bool growing = false;       // octave_ratio >= 0.95
    std::vector<DyadicCheckpoint> checkpoints;  // at Q/4, Q/2, Q (deduplicated)
};

// Grid-based bracket for the critical exponent inf{s: the series converges}.
// The growth classification is a heuristic from dyadic partial sums, not a
// decision procedure.
struct ExponentReport {
    std::vector<ExponentEntry> entries;  // sorted by s
    double s_low = 0.0;   // largest grid s still classified as growing
    double s_high = 1.0;  // smallest grid s classified as flattening
};

ExponentReport d_exponent_estimate(const PsiSpec& spec, std::vector<double> s_grid,
                                   std::uint64_t Q);

struct DensityPoint {
    std::uint64_t N = 0;
    std::uint64_t count = 0;
    double density = 0.0;
    // density divided by loglog(N)/log(N)^2 resp. 1/log(N)^2; NaN where the
    // threshold is not positive (N <= 2 resp. N == 1).
    double ratio_upper = 0.0;
    double ratio_lower = 0.0;
};

std::vector<DensityPoint> density_profile(const SupportPredicate& pred,
                                          const std::vector<std::uint64_t>& N_grid);

}  // namespace copra
