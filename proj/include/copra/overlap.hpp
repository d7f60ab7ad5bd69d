#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "copra/coprime.hpp"
#include "copra/psi.hpp"

namespace copra {

// A family of identical bumps placed at the coprime fractions a/q.  In
// q-scaled coordinates (y = q*x - a) the bump is
//   1            for |y| <= plateau,
//   g / |y|      for plateau < |y| <= sqrt(g),
//   0            beyond,
// with g = (psi_q * phi(q)/q)^(1/(k-1)) and plateau = g*(1 + eps*log(1/g))
// (so plateau == g for the plain eps = 0 family).
struct BumpFamily {
    uint64_t q = 1;
    int k = 2;
    double psi_q = 0.0;
    double epsilon = 0.0;
    // derived:
    double phi_over_q = 1.0;
    double g = 0.0;
    double plateau = 0.0;
};

// Validates inputs and derives g and the plateau radius.  Requires the
// plateau to stay within the step range [0, 2*sqrt(g)] (which bounds the
// usable epsilon for a given g).
BumpFamily make_bump_family(uint64_t q, int k, double psi_q, double epsilon = 0.0);

// The bump profile at signed offset y (q-scaled units).  Even in y.
double bump_eval(const BumpFamily& family, double y);

// Radius beyond which the bump vanishes: max(sqrt(g), plateau); 0 for
// psi_q = 0.
double bump_support_radius(const BumpFamily& family);

// Integral of one bump over the line: 2*plateau + 2*g*log(sqrt(g)/plateau)
// when the reciprocal tail exists, in closed form.
double bump_integral(const BumpFamily& family);

// gamma(x) = prod_i sum_{(a,q)=1} bump(q*x_i - a) for a point x in
// [0,1]^(k-1).  The inner sum is evaluated over every coprime center whose
// support reaches x_i, so it stays correct even for wide bumps.
double gamma_eval(const BumpFamily& family, const std::vector<double>& x);

// Exact integral of gamma over [0,1]^(k-1):
// (phi(q)/q * single-bump integral)^(k-1).
double gamma_mean(const BumpFamily& family);

struct GammaBoundCheck {
    bool holds = true;
    double lhs = 0.0;  // (phi(q)/q) * psi_q / prod_i coprime_distance(q, alpha_i)
    double rhs = 0.0;  // gamma_eval at alpha
};

// Verifies the pointwise lower bound lhs >= gamma(alpha) for one sample
// point.  alpha must have k-1 coordinates; requires phi(q)/q <= rho.
// Throws std::domain_error when some coordinate sits exactly on a coprime
// fraction (the left side would be infinite).
GammaBoundCheck gamma_lower_bound_check(uint64_t q, int k, double psi_q,
                                        const std::vector<double>& alpha, double rho);

// Step-function majorant of the eps-bump built from K horizontal slabs
// (Lebesgue-construction level sets): breakpoints[i] is where the bump
// crosses level (K-1-i)/K, clamped to [plateau, 2*sqrt(g)], stored
// ascending.  (1/K) * sum_i indicator([-x_i, x_i]) dominates the bump
// pointwise and converges to it in L1 as K grows.
struct StepSandwich {
    uint64_t q = 1;
    int k = 2;
    double epsilon = 0.0;
    int steps = 1;
    double g = 0.0;
    double plateau = 0.0;
    std::vector<double> breakpoints;  // ascending, size == steps
};

StepSandwich step_sandwich(const BumpFamily& family, int steps);

// (1/K) * #{i : |y| <= breakpoints[i]} — the step majorant's value at y.
double step_eval(const StepSandwich& sandwich, double y);

// L1 norm of the step majorant on the line: (1/K) * sum_i 2*breakpoints[i].
double step_l1(const StepSandwich& sandwich);

// D(q,r,i,j) = max(r*x_q, q*x_r)/gcd(q,r): the scale entering the prime
// cutoff for one pair of step radii.
double pair_scale(uint64_t q, uint64_t r, double x_q, double x_r);

// plateau^(k-1): the per-q floor under every pair_scale value.
double plateau_power(const BumpFamily& family);

// D-bar: pair_scale evaluated at the plateau powers, a lower bound for
// every D(q,r,i,j).
double pair_scale_floor(const BumpFamily& fam_q, const BumpFamily& fam_r);

// (1/(Kq*Kr)) * sum_{i,j} lambda_1(A_{q,i} cap A_{r,j}), where A_{q,i} is
// the union of arcs of radius breakpoints[i]/q around the coprime fractions
// a/q.  With allow_closed_form, disjoint-arc inputs take a close-pair
// counting route; the reference route intersects the merged interval unions
// directly (pass false to force it, e.g. for verification).
double step_cross_integral(const CoprimeLayer& layer_q, const StepSandwich& sq,
                           const CoprimeLayer& layer_r, const StepSandwich& sr,
                           bool allow_closed_form = true);

struct PairStats {
    uint64_t q = 1;
    uint64_t r = 1;
    double d_bar = 0.0;             // pair_scale_floor
    double a_cut = 0.0;             // prime cutoff threshold_A(d_bar)
    double p_product = 1.0;         // prod over cross-radical p > a_cut of (1 + 1/(p-1))
    double correlation = 0.0;       // step-route upper bound for int gamma_q*gamma_r
    double product_of_means = 0.0;  // gamma_mean(q) * gamma_mean(r)
    double ratio = 0.0;             // correlation / product_of_means (0 when means vanish)
    double refinement_bias = 0.0;   // correlation at K minus correlation at 2K (>= 0)
    double mc_value = 0.0;          // Monte Carlo cross-check (0 when budget == 0)
    double mc_error = 0.0;          // one standard error of mc_value
};

// Correlation of two bump families through the step sandwich at resolution
// K (reported value) and 2K (for the refinement bias).  mc_budget > 0 adds
// a deterministic Monte Carlo cross-check of int gamma_q*gamma_r.
PairStats pair_correlation(const BumpFamily& fam_q, const BumpFamily& fam_r, int steps,
                           uint64_t mc_budget);

// CSV with header q,r,D_bar,A_cut,P_product,correlation,product_of_means,ratio.
std::string pair_stats_to_csv(const std::vector<PairStats>& rows);

struct QuasiIndependence {
    double ratio = 0.0;             // correlation_sum / mean_sum^2 at Q
    double correlation_sum = 0.0;   // sum over ordered support pairs (q,r)
    double mean_sum = 0.0;          // sum over support of gamma_mean
    bool rho_condition_met = true;  // all support q satisfy phi(q)/q <= 1/4^(k-1)
    uint64_t support_count = 0;
    std::vector<std::pair<uint64_t, double>> trajectory;  // (Q', ratio) at dyadic Q' and Q
};

// The variance-vs-squared-mean ratio sum_{q,r<=Q} corr / (sum_{q<=Q} mean)^2
// over the support of psi, with the correlation computed through the step
// sandwich at the given resolution.  Throws UndefinedRatio when psi vanishes
// on all of [1, Q].  collect, when non-null, receives the PairStats of every
// unordered support pair.
QuasiIndependence quasi_independence_ratio(const PsiSpec& psi, int k, uint64_t Q, int steps,
                                           double epsilon = 0.01,
                                           std::vector<PairStats>* collect = nullptr);

struct ScaleEquivalence {
    double d_psi = 0.0;
    double d_chi = 0.0;
    double log_ratio = 0.0;        // log(d_psi+2) / log(d_chi+2)
    double product_ratio = 0.0;    // cutoff Mertens product at A(d_psi) over A(d_chi)
    double residual_scaled = 0.0;  // |product_ratio - 1| * log(d_psi + 2)
    double tail = 0.0;             // prod over cross-radical p > A(d_psi) of (1 + 1/(p^2-1))
    double tail_bound = 0.0;       // 1 + 1/A(d_psi)
    double identity_gap = 0.0;     // relative gap in (1+1/(p-1)) = (1+1/p)(1+1/(p^2-1))
};

// Numeric check that two comparable threshold functions (C1*chi <= psi <=
// C2*chi at q and r) give equivalent overlap scales: the log ratio of the
// D values, the stability of the cutoff Mertens product, and the tail
// product with its 1/A bound.  Throws std::invalid_argument when the
// comparability precondition fails at q or r.
ScaleEquivalence scale_equivalence_report(uint64_t q, uint64_t r, const PsiSpec& psi,
                                          const PsiSpec& chi, double c1, double c2);

struct ChiRow {
    uint64_t q = 1;
    double psi_q = 0.0;
    double g = 0.0;
    double gamma_mean_q = 0.0;  // int gamma_q
    double chi = 0.0;           // (q/phi(q)) * gamma_mean_q
    double displayed = 0.0;     // [g*(1 + log(1/g)/2)]^(k-1), the textbook comparison column
};

struct ChiReport {
    std::vector<ChiRow> rows;      // q = 1..Q
    double x_sum = 0.0;            // X(Q) = sum of gamma_mean over q <= Q
    double series_lower = 0.0;     // sum of (phi/q)^k psi log(1/((phi/q) psi))^(k-1)
};

// chi(q) per q and the cumulative X(Q), together with the series the sum is
// compared against.  chi is computed from the direct integral; the
// `displayed` column records the closed-form comparison value, which differs
// from the direct integral by a normalization factor.
ChiReport chi_and_x(const PsiSpec& psi, int k, uint64_t Q);

}  // namespace copra
