#include "copra/overlap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "copra/arithmetic.hpp"
#include "copra/errors.hpp"
#include "copra/interval.hpp"
#include "copra/io.hpp"
#include "copra/rng.hpp"
#include "copra/summation.hpp"

namespace copra {

namespace {

void check_psi_value(double psi_q, const char* where) {
    if (!std::isfinite(psi_q) || psi_q < 0.0 || psi_q > 0.5)
        throw std::invalid_argument(std::string(where) + ": psi value must lie in [0, 1/2]");
}

bool coprime_to(int64_t c, uint64_t q) {
    const int64_t m = static_cast<int64_t>(q);
    const uint64_t res = static_cast<uint64_t>(((c % m) + m) % m);
    return std::gcd(res, q) == 1;
}

// Sum of bump values over every coprime center whose support reaches q*x.
double gamma_one_coordinate(const BumpFamily& family, double x) {
    const double y = static_cast<double>(family.q) * x;
    const double radius = bump_support_radius(family);
    const int64_t lo = static_cast<int64_t>(std::ceil(y - radius));
    const int64_t hi = static_cast<int64_t>(std::floor(y + radius));
    double sum = 0.0;
    for (int64_t c = lo; c <= hi; ++c) {
        if (coprime_to(c, family.q)) sum += bump_eval(family, y - static_cast<double>(c));
    }
    return sum;
}

}  // namespace

BumpFamily make_bump_family(uint64_t q, int k, double psi_q, double epsilon) {
    if (q == 0) throw std::invalid_argument("bump family: q must be >= 1");
    if (k < 2) throw std::invalid_argument("bump family: k must be >= 2");
    check_psi_value(psi_q, "bump family");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("bump family: epsilon must be finite and >= 0");
    BumpFamily family;
    family.q = q;
    family.k = k;
    family.psi_q = psi_q;
    family.epsilon = epsilon;
    family.phi_over_q = static_cast<double>(totient(q)) / static_cast<double>(q);
    if (psi_q == 0.0) return family;  // g == plateau == 0
    const double v = family.phi_over_q * psi_q;
    family.g = (k == 2) ? v : std::pow(v, 1.0 / static_cast<double>(k - 1));
    family.plateau = family.g * (1.0 + epsilon * std::log(1.0 / family.g));
    if (family.plateau > 2.0 * std::sqrt(family.g))
        throw std::invalid_argument(
            "bump family: plateau radius exceeds the step range 2*sqrt(g); reduce epsilon");
    return family;
}

double bump_eval(const BumpFamily& family, double y) {
    const double a = std::abs(y);
    if (a <= family.plateau) return 1.0;
    if (a * a <= family.g) return 1.0;  // inside [plateau, sqrt(g)] with g/|y| >= 1 cannot occur
    if (a <= std::sqrt(family.g)) return family.g / a;
    return 0.0;
}

double bump_support_radius(const BumpFamily& family) {
    if (family.psi_q == 0.0) return 0.0;
    return std::max(std::sqrt(family.g), family.plateau);
}

double bump_integral(const BumpFamily& family) {
    if (family.psi_q == 0.0) return 0.0;
    const double root = std::sqrt(family.g);
    double value = 2.0 * family.plateau;
    if (root > family.plateau) value += 2.0 * family.g * std::log(root / family.plateau);
    return value;
}

double gamma_eval(const BumpFamily& family, const std::vector<double>& x) {
    if (x.size() != static_cast<std::size_t>(family.k - 1))
        throw std::invalid_argument("gamma_eval: point must have k-1 coordinates");
    double product = 1.0;
    for (double xi : x) {
        if (!std::isfinite(xi)) throw std::invalid_argument("gamma_eval: coordinates must be finite");
        product *= gamma_one_coordinate(family, xi);
        if (product == 0.0) return 0.0;
    }
    return product;
}

double gamma_mean(const BumpFamily& family) {
    return pow_int(family.phi_over_q * bump_integral(family),
                   static_cast<unsigned>(family.k - 1));
}

GammaBoundCheck gamma_lower_bound_check(uint64_t q, int k, double psi_q,
                                        const std::vector<double>& alpha, double rho) {
    if (!(rho > 0.0) || rho > 1.0 || !std::isfinite(rho))
        throw std::invalid_argument("gamma_lower_bound_check: rho must lie in (0, 1]");
    const BumpFamily family = make_bump_family(q, k, psi_q, 0.0);
    if (family.phi_over_q > rho)
        throw std::invalid_argument("gamma_lower_bound_check: phi(q)/q must be <= rho");
    if (alpha.size() != static_cast<std::size_t>(k - 1))
        throw std::invalid_argument("gamma_lower_bound_check: alpha must have k-1 coordinates");
    double denominator = 1.0;
    for (double a : alpha) {
        const double dist = coprime_distance(q, a);
        if (dist == 0.0)
            throw std::domain_error(
                "gamma_lower_bound_check: a coordinate lies exactly on a coprime fraction");
        denominator *= dist;
    }
    GammaBoundCheck check;
    check.lhs = family.phi_over_q * psi_q / denominator;
    check.rhs = gamma_eval(family, alpha);
    check.holds = check.lhs >= check.rhs;
    return check;
}

StepSandwich step_sandwich(const BumpFamily& family, int steps) {
    if (steps < 1) throw std::invalid_argument("step_sandwich: need at least one step");
    StepSandwich sandwich;
    sandwich.q = family.q;
    sandwich.k = family.k;
    sandwich.epsilon = family.epsilon;
    sandwich.steps = steps;
    sandwich.g = family.g;
    sandwich.plateau = family.plateau;
    sandwich.breakpoints.resize(steps);
    const double top = 2.0 * std::sqrt(family.g);
    // Level i/K is crossed from above at g*K/i on the reciprocal branch;
    // level 0 never crosses, so that radius caps at the step range 2*sqrt(g).
    // Clamping to [plateau, top] keeps the radii inside Figure-like bounds
    // while preserving pointwise domination.  Stored ascending.
    for (int i = 0; i < steps; ++i) {
        double radius;
        if (i == 0) {
            radius = top;
        } else {
            radius = family.g * static_cast<double>(steps) / static_cast<double>(i);
            radius = std::min(top, std::max(family.plateau, radius));
        }
        sandwich.breakpoints[steps - 1 - i] = radius;
    }
    return sandwich;
}

double step_eval(const StepSandwich& sandwich, double y) {
    const double a = std::abs(y);
    const auto it =
        std::lower_bound(sandwich.breakpoints.begin(), sandwich.breakpoints.end(), a);
    const auto covering = sandwich.breakpoints.end() - it;
    return static_cast<double>(covering) / static_cast<double>(sandwich.steps);
}

double step_l1(const StepSandwich& sandwich) {
    KahanSum sum;
    for (double x : sandwich.breakpoints) sum.add(2.0 * x);
    return sum.total() / static_cast<double>(sandwich.steps);
}

double pair_scale(uint64_t q, uint64_t r, double x_q, double x_r) {
    if (q == 0 || r == 0) throw std::invalid_argument("pair_scale: q and r must be >= 1");
    const double left = static_cast<double>(r) * x_q;
    const double right = static_cast<double>(q) * x_r;
    return std::max(left, right) / static_cast<double>(std::gcd(q, r));
}

double plateau_power(const BumpFamily& family) {
    return pow_int(family.plateau, static_cast<unsigned>(family.k - 1));
}

double pair_scale_floor(const BumpFamily& fam_q, const BumpFamily& fam_r) {
    return pair_scale(fam_q.q, fam_r.q, plateau_power(fam_q), plateau_power(fam_r));
}

namespace {

// Reference route: intersect the merged arc unions level by level.
double cross_integral_reference(const CoprimeLayer& layer_q, const StepSandwich& sq,
                                const CoprimeLayer& layer_r, const StepSandwich& sr) {
    std::vector<IntervalUnion> unions_q;
    unions_q.reserve(sq.breakpoints.size());
    for (double x : sq.breakpoints)
        unions_q.push_back(interval_union_around_coprime(layer_q, x).segments);
    std::vector<IntervalUnion> unions_r;
    unions_r.reserve(sr.breakpoints.size());
    for (double x : sr.breakpoints)
        unions_r.push_back(interval_union_around_coprime(layer_r, x).segments);
    KahanSum sum;
    for (const IntervalUnion& uq : unions_q)
        for (const IntervalUnion& ur : unions_r)
            sum.add(union_intersection_measure(uq, ur));
    return sum.total() /
           (static_cast<double>(sq.steps) * static_cast<double>(sr.steps));
}

// Closed-form route: every arc of A_{q,i} is disjoint from its siblings, so
// lambda(A_{q,i} cap A_{r,j}) is a sum over close center pairs (a/q, b/r) of
// max(0, min(2u, 2v, u+v-d)) with u, v the torus radii and d the center
// distance.  Distances are collected once as exact integers delta = |a*r-b*q|
// (circular, on a ring of circumference q*r), then every (i,j) combination is
// resolved with two binary searches over the prefix sums of the histogram.
double cross_integral_close_pairs(const CoprimeLayer& layer_q, const StepSandwich& sq,
                                  const CoprimeLayer& layer_r, const StepSandwich& sr,
                                  uint64_t window) {
    const uint64_t q = layer_q.q;
    const uint64_t r = layer_r.q;
    const uint64_t ring = q * r;
    std::vector<uint64_t> positions_r(layer_r.residues.size());
    for (std::size_t j = 0; j < layer_r.residues.size(); ++j)
        positions_r[j] = layer_r.residues[j] * q;

    std::vector<uint64_t> deltas;
    auto scan_range = [&](uint64_t pa, uint64_t from, uint64_t to) {
        auto it = std::lower_bound(positions_r.begin(), positions_r.end(), from);
        for (; it != positions_r.end() && *it <= to; ++it) {
            const uint64_t raw = (*it > pa) ? *it - pa : pa - *it;
            deltas.push_back(std::min(raw, ring - raw));
        }
    };
    for (uint64_t a : layer_q.residues) {
        const uint64_t pa = a * r;
        const uint64_t lo = (pa >= window) ? pa - window : pa + ring - window;
        const uint64_t hi = (pa + window < ring) ? pa + window : pa + window - ring;
        if (lo <= hi) {
            scan_range(pa, lo, hi);
        } else {
            scan_range(pa, lo, ring - 1);
            scan_range(pa, 0, hi);
        }
    }
    std::sort(deltas.begin(), deltas.end());

    // run-length encode into distinct torus distances with prefix sums
    const double ring_d = static_cast<double>(q) * static_cast<double>(r);
    std::vector<double> dist_values;
    std::vector<double> prefix_count{0.0};
    std::vector<double> prefix_count_dist{0.0};
    for (std::size_t i = 0; i < deltas.size();) {
        std::size_t j = i;
        while (j < deltas.size() && deltas[j] == deltas[i]) ++j;
        const double d = static_cast<double>(deltas[i]) / ring_d;
        const double count = static_cast<double>(j - i);
        dist_values.push_back(d);
        prefix_count.push_back(prefix_count.back() + count);
        prefix_count_dist.push_back(prefix_count_dist.back() + count * d);
        i = j;
    }

    const double qd = static_cast<double>(q);
    const double rd = static_cast<double>(r);
    KahanSum sum;
    for (double xq : sq.breakpoints) {
        const double u = xq / qd;
        for (double xr : sr.breakpoints) {
            const double v = xr / rd;
            if (u <= 0.0 || v <= 0.0) continue;
            const double cap = std::min(2.0 * u, 2.0 * v);
            const double near = std::abs(u - v);
            const double far = u + v;
            const std::size_t i1 =
                std::upper_bound(dist_values.begin(), dist_values.end(), near) -
                dist_values.begin();
            const std::size_t i2 =
                std::upper_bound(dist_values.begin(), dist_values.end(), far) -
                dist_values.begin();
            const double full = prefix_count[i1];
            const double partial = prefix_count[i2] - prefix_count[i1];
            const double partial_dist = prefix_count_dist[i2] - prefix_count_dist[i1];
            sum.add(cap * full + far * partial - partial_dist);
        }
    }
    return sum.total() /
           (static_cast<double>(sq.steps) * static_cast<double>(sr.steps));
}

}  // namespace

double step_cross_integral(const CoprimeLayer& layer_q, const StepSandwich& sq,
                           const CoprimeLayer& layer_r, const StepSandwich& sr,
                           bool allow_closed_form) {
    if (layer_q.q != sq.q || layer_r.q != sr.q)
        throw std::invalid_argument("step_cross_integral: layer and sandwich q mismatch");
    const double x_max_q = sq.breakpoints.empty() ? 0.0 : sq.breakpoints.back();
    const double x_max_r = sr.breakpoints.empty() ? 0.0 : sr.breakpoints.back();
    if (x_max_q <= 0.0 || x_max_r <= 0.0) return 0.0;
    if (allow_closed_form) {
        const uint64_t min_gap_q =
            *std::min_element(layer_q.gaps.begin(), layer_q.gaps.end());
        const uint64_t min_gap_r =
            *std::min_element(layer_r.gaps.begin(), layer_r.gaps.end());
        const double window = static_cast<double>(layer_r.q) * x_max_q +
                              static_cast<double>(layer_q.q) * x_max_r;
        const double ring = static_cast<double>(layer_q.q) * static_cast<double>(layer_r.q);
        const bool arcs_disjoint = 2.0 * x_max_q <= static_cast<double>(min_gap_q) &&
                                   2.0 * x_max_r <= static_cast<double>(min_gap_r);
        if (arcs_disjoint && 2.0 * (window + 1.0) < ring) {
            return cross_integral_close_pairs(layer_q, sq, layer_r, sr,
                                              static_cast<uint64_t>(std::floor(window)));
        }
    }
    return cross_integral_reference(layer_q, sq, layer_r, sr);
}

namespace {

struct FamilyBundle {
    BumpFamily family;
    CoprimeLayer layer;
    StepSandwich coarse;   // at the requested resolution K
    StepSandwich fine;     // at 2K, for the refinement bias
    double mean = 0.0;     // gamma_mean
};

FamilyBundle make_bundle(const BumpFamily& family, int steps, bool with_fine) {
    FamilyBundle bundle;
    bundle.family = family;
    bundle.layer = coprime_layer(family.q);
    bundle.coarse = step_sandwich(family, steps);
    if (with_fine) bundle.fine = step_sandwich(family, 2 * steps);
    bundle.mean = gamma_mean(family);
    return bundle;
}

PairStats pair_stats_from_bundles(const FamilyBundle& a, const FamilyBundle& b,
                                  bool with_refinement, uint64_t mc_budget) {
    const int k = a.family.k;
    PairStats stats;
    stats.q = a.family.q;
    stats.r = b.family.q;
    stats.d_bar = pair_scale_floor(a.family, b.family);
    stats.a_cut = threshold_A(stats.d_bar);
    stats.p_product = mertens_product(stats.q, stats.r, stats.a_cut,
                                      MertensVariant::OverPMinus1);
    const double corr1d = step_cross_integral(a.layer, a.coarse, b.layer, b.coarse);
    stats.correlation = pow_int(corr1d, static_cast<unsigned>(k - 1));
    if (with_refinement) {
        const double corr1d_fine = step_cross_integral(a.layer, a.fine, b.layer, b.fine);
        stats.refinement_bias =
            stats.correlation - pow_int(corr1d_fine, static_cast<unsigned>(k - 1));
    }
    stats.product_of_means = a.mean * b.mean;
    stats.ratio =
        stats.product_of_means > 0.0 ? stats.correlation / stats.product_of_means : 0.0;
    if (mc_budget > 0) {
        SplitMix64 rng(derive_seed(12345, stats.q, stats.r));
        double sum = 0.0;
        double sum_sq = 0.0;
        for (uint64_t s = 0; s < mc_budget; ++s) {
            double value = 1.0;
            for (int d = 0; d + 1 < k; ++d) {
                const double x = rng.uniform();
                value *= gamma_one_coordinate(a.family, x) *
                         gamma_one_coordinate(b.family, x);
            }
            sum += value;
            sum_sq += value * value;
        }
        const double n = static_cast<double>(mc_budget);
        stats.mc_value = sum / n;
        const double variance = std::max(0.0, sum_sq / n - stats.mc_value * stats.mc_value);
        stats.mc_error = std::sqrt(variance / n);
    }
    return stats;
}

}  // namespace

PairStats pair_correlation(const BumpFamily& fam_q, const BumpFamily& fam_r, int steps,
                           uint64_t mc_budget) {
    if (fam_q.k != fam_r.k)
        throw std::invalid_argument("pair_correlation: families must share the dimension k");
    const FamilyBundle a = make_bundle(fam_q, steps, true);
    const FamilyBundle b = make_bundle(fam_r, steps, true);
    return pair_stats_from_bundles(a, b, true, mc_budget);
}

std::string pair_stats_to_csv(const std::vector<PairStats>& rows) {
    std::string out = "q,r,D_bar,A_cut,P_product,correlation,product_of_means,ratio\n";
    for (const PairStats& row : rows) {
        out += std::to_string(row.q);
        out += ',';
        out += std::to_string(row.r);
        out += ',';
        out += format_double(row.d_bar);
        out += ',';
        out += format_double(row.a_cut);
        out += ',';
        out += format_double(row.p_product);
        out += ',';
        out += format_double(row.correlation);
        out += ',';
        out += format_double(row.product_of_means);
        out += ',';
        out += format_double(row.ratio);
        out += '\n';
    }
    return out;
}

QuasiIndependence quasi_independence_ratio(const PsiSpec& psi, int k, uint64_t Q, int steps,
                                           double epsilon,
                                           std::vector<PairStats>* collect) {
    if (k < 2) throw std::invalid_argument("quasi_independence_ratio: k must be >= 2");
    if (Q == 0) throw std::invalid_argument("quasi_independence_ratio: Q must be >= 1");
    if (steps < 1) throw std::invalid_argument("quasi_independence_ratio: steps must be >= 1");

    QuasiIndependence result;
    std::vector<FamilyBundle> bundles;
    KahanSum correlation_sum;
    KahanSum mean_sum;

    std::vector<uint64_t> checkpoints;
    for (uint64_t c = 1; c <= Q; c *= 2) {
        checkpoints.push_back(c);
        if (c > Q / 2) break;
    }
    if (checkpoints.empty() || checkpoints.back() != Q) checkpoints.push_back(Q);
    std::size_t next_checkpoint = 0;

    auto flush_checkpoints = [&](uint64_t upto) {
        while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] <= upto) {
            const double means = mean_sum.total();
            if (means > 0.0) {
                result.trajectory.emplace_back(checkpoints[next_checkpoint],
                                               correlation_sum.total() / (means * means));
            }
            ++next_checkpoint;
        }
    };

    const TotientTable phi = totient_sieve(Q);
    for (uint64_t q = 1; q <= Q; ++q) {
        const double psi_q = eval_psi(psi, q);
        if (psi_q == 0.0) continue;
        flush_checkpoints(q - 1);
        const BumpFamily family = make_bump_family(q, k, psi_q, epsilon);
        // phi(q)/q <= 1/4^(k-1), tested in exact integer arithmetic
        if (2 * (k - 1) >= 64 ||
            (static_cast<unsigned __int128>(phi(q)) << (2 * (k - 1))) >
                static_cast<unsigned __int128>(q))
            result.rho_condition_met = false;
        FamilyBundle bundle = make_bundle(family, steps, collect != nullptr);
        for (const FamilyBundle& other : bundles) {
            if (collect != nullptr) {
                PairStats stats = pair_stats_from_bundles(other, bundle, true, 0);
                correlation_sum.add(2.0 * stats.correlation);
                collect->push_back(stats);
            } else {
                const double corr1d =
                    step_cross_integral(other.layer, other.coarse, bundle.layer, bundle.coarse);
                correlation_sum.add(2.0 * pow_int(corr1d, static_cast<unsigned>(k - 1)));
            }
        }
        if (collect != nullptr) {
            PairStats stats = pair_stats_from_bundles(bundle, bundle, true, 0);
            correlation_sum.add(stats.correlation);
            collect->push_back(stats);
        } else {
            const double corr1d =
                step_cross_integral(bundle.layer, bundle.coarse, bundle.layer, bundle.coarse);
            correlation_sum.add(pow_int(corr1d, static_cast<unsigned>(k - 1)));
        }
        mean_sum.add(bundle.mean);
        ++result.support_count;
        bundles.push_back(std::move(bundle));
    }
    flush_checkpoints(Q);

    result.correlation_sum = correlation_sum.total();
    result.mean_sum = mean_sum.total();
    if (!(result.mean_sum > 0.0))
        throw UndefinedRatio("quasi_independence_ratio: psi vanishes on [1, Q]");
    result.ratio = result.correlation_sum / (result.mean_sum * result.mean_sum);
    return result;
}

ScaleEquivalence scale_equivalence_report(uint64_t q, uint64_t r, const PsiSpec& psi,
                                          const PsiSpec& chi, double c1, double c2) {
    if (q == 0 || r == 0)
        throw std::invalid_argument("scale_equivalence_report: q and r must be >= 1");
    if (!(c1 > 0.0) || !(c2 >= c1) || !std::isfinite(c2))
        throw std::invalid_argument("scale_equivalence_report: need 0 < c1 <= c2 < inf");
    const double psi_vals[2] = {eval_psi(psi, q), eval_psi(psi, r)};
    const double chi_vals[2] = {eval_psi(chi, q), eval_psi(chi, r)};
    for (int i = 0; i < 2; ++i) {
        if (!(c1 * chi_vals[i] <= psi_vals[i] && psi_vals[i] <= c2 * chi_vals[i]))
            throw std::invalid_argument(
                "scale_equivalence_report: c1*chi <= psi <= c2*chi fails at q or r");
    }
    ScaleEquivalence report;
    report.d_psi = pair_scale(q, r, psi_vals[0], psi_vals[1]);
    report.d_chi = pair_scale(q, r, chi_vals[0], chi_vals[1]);
    report.log_ratio = std::log(report.d_psi + 2.0) / std::log(report.d_chi + 2.0);
    const double a_psi = threshold_A(report.d_psi);
    const double a_chi = threshold_A(report.d_chi);
    const double over_p_psi = mertens_product(q, r, a_psi, MertensVariant::OverP);
    const double over_p_chi = mertens_product(q, r, a_chi, MertensVariant::OverP);
    report.product_ratio = over_p_psi / over_p_chi;
    report.residual_scaled = std::abs(report.product_ratio - 1.0) * std::log(report.d_psi + 2.0);
    report.tail = mertens_product(q, r, a_psi, MertensVariant::OverPSquaredMinus1);
    report.tail_bound = 1.0 + 1.0 / a_psi;
    const double combined = mertens_product(q, r, a_psi, MertensVariant::OverPMinus1);
    report.identity_gap = std::abs(combined - over_p_psi * report.tail) / combined;
    return report;
}

ChiReport chi_and_x(const PsiSpec& psi, int k, uint64_t Q) {
    if (k < 2) throw std::invalid_argument("chi_and_x: k must be >= 2");
    if (Q == 0) throw std::invalid_argument("chi_and_x: Q must be >= 1");
    ChiReport report;
    report.rows.reserve(Q);
    const TotientTable phi = totient_sieve(Q);
    KahanSum x_sum;
    KahanSum series;
    for (uint64_t q = 1; q <= Q; ++q) {
        ChiRow row;
        row.q = q;
        row.psi_q = eval_psi(psi, q);
        if (row.psi_q > 0.0) {
            const BumpFamily family = make_bump_family(q, k, row.psi_q, 0.0);
            row.g = family.g;
            row.gamma_mean_q = gamma_mean(family);
            row.chi = row.gamma_mean_q * static_cast<double>(q) /
                      static_cast<double>(phi(q));
            row.displayed = pow_int(family.g * (1.0 + 0.5 * std::log(1.0 / family.g)),
                                    static_cast<unsigned>(k - 1));
            const double ratio = static_cast<double>(phi(q)) / static_cast<double>(q);
            const double term = pow_int(ratio, static_cast<unsigned>(k)) * row.psi_q *
                                pow_int(std::log(1.0 / (ratio * row.psi_q)),
                                        static_cast<unsigned>(k - 1));
            series.add(term);
            x_sum.add(row.gamma_mean_q);
        }
        report.rows.push_back(row);
    }
    report.x_sum = x_sum.total();
    report.series_lower = series.total();
    return report;
}

}  // namespace copra
