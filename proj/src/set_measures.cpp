#include "copra/set_measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "copra/arithmetic.hpp"
#include "copra/errors.hpp"
#include "copra/io.hpp"
#include "copra/piecewise.hpp"
#include "copra/rng.hpp"
#include "copra/summation.hpp"

namespace copra {

namespace {

void check_q(uint64_t q, const char* where) {
    if (q == 0) throw std::invalid_argument(std::string(where) + ": q must be >= 1");
}

void check_k(int k, int min_k, const char* where) {
    if (k < min_k)
        throw std::invalid_argument(std::string(where) + ": k must be >= " +
                                    std::to_string(min_k));
}

void check_psi(double psi_q, const char* where) {
    if (!std::isfinite(psi_q) || psi_q < 0.0 || psi_q > 0.5)
        throw std::invalid_argument(std::string(where) + ": psi value must lie in [0, 1/2]");
}

}  // namespace

double clipped_volume(int k, double z) {
    check_k(k, 1, "clipped_volume");
    if (std::isnan(z)) throw std::invalid_argument("clipped_volume: z must not be NaN");
    if (z <= 0.0) return 0.0;
    if (z >= 1.0) return 1.0;
    // z * sum_{j=0}^{k-1} log(1/z)^j / j!, built term by term so each factor
    // L/j is applied once.
    const double big = -std::log(z);
    double term = 1.0;
    double sum = 1.0;
    for (int j = 1; j < k; ++j) {
        term *= big / static_cast<double>(j);
        sum += term;
    }
    return z * sum;
}

double measure_non_coprime(uint64_t q, double psi_q, int k) {
    check_q(q, "measure_non_coprime");
    check_k(k, 1, "measure_non_coprime");
    check_psi(psi_q, "measure_non_coprime");
    // 2^k * psi scales exactly (power-of-two multiply), so the result is
    // bitwise independent of q and saturates to exactly 1.0 once
    // psi_q >= 2^-k.
    return clipped_volume(k, std::ldexp(psi_q, k));
}

double star_measure(uint64_t q, double psi_q, int k) {
    return measure_non_coprime(q, psi_q, k) / pow_int(static_cast<double>(q), static_cast<unsigned>(k));
}

double measure_star_partition(uint64_t q, double psi_q, int k) {
    const double phi = static_cast<double>(totient(q));
    return pow_int(phi, static_cast<unsigned>(k)) * star_measure(q, psi_q, k);
}

namespace {

using GapHistogram = std::vector<std::pair<uint64_t, uint64_t>>;

// Measure of {(x, y) : dist'(q, x) * dist'(q, y) <= t} for any t >= 0 (not
// just t <= 1/2), expressed through the coprime gap histogram.  On a gap of
// length g (in units of 1/q) the coprime distance sweeps 0..g/2 linearly on
// both halves, so with m(t) = sublevel measure the 2-dimensional value is
//   (2/q^2) * sum_g sum_h c_g c_h * Int_0^{g/2} min(h, 2t/x) dx.
// Saturation: once t >= max_gap^2 / 4 every point qualifies, and that branch
// returns the literal 1.0.
double coprime_pair_measure(const CoprimeLayer& layer, const GapHistogram& hist, double t) {
    if (!(t > 0.0)) return 0.0;
    const double max_gap = static_cast<double>(hist.back().first);
    if (t >= max_gap * max_gap / 4.0) return 1.0;
    KahanSum sum;
    for (const auto& [g, cg] : hist) {
        const double half_g = static_cast<double>(g) / 2.0;
        for (const auto& [h, ch] : hist) {
            const double piece =
                integrate_min_const_recip(static_cast<double>(h), 2.0 * t, 0.0, half_g);
            sum.add(static_cast<double>(cg) * static_cast<double>(ch) * piece);
        }
    }
    const double qd = static_cast<double>(layer.q);
    return (2.0 * sum.total()) / (qd * qd);
}

}  // namespace

double measure_coprime_exact(const CoprimeLayer& layer, double psi_q) {
    check_psi(psi_q, "measure_coprime_exact");
    if (psi_q == 0.0) return 0.0;
    if (layer.q == 1) {
        // Every integer is coprime to 1, so the coprime distance equals the
        // plain distance and the sets coincide pointwise; reusing the closed
        // form keeps the equality bitwise.
        return measure_non_coprime(1, psi_q, 2);
    }
    return coprime_pair_measure(layer, gap_histogram(layer), psi_q);
}

double measure_coprime_exact(uint64_t q, double psi_q) {
    check_q(q, "measure_coprime_exact");
    check_psi(psi_q, "measure_coprime_exact");
    if (psi_q == 0.0) return 0.0;
    if (q == 1) return measure_non_coprime(1, psi_q, 2);
    const CoprimeLayer layer = coprime_layer(q);
    return coprime_pair_measure(layer, gap_histogram(layer), psi_q);
}

namespace {

// ---- deterministic adaptive quadrature for dimensions >= 3 ----------------

struct QuadBudget {
    uint64_t evals = 0;
    uint64_t max_evals = 0;
};

// One Simpson interval [a, b] with its value refined one level deeper
// (value = S(a,m) + S(m,b)) and the classical |S2 - S1| / 15 error estimate,
// both already multiplied by the segment weight.
struct QuadNode {
    double a = 0.0;
    double b = 0.0;
    double fa = 0.0;
    double fm = 0.0;
    double fb = 0.0;
    double flm = 0.0;  // f((a+m)/2)
    double frm = 0.0;  // f((m+b)/2)
    double weight = 0.0;
    double value = 0.0;
    double error = 0.0;
};

struct NodeOrder {
    bool operator()(const QuadNode& x, const QuadNode& y) const {
        // Max-heap on error; ties broken by interval position so the
        // refinement order (and therefore the result) is deterministic.
        if (x.error != y.error) return x.error < y.error;
        if (x.a != y.a) return x.a > y.a;
        return x.b > y.b;
    }
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
QuadNode make_node(double a, double b, double fa, double fm, double fb, double weight,
                   const F& f) {
    QuadNode node;
    node.a = a;
    node.b = b;
    node.fa = fa;
    node.fm = fm;
    node.fb = fb;
    node.weight = weight;
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    node.flm = f(lm);
    node.frm = f(rm);
    const double coarse = simpson(a, b, fa, fm, fb);
    const double fine = simpson(a, m, fa, node.flm, fm) + simpson(m, b, fm, node.frm, fb);
    node.value = weight * fine;
    node.error = weight * std::abs(fine - coarse) / 15.0;
    return node;
}

// Integrates sum_s weight_s * Int_{a_s}^{b_s} f, refining whichever interval
// currently carries the largest error estimate, until the total estimate
// drops to `target` or the shared eval budget runs out.
template <typename F>
double adaptive_segments(const std::vector<std::pair<double, double>>& segments,
                         const std::vector<double>& weights, const F& f, double target,
                         QuadBudget& budget, double* achieved) {
    std::priority_queue<QuadNode, std::vector<QuadNode>, NodeOrder> heap;
    double value = 0.0;
    double error = 0.0;
    auto eval = [&](double x) {
        ++budget.evals;
        return f(x);
    };
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto [a, b] = segments[i];
        const double fa = eval(a);
        const double fb = eval(b);
        const double fm = eval(0.5 * (a + b));
        QuadNode node = make_node(a, b, fa, fm, fb, weights[i], eval);
        value += node.value;
        error += node.error;
        heap.push(node);
    }
    while (error > target) {
        if (budget.evals >= budget.max_evals)
            throw BudgetExceeded(
                "measure_coprime_quadrature: evaluation budget exhausted before tolerance",
                value, error);
        QuadNode worst = heap.top();
        heap.pop();
        value -= worst.value;
        error -= worst.error;
        const double m = 0.5 * (worst.a + worst.b);
        QuadNode left =
            make_node(worst.a, m, worst.fa, worst.flm, worst.fm, worst.weight, eval);
        QuadNode right =
            make_node(m, worst.b, worst.fm, worst.frm, worst.fb, worst.weight, eval);
        value += left.value + right.value;
        error += left.error + right.error;
        heap.push(left);
        heap.push(right);
    }
    if (achieved != nullptr) *achieved = error;
    return value;
}

// Measure of the j-dimensional coprime product set at threshold t:
//   M_2 exactly, M_j = (2/q) sum_g c_g Int_0^{g/2} M_{j-1}(t/x) dx for j >= 3.
// Each level spends half its tolerance on its own grid and delegates a
// quarter to the level below (Int of the inner error over x is bounded by
// tol_inner because sum_g c_g * g = q).
double coprime_level_measure(const CoprimeLayer& layer, const GapHistogram& hist, int j,
                             double t, double tolerance, QuadBudget& budget,
                             double* achieved) {
    if (j == 2) {
        if (achieved != nullptr) *achieved = 0.0;
        return coprime_pair_measure(layer, hist, t);
    }
    if (!(t > 0.0)) {
        if (achieved != nullptr) *achieved = 0.0;
        return 0.0;
    }
    const double qd = static_cast<double>(layer.q);
    std::vector<std::pair<double, double>> segments;
    std::vector<double> weights;
    segments.reserve(hist.size());
    weights.reserve(hist.size());
    for (const auto& [g, count] : hist) {
        segments.emplace_back(0.0, static_cast<double>(g) / 2.0);
        weights.push_back(2.0 * static_cast<double>(count) / qd);
    }
    const double inner_tol = tolerance / 4.0;
    auto f = [&](double x) {
        if (x <= 0.0) return 1.0;  // t/x -> inf saturates the inner measure
        return coprime_level_measure(layer, hist, j - 1, t / x, inner_tol, budget, nullptr);
    };
    double grid_error = 0.0;
    const double value =
        adaptive_segments(segments, weights, f, tolerance / 2.0, budget, &grid_error);
    if (achieved != nullptr) *achieved = grid_error + (j >= 4 ? inner_tol : 0.0);
    return value;
}

}  // namespace

MeasureResult measure_coprime_quadrature(uint64_t q, double psi_q, int k, double tolerance) {
    check_q(q, "measure_coprime_quadrature");
    check_k(k, 3, "measure_coprime_quadrature");
    check_psi(psi_q, "measure_coprime_quadrature");
    if (!(tolerance > 0.0) || !std::isfinite(tolerance))
        throw std::invalid_argument("measure_coprime_quadrature: tolerance must be > 0");
    MeasureResult result;
    result.method = MeasureMethod::Quadrature;
    if (psi_q == 0.0) return result;
    const CoprimeLayer layer = coprime_layer(q);
    const GapHistogram hist = gap_histogram(layer);
    QuadBudget budget;
    budget.max_evals = 200000;
    double achieved = 0.0;
    result.value =
        coprime_level_measure(layer, hist, k, psi_q, tolerance, budget, &achieved);
    result.error_bound = achieved;
    result.samples = budget.evals;
    return result;
}

namespace {

double wrapped_distance(double y) {
    // distance from y to the nearest integer
    const double frac = y - std::floor(y);
    return std::min(frac, 1.0 - frac);
}

}  // namespace

MeasureResult measure_mc(const SetDescriptor& set, uint64_t n, uint64_t seed) {
    check_q(set.q, "measure_mc");
    check_k(set.k, 1, "measure_mc");
    check_psi(set.psi_q, "measure_mc");
    if (n == 0) throw std::invalid_argument("measure_mc: need at least one sample");

    // Coprimality lookup for the StarPartition membership test.
    std::vector<char> coprime_to_q;
    if (set.variant == SetVariant::StarPartition) {
        coprime_to_q.assign(set.q, 0);
        const CoprimeLayer layer = coprime_layer(set.q);
        for (uint64_t a : layer.residues) coprime_to_q[a] = 1;
    }

    SplitMix64 rng(derive_seed(seed, set.q,
                               static_cast<uint64_t>(set.variant) * 100 +
                                   static_cast<uint64_t>(set.k)));
    const double qd = static_cast<double>(set.q);
    uint64_t hits = 0;
    for (uint64_t i = 0; i < n; ++i) {
        double product = 1.0;
        bool centers_coprime = true;
        for (int d = 0; d < set.k; ++d) {
            const double x = rng.uniform();
            switch (set.variant) {
                case SetVariant::NonCoprime:
                    product *= wrapped_distance(qd * x);
                    break;
                case SetVariant::Coprime:
                    product *= coprime_distance(set.q, x);
                    break;
                case SetVariant::StarPartition: {
                    product *= wrapped_distance(qd * x);
                    uint64_t a = static_cast<uint64_t>(std::llround(qd * x));
                    if (a >= set.q) a = 0;  // round-up at the right edge wraps
                    if (coprime_to_q[a] == 0) centers_coprime = false;
                    break;
                }
            }
        }
        if (centers_coprime && product <= set.psi_q) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    MeasureResult result;
    result.value = p;
    result.method = MeasureMethod::MonteCarlo;
    result.error_bound = std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    result.samples = n;
    return result;
}

std::vector<StarCell> star_cells(uint64_t q, double psi_q, bool coprime) {
    check_q(q, "star_cells");
    check_psi(psi_q, "star_cells");
    std::vector<StarCell> cells;
    if (psi_q == 0.0) return cells;  // empty approximation set, no cells
    const double qd = static_cast<double>(q);
    if (!coprime) {
        cells.reserve(q * q);
        const double arm = 0.5 / qd;
        for (uint64_t a = 0; a < q; ++a) {
            for (uint64_t b = 0; b < q; ++b) {
                StarCell cell;
                cell.q = q;
                cell.a = a;
                cell.b = b;
                cell.cx = static_cast<double>(a) / qd;
                cell.cy = static_cast<double>(b) / qd;
                cell.arm_left = cell.arm_right = cell.arm_down = cell.arm_up = arm;
                cells.push_back(cell);
            }
        }
        return cells;
    }
    const CoprimeLayer layer = coprime_layer(q);
    const std::size_t count = layer.residues.size();
    // Per residue: half the gap to the previous coprime residue on one side,
    // half the gap to the next on the other (the Voronoi box of a/q among
    // coprime fractions).
    std::vector<double> arm_before(count);
    std::vector<double> arm_after(count);
    for (std::size_t i = 0; i < count; ++i) {
        const uint64_t prev_gap = layer.gaps[(i + count - 1) % count];
        const uint64_t next_gap = layer.gaps[i];
        arm_before[i] = static_cast<double>(prev_gap) / (2.0 * qd);
        arm_after[i] = static_cast<double>(next_gap) / (2.0 * qd);
    }
    cells.reserve(count * count);
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            StarCell cell;
            cell.q = q;
            cell.a = layer.residues[i];
            cell.b = layer.residues[j];
            cell.cx = static_cast<double>(cell.a) / qd;
            cell.cy = static_cast<double>(cell.b) / qd;
            cell.arm_left = arm_before[i];
            cell.arm_right = arm_after[i];
            cell.arm_down = arm_before[j];
            cell.arm_up = arm_after[j];
            cells.push_back(cell);
        }
    }
    return cells;
}

std::string star_cells_to_csv(const std::vector<StarCell>& cells) {
    std::string out = "q,a,b,cx,cy,arm_left,arm_right,arm_down,arm_up\n";
    for (const StarCell& cell : cells) {
        out += std::to_string(cell.q);
        out += ',';
        out += std::to_string(cell.a);
        out += ',';
        out += std::to_string(cell.b);
        out += ',';
        out += format_double(cell.cx);
        out += ',';
        out += format_double(cell.cy);
        out += ',';
        out += format_double(cell.arm_left);
        out += ',';
        out += format_double(cell.arm_right);
        out += ',';
        out += format_double(cell.arm_down);
        out += ',';
        out += format_double(cell.arm_up);
        out += '\n';
    }
    return out;
}

}  // namespace copra
