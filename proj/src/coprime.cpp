#include "copra/coprime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "copra/arithmetic.hpp"
#include "copra/summation.hpp"

namespace copra {

CoprimeLayer coprime_layer(std::uint64_t q) {
    if (q == 0) throw std::invalid_argument("coprime_layer: q must be >= 1");
    CoprimeLayer layer;
    layer.q = q;
    if (q == 1) {
        layer.residues = {0};
        layer.gaps = {1};
        return layer;
    }
    std::vector<char> shares_factor(q, 0);
    for (const PrimePower& pp : factorize(q).factors) {
        for (std::uint64_t m = 0; m < q; m += pp.prime) shares_factor[m] = 1;
    }
    for (std::uint64_t a = 1; a < q; ++a)
        if (!shares_factor[a]) layer.residues.push_back(a);
    layer.gaps.reserve(layer.residues.size());
    for (std::size_t i = 0; i + 1 < layer.residues.size(); ++i)
        layer.gaps.push_back(layer.residues[i + 1] - layer.residues[i]);
    layer.gaps.push_back(q - layer.residues.back() + layer.residues.front());
    return layer;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> gap_histogram(const CoprimeLayer& layer) {
    std::vector<std::uint64_t> sorted = layer.gaps;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::pair<std::uint64_t, std::uint64_t>> hist;
    for (std::uint64_t g : sorted) {
        if (!hist.empty() && hist.back().first == g) {
            ++hist.back().second;
        } else {
            hist.emplace_back(g, 1);
        }
    }
    return hist;
}

namespace {

bool coprime_to(std::int64_t p, std::uint64_t q) {
    std::int64_t r = p % static_cast<std::int64_t>(q);
    if (r < 0) r += static_cast<std::int64_t>(q);
    return std::gcd(static_cast<std::uint64_t>(r), q) == 1;
}

// Collects the two nearest coprime integers at or below `from` (walking
// down) or strictly above it (walking up).
void two_nearest_coprime(std::uint64_t q, std::int64_t from, int direction,
                         std::int64_t out[2]) {
    int found = 0;
    for (std::int64_t p = from; found < 2; p += direction) {
        if (coprime_to(p, q)) out[found++] = p;
    }
}

}  // namespace

double coprime_distance(std::uint64_t q, double x) {
    if (q == 0) throw std::invalid_argument("coprime_distance: q must be >= 1");
    if (!std::isfinite(x)) throw std::invalid_argument("coprime_distance: x must be finite");
    double w = wrap_unit(x);
    double y = static_cast<double>(q) * w;
    std::int64_t n0 = static_cast<std::int64_t>(std::floor(y));
    std::int64_t below[2], above[2];
    two_nearest_coprime(q, n0, -1, below);
    two_nearest_coprime(q, n0 + 1, +1, above);
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t p : below) best = std::min(best, y - static_cast<double>(p));
    for (std::int64_t p : above) best = std::min(best, static_cast<double>(p) - y);
    return best;
}

double coprime_distance_exact(std::uint64_t q, std::int64_t num, std::uint64_t den) {
    if (q == 0) throw std::invalid_argument("coprime_distance_exact: q must be >= 1");
    if (den == 0) throw std::invalid_argument("coprime_distance_exact: den must be >= 1");
    using Wide = __int128;
    Wide n = static_cast<Wide>(q) * num;    // q*x = n/den
    Wide d = static_cast<Wide>(den);
    Wide floor_qx = n >= 0 ? n / d : -((-n + d - 1) / d);
    std::int64_t n0 = static_cast<std::int64_t>(floor_qx);
    std::int64_t below[2], above[2];
    two_nearest_coprime(q, n0, -1, below);
    two_nearest_coprime(q, n0 + 1, +1, above);
    Wide best = -1;
    auto consider = [&](std::int64_t p) {
        Wide diff = n - static_cast<Wide>(p) * d;
        if (diff < 0) diff = -diff;
        if (best < 0 || diff < best) best = diff;
    };
    for (std::int64_t p : below) consider(p);
    for (std::int64_t p : above) consider(p);
    return static_cast<double>(best) / static_cast<double>(den);
}

double sublevel_measure(const CoprimeLayer& layer, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("sublevel_measure: t must be >= 0");
    if (t == 0.0) return 0.0;
    auto hist = gap_histogram(layer);
    double twot = 2.0 * t;
    double min_gap = static_cast<double>(hist.front().first);
    double max_gap = static_cast<double>(hist.back().first);
    if (twot >= max_gap) return 1.0;
    double phi = static_cast<double>(layer.residues.size());
    double q = static_cast<double>(layer.q);
    if (twot <= min_gap) return 2.0 * t * phi / q;
    KahanSum sum;
    for (const auto& [g, count] : hist) {
        if (static_cast<double>(g) <= twot) {
            sum.add(static_cast<double>(g * count));
        } else {
            sum.add(twot * static_cast<double>(count));
        }
    }
    return sum.total() / q;
}

double sublevel_measure(std::uint64_t q, double t) {
    return sublevel_measure(coprime_layer(q), t);
}

CoprimeArcUnion interval_union_around_coprime(const CoprimeLayer& layer, double radius) {
    if (!(radius >= 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("interval_union_around_coprime: radius must be finite and >= 0");
    std::vector<Arc> arcs;
    arcs.reserve(layer.residues.size());
    double q = static_cast<double>(layer.q);
    for (std::uint64_t a : layer.residues)
        arcs.push_back({static_cast<double>(a) / q, radius / q});
    ArcMergeResult merged = union_of_arcs(arcs);
    CoprimeArcUnion result;
    result.segments = std::move(merged.segments);
    result.disjoint = radius <= 0.5;
    return result;
}

CoprimeArcUnion interval_union_around_coprime(std::uint64_t q, double radius) {
    return interval_union_around_coprime(coprime_layer(q), radius);
}

}  // namespace copra
