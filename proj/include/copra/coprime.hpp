#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "copra/interval.hpp"

namespace copra {

// The residues modulo q that are coprime to q, with the circular gaps
// between consecutive residues (the wrap-around gap comes last).
struct CoprimeLayer {
    std::uint64_t q = 1;
    std::vector<std::uint64_t> residues;  // sorted, in [0, q)
    std::vector<std::uint64_t> gaps;      // gaps[i] = next residue minus residues[i]
};

CoprimeLayer coprime_layer(std::uint64_t q);

// Distinct gap values with multiplicities, sorted by gap value.
std::vector<std::pair<std::uint64_t, std::uint64_t>> gap_histogram(const CoprimeLayer& layer);

// min over integers p coprime to q of |q*x - p|.  The search window is the
// two nearest coprime integers on each side of q*x; the value is 1-periodic
// in x and may exceed 1/2 (unlike the plain distance to the nearest
// integer).
double coprime_distance(std::uint64_t q, double x);

// Same minimization for rational x = num/den, carried out in exact integer
// arithmetic; only the final division rounds.  den must be >= 1.
double coprime_distance_exact(std::uint64_t q, std::int64_t num, std::uint64_t den);

// Measure of {x in [0,1): coprime distance of (q, x) <= t}: each residue
// interval radius is clipped at half the adjacent gaps.  Exactly 0 at t = 0
// and exactly 1 once 2t reaches the largest gap.
double sublevel_measure(const CoprimeLayer& layer, double t);
double sublevel_measure(std::uint64_t q, double t);

// The union of arcs [a/q - radius/q, a/q + radius/q] over residues a coprime
// to q.  For radius <= 1/2 the arcs are disjoint by construction
// (consecutive coprime residues differ by at least 1); larger radii are
// still merged correctly but lose that guarantee.
struct CoprimeArcUnion {
    IntervalUnion segments;
    bool disjoint = true;  // the radius <= 1/2 disjointness guarantee held
};

CoprimeArcUnion interval_union_around_coprime(std::uint64_t q, double radius);
CoprimeArcUnion interval_union_around_coprime(const CoprimeLayer& layer, double radius);

}  // namespace copra
