#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "copra/coprime.hpp"

namespace copra {

// Which approximation set on the k-torus is being measured, for a single
// denominator q and threshold value psi_q = psi(q).
//
//   NonCoprime    : all x with prod_i ||q x_i|| <= psi_q, numerators free.
//   Coprime       : all x with prod_i dist'(q, x_i) <= psi_q, where dist' is
//                   the distance to the nearest fraction a/q with gcd(a,q)=1
//                   (scaled by q; see coprime_distance).
//   StarPartition : the union over coprime numerator tuples of the central
//                   hyperbola piece around (a_1/q, ..., a_k/q); equivalently
//                   the NonCoprime set restricted to points whose nearest
//                   lattice center has all coordinates coprime to q.
enum class SetVariant {
  NonCoprime,
  Coprime,
  StarPartition,
};

enum class MeasureMethod {
  ExactClosedForm,
  ExactPiecewiseIntegral,
  Quadrature,
  MonteCarlo,
};

struct SetDescriptor {
  uint64_t q = 1;
  double psi_q = 0.0;
  int k = 2;
  SetVariant variant = SetVariant::NonCoprime;
};

struct MeasureResult {
  double value = 0.0;
  MeasureMethod method = MeasureMethod::ExactClosedForm;
  // Upper bound on |value - true measure|. Zero for exact methods; the
  // quadrature tolerance actually achieved; one standard error for MC.
  double error_bound = 0.0;
  // Sample count (Monte Carlo) or integrand evaluation count (quadrature);
  // zero for closed forms.
  uint64_t samples = 0;
};

// Volume of {v in [0,1]^k : v_1 * ... * v_k <= z}, clamped so that z <= 0
// gives 0 and z >= 1 gives 1.  Closed form z * sum_{j<k} log(1/z)^j / j!.
double clipped_volume(int k, double z);

// Lebesgue measure of the NonCoprime set.  Independent of q (bitwise: q is
// validated but never enters the arithmetic); equals clipped_volume(k,
// 2^k * psi_q) and is exactly 1.0 whenever psi_q >= 1/4 for k = 2.
double measure_non_coprime(uint64_t q, double psi_q, int k);

// Measure of one star cell: measure_non_coprime(q, psi_q, k) / q^k.
double star_measure(uint64_t q, double psi_q, int k);

// Measure of the StarPartition set: phi(q)^k * star_measure(q, psi_q, k).
double measure_star_partition(uint64_t q, double psi_q, int k);

// Exact measure of the Coprime set for k = 2, via the coprime gap histogram
// and closed-form piecewise integrals.  q = 1 short-circuits to
// measure_non_coprime(1, psi_q, 2) (the sets coincide pointwise).
double measure_coprime_exact(uint64_t q, double psi_q);
double measure_coprime_exact(const CoprimeLayer& layer, double psi_q);

// Measure of the Coprime set for k >= 3 by deterministic adaptive quadrature
// over the outer coordinates, with exact k = 2 values innermost.  The result's
// error_bound is the achieved bound (<= tolerance on success).  Throws
// BudgetExceeded (carrying the best estimate and achieved bound) if the node
// budget runs out before reaching the tolerance.
MeasureResult measure_coprime_quadrature(uint64_t q, double psi_q, int k,
                                         double tolerance);

// Monte Carlo estimate of any variant's measure with n uniform samples.
// Deterministic for a fixed (seed, q, k, variant); error_bound is one
// binomial standard error sqrt(p(1-p)/n).
MeasureResult measure_mc(const SetDescriptor& set, uint64_t n, uint64_t seed);

// One axis-aligned box cell of the geometry dump for k = 2: center
// (cx, cy) = (a/q, b/q) with per-direction half-widths ("arms").  Coprime
// cells are the Voronoi boxes of coprime fractions, so their arms are the
// adjacent half-gaps; non-coprime cells all have arms 1/(2q).
struct StarCell {
  uint64_t q = 1;
  uint64_t a = 0;
  uint64_t b = 0;
  double cx = 0.0;
  double cy = 0.0;
  double arm_left = 0.0;
  double arm_right = 0.0;
  double arm_down = 0.0;
  double arm_up = 0.0;
};

// All cells for denominator q, ordered by (a, b) ascending.  psi_q = 0 means
// the approximation set is empty, so no cells are emitted.  coprime selects
// the phi(q)^2 coprime-center cells; otherwise all q^2 centers are emitted.
std::vector<StarCell> star_cells(uint64_t q, double psi_q, bool coprime);

// CSV with header q,a,b,cx,cy,arm_left,arm_right,arm_down,arm_up.
// Byte-stable for fixed inputs.
std::string star_cells_to_csv(const std::vector<StarCell>& cells);

}  // namespace copra
