#pragma once

#include <vector>

namespace copra {

// Exact integral of min(c, d/x) over [x0, x1], for c > 0, d > 0 and
// 0 <= x0 <= x1.  The integrand is the constant c up to the breakpoint
// x* = d/c and d/x beyond it; x0 = 0 is allowed because the constant branch
// applies near the origin.  Throws std::invalid_argument on c <= 0, d <= 0,
// or a malformed interval.
double integrate_min_const_recip(double c, double d, double x0, double x1);

// One piece of a piecewise curve on [x0, x1): a constant value c, a
// reciprocal d/x, or their pointwise minimum min(c, d/x).
struct CurvePiece {
    enum class Form { Constant, Reciprocal, Clipped };

    double x0 = 0.0;
    double x1 = 0.0;
    Form form = Form::Constant;
    double c = 0.0;  // constant level (Constant, Clipped)
    double d = 0.0;  // reciprocal coefficient (Reciprocal, Clipped)
};

// A nonnegative curve given by sorted, contiguous pieces covering
// [domain_lo, domain_hi).  Reciprocal pieces must start at x0 > 0; clipped
// pieces may start at 0 (the constant branch applies there).
struct PiecewiseCurve {
    std::vector<CurvePiece> pieces;
    double domain_lo = 0.0;
    double domain_hi = 0.0;
};

// Validates and assembles a curve from pieces; throws std::invalid_argument
// if the pieces are empty, unsorted, overlapping, gapped, carry negative
// coefficients, or place a reciprocal at x0 <= 0.
PiecewiseCurve make_piecewise(std::vector<CurvePiece> pieces);

// Pointwise value at x inside the domain (throws outside it).
double piecewise_eval(const PiecewiseCurve& curve, double x);

// Exact integral over the full domain, in closed form piece by piece.
double piecewise_integral(const PiecewiseCurve& curve);

}  // namespace copra
