#include "copra/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "copra/summation.hpp"

namespace copra {

double integrate_min_const_recip(double c, double d, double x0, double x1) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("integrate_min_const_recip: c must be > 0");
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("integrate_min_const_recip: d must be > 0");
    if (!(x0 >= 0.0) || !(x1 >= x0) || !std::isfinite(x1))
        throw std::invalid_argument("integrate_min_const_recip: need 0 <= x0 <= x1 < inf");
    if (x0 == x1) return 0.0;
    double xs = std::clamp(d / c, x0, x1);
    double value = c * (xs - x0);
    if (xs < x1) value += d * std::log(x1 / xs);
    return value;
}

namespace {

void validate_piece(const CurvePiece& p) {
    if (!std::isfinite(p.x0) || !std::isfinite(p.x1) || !(p.x0 < p.x1))
        throw std::invalid_argument("piecewise: piece needs finite x0 < x1");
    switch (p.form) {
        case CurvePiece::Form::Constant:
            if (!(p.c >= 0.0) || !std::isfinite(p.c))
                throw std::invalid_argument("piecewise: constant piece needs c >= 0");
            break;
        case CurvePiece::Form::Reciprocal:
            if (!(p.d >= 0.0) || !std::isfinite(p.d))
                throw std::invalid_argument("piecewise: reciprocal piece needs d >= 0");
            if (!(p.x0 > 0.0))
                throw std::invalid_argument("piecewise: reciprocal piece needs x0 > 0");
            break;
        case CurvePiece::Form::Clipped:
            if (!(p.c > 0.0) || !(p.d > 0.0) || !std::isfinite(p.c) || !std::isfinite(p.d))
                throw std::invalid_argument("piecewise: clipped piece needs c > 0 and d > 0");
            break;
    }
}

}  // namespace

PiecewiseCurve make_piecewise(std::vector<CurvePiece> pieces) {
    if (pieces.empty()) throw std::invalid_argument("piecewise: no pieces");
    for (const CurvePiece& p : pieces) validate_piece(p);
    for (std::size_t i = 1; i < pieces.size(); ++i) {
        if (pieces[i].x0 != pieces[i - 1].x1)
            throw std::invalid_argument("piecewise: pieces must be contiguous and sorted");
    }
    PiecewiseCurve curve;
    curve.domain_lo = pieces.front().x0;
    curve.domain_hi = pieces.back().x1;
    curve.pieces = std::move(pieces);
    return curve;
}

double piecewise_eval(const PiecewiseCurve& curve, double x) {
    if (!(x >= curve.domain_lo) || !(x < curve.domain_hi))
        throw std::invalid_argument("piecewise_eval: x outside domain");
    // Last piece whose x0 is <= x.
    auto it = std::upper_bound(curve.pieces.begin(), curve.pieces.end(), x,
                               [](double v, const CurvePiece& p) { return v < p.x0; });
    const CurvePiece& p = *(it - 1);
    switch (p.form) {
        case CurvePiece::Form::Constant:
            return p.c;
        case CurvePiece::Form::Reciprocal:
            return p.d / x;
        case CurvePiece::Form::Clipped:
            if (x <= 0.0) return p.c;
            return std::min(p.c, p.d / x);
    }
    throw std::logic_error("piecewise_eval: unreachable");
}

double piecewise_integral(const PiecewiseCurve& curve) {
    KahanSum sum;
    for (const CurvePiece& p : curve.pieces) {
        switch (p.form) {
            case CurvePiece::Form::Constant:
                sum.add(p.c * (p.x1 - p.x0));
                break;
            case CurvePiece::Form::Reciprocal:
                sum.add(p.d * std::log(p.x1 / p.x0));
                break;
            case CurvePiece::Form::Clipped:
                sum.add(integrate_min_const_recip(p.c, p.d, p.x0, p.x1));
                break;
        }
    }
    return sum.total();
}

}  // namespace copra
