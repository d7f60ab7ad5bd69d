#include "copra/interval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "copra/io.hpp"
#include "copra/summation.hpp"

namespace copra {

double wrap_unit(double x) {
    double w = x - std::floor(x);
    if (w >= 1.0) w = 0.0;  // guards x just below an integer rounding up
    return w;
}

namespace {

struct Segment {
    double start;
    double end;
};

// Cuts one arc at the seam into 1 or 2 raw segments inside [0, 1).
void append_arc_segments(const Arc& arc, std::vector<Segment>& out) {
    if (!(arc.radius > 0.0)) return;
    if (2.0 * arc.radius >= 1.0) {
        out.push_back({0.0, 1.0});
        return;
    }
    double s = wrap_unit(arc.center - arc.radius);
    double e = wrap_unit(arc.center + arc.radius);
    if (s < e) {
        out.push_back({s, e});
    } else {
        // The arc crosses the seam (or lands exactly on it).
        if (s < 1.0) out.push_back({s, 1.0});
        if (e > 0.0) out.push_back({0.0, e});
        if (s == e) {
            // Width ~ 1 after rounding: treat as full circle for safety.
            out.clear();
            out.push_back({0.0, 1.0});
        }
    }
}

}  // namespace

ArcMergeResult union_of_arcs(const std::vector<Arc>& arcs) {
    for (const Arc& a : arcs) {
        if (!std::isfinite(a.center) || !std::isfinite(a.radius) || a.radius < 0.0)
            throw std::invalid_argument("union_of_arcs: arcs need finite center and radius >= 0");
    }
    std::vector<Segment> raw;
    raw.reserve(arcs.size() + 1);
    for (const Arc& a : arcs) append_arc_segments(a, raw);

    ArcMergeResult result;
    if (raw.empty()) return result;

    std::sort(raw.begin(), raw.end(),
              [](const Segment& a, const Segment& b) {
                  return a.start < b.start || (a.start == b.start && a.end < b.end);
              });

    std::vector<Segment> merged;
    merged.push_back(raw.front());
    for (std::size_t i = 1; i < raw.size(); ++i) {
        Segment& cur = merged.back();
        if (raw[i].start < cur.end) result.overlapped = true;
        if (raw[i].start <= cur.end) {
            cur.end = std::max(cur.end, raw[i].end);
        } else {
            merged.push_back(raw[i]);
        }
    }

    result.segments.starts.reserve(merged.size());
    result.segments.ends.reserve(merged.size());
    for (const Segment& s : merged) {
        result.segments.starts.push_back(s.start);
        result.segments.ends.push_back(s.end);
    }
    return result;
}

double union_measure(const IntervalUnion& u) {
    KahanSum sum;
    for (std::size_t i = 0; i < u.size(); ++i) sum.add(u.ends[i] - u.starts[i]);
    return sum.total();
}

bool union_contains(const IntervalUnion& u, double x) {
    if (u.empty()) return false;
    double w = wrap_unit(x);
    // Last segment whose start is <= w.
    auto it = std::upper_bound(u.starts.begin(), u.starts.end(), w);
    if (it == u.starts.begin()) return false;
    std::size_t idx = static_cast<std::size_t>((it - u.starts.begin()) - 1);
    return w < u.ends[idx];
}

double union_intersection_measure(const IntervalUnion& u, const IntervalUnion& v) {
    KahanSum sum;
    std::size_t i = 0, j = 0;
    while (i < u.size() && j < v.size()) {
        double lo = std::max(u.starts[i], v.starts[j]);
        double hi = std::min(u.ends[i], v.ends[j]);
        if (hi > lo) sum.add(hi - lo);
        if (u.ends[i] < v.ends[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum.total();
}

std::string union_to_csv(const IntervalUnion& u) {
    std::string out = "start,end\n";
    for (std::size_t i = 0; i < u.size(); ++i) {
        out += format_double(u.starts[i]);
        out += ',';
        out += format_double(u.ends[i]);
        out += '\n';
    }
    return out;
}

}  // namespace copra
