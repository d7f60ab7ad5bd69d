#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace copra {

// A finite union of disjoint half-open segments [start, end) with
// 0 <= start < end <= 1, sorted by start.  Arcs on the circle R/Z are
// represented by cutting at 0, so an arc across the seam appears as two
// segments.
struct IntervalUnion {
    std::vector<double> starts;
    std::vector<double> ends;

    std::size_t size() const { return starts.size(); }
    bool empty() const { return starts.empty(); }
};

// One circular arc, given by its center and half-width.
struct Arc {
    double center = 0.0;
    double radius = 0.0;
};

// Result of merging arcs into a union: `overlapped` records whether any two
// input arcs had an intersection of positive measure (before merging).
struct ArcMergeResult {
    IntervalUnion segments;
    bool overlapped = false;
};

// Reduces x to the half-open fundamental domain [0, 1).
double wrap_unit(double x);

// Builds the union of circular arcs [center - radius, center + radius).
// Arcs with radius <= 0 contribute nothing; an arc of width 2*radius >= 1
// covers the whole circle.  Overlapping or touching arcs are merged.
ArcMergeResult union_of_arcs(const std::vector<Arc>& arcs);

// Total length of all segments.
double union_measure(const IntervalUnion& u);

// Whether the point x (taken mod 1) lies in the union.
bool union_contains(const IntervalUnion& u, double x);

// Exact measure of the intersection of two unions, by a two-list sweep.
double union_intersection_measure(const IntervalUnion& u, const IntervalUnion& v);

// CSV serialization: header `start,end`, one row per segment, full precision.
std::string union_to_csv(const IntervalUnion& u);

}  // namespace copra
