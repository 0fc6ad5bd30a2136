#pragma once

#include <vector>

#include "linscale/contour.hpp"

namespace linscale {

/// Horizontal bbox extent of a tick contour.
int tick_length(const Contour& c);

struct MarkerGroup {
    std::vector<Contour> members;  // longest first
    int representative_length = 0;
};

struct MarkerPosition {
    double y = 0.0;  // vertical centre of the bbox
    int length = 0;
    int x_min = 0;
    int x_max = 0;
};

/// Sorts by length and opens a new group whenever a step down exceeds
/// `jump` times the previous length. Groups come back longest first.
std::vector<MarkerGroup> group_by_relative_length(std::vector<Contour> linear, double jump = 0.15);

/// Positions of the first group, ascending in y; ticks whose centres lie within
/// `merge_px` are merged (mean y, max length).
std::vector<MarkerPosition> major_markers(const std::vector<MarkerGroup>& groups, double merge_px = 2.0);

/// Median gap between consecutive majors.
double median_spacing(const std::vector<MarkerPosition>& majors);

/// Throws TooFewMajors when fewer than `min_count` are present.
void require_majors(const std::vector<MarkerPosition>& majors, std::size_t min_count = 2);

}  // namespace linscale
