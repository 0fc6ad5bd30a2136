#include "linscale/marker.hpp"

#include <algorithm>
#include <cmath>

#include "linscale/errors.hpp"

namespace linscale {

int tick_length(const Contour& c) { return c.bbox.width_extent(); }

std::vector<MarkerGroup> group_by_relative_length(std::vector<Contour> linear, double jump) {
    if (linear.empty()) throw Error(Stage::markers, "NoContours", "no linear contours to group");
    std::stable_sort(linear.begin(), linear.end(),
                     [](const Contour& a, const Contour& b) { return tick_length(a) > tick_length(b); });

    std::vector<MarkerGroup> groups;
    int prev = 0;
    for (auto& c : linear) {
        const int len = tick_length(c);
        if (groups.empty() || (prev - len) > jump * prev) {
            groups.push_back({});
            groups.back().representative_length = len;
        }
        groups.back().members.push_back(std::move(c));
        prev = len;
    }
    return groups;
}

std::vector<MarkerPosition> major_markers(const std::vector<MarkerGroup>& groups, double merge_px) {
    std::vector<MarkerPosition> pos;
    if (groups.empty()) return pos;
    for (const auto& c : groups.front().members) {
        pos.push_back({(c.bbox.y_min + c.bbox.y_max) / 2.0, tick_length(c), c.bbox.x_min, c.bbox.x_max});
    }
    std::sort(pos.begin(), pos.end(), [](const MarkerPosition& a, const MarkerPosition& b) { return a.y < b.y; });

    std::vector<MarkerPosition> merged;
    std::size_t i = 0;
    while (i < pos.size()) {
        std::size_t j = i + 1;
        while (j < pos.size() && pos[j].y - pos[j - 1].y <= merge_px) ++j;
        MarkerPosition m = pos[i];
        double sum = 0;
        for (std::size_t k = i; k < j; ++k) {
            sum += pos[k].y;
            m.length = std::max(m.length, pos[k].length);
            m.x_min = std::min(m.x_min, pos[k].x_min);
            m.x_max = std::max(m.x_max, pos[k].x_max);
        }
        m.y = sum / double(j - i);
        merged.push_back(m);
        i = j;
    }
    return merged;
}

double median_spacing(const std::vector<MarkerPosition>& majors) {
    if (majors.size() < 2) return 0.0;
    std::vector<double> gaps;
    for (std::size_t i = 1; i < majors.size(); ++i) gaps.push_back(majors[i].y - majors[i - 1].y);
    std::sort(gaps.begin(), gaps.end());
    const std::size_t n = gaps.size();
    return n % 2 ? gaps[n / 2] : (gaps[n / 2 - 1] + gaps[n / 2]) / 2.0;
}

void require_majors(const std::vector<MarkerPosition>& majors, std::size_t min_count) {
    if (majors.size() < min_count) {
        throw Error(Stage::markers, "TooFewMajors",
                    "found " + std::to_string(majors.size()) + " major markers, need " + std::to_string(min_count));
    }
}

}  // namespace linscale
