#include <random>

#include "doctest.h"
#include "linscale/errors.hpp"
#include "linscale/marker.hpp"
#include "linscale/synth.hpp"

using namespace linscale;

namespace {

Contour tick(int length, int y, int x0 = 10) {
    Contour c;
    c.points = {{x0, y}, {x0 + length, y}, {x0 + length, y + 2}, {x0, y + 2}};
    c.area = (length + 1) * 3;
    c.perimeter = 2.0 * length + 4;
    c.update_bbox();
    return c;
}

std::vector<std::vector<int>> lengths_of(const std::vector<MarkerGroup>& groups) {
    std::vector<std::vector<int>> out;
    for (const auto& g : groups) {
        out.emplace_back();
        for (const auto& c : g.members) out.back().push_back(tick_length(c));
    }
    return out;
}

std::vector<Contour> ticks_with_lengths(const std::vector<int>& lengths) {
    std::vector<Contour> out;
    for (std::size_t i = 0; i < lengths.size(); ++i) out.push_back(tick(lengths[i], int(i) * 10));
    return out;
}

}  // namespace

TEST_SUITE("marker") {

TEST_CASE("15 percent jump splits majors from minors") {
    auto g = group_by_relative_length(ticks_with_lengths({40, 100, 97, 39, 98}));
    CHECK(lengths_of(g) == std::vector<std::vector<int>>{{100, 98, 97}, {40, 39}});
    CHECK(g[0].representative_length == 100);
    CHECK(g[1].representative_length == 40);
}

TEST_CASE("equal lengths form one group") {
    auto g = group_by_relative_length(ticks_with_lengths({50, 50, 50, 50}));
    REQUIRE(g.size() == 1);
    CHECK(g[0].members.size() == 4);
}

TEST_CASE("jump boundary") {
    CHECK(group_by_relative_length(ticks_with_lengths({100, 84})).size() == 2);
    CHECK(group_by_relative_length(ticks_with_lengths({100, 85})).size() == 1);
    CHECK(group_by_relative_length(ticks_with_lengths({100, 86})).size() == 1);
}

TEST_CASE("jump compares against the previous contour") {
    // 100 -> 88 -> 77 -> 68: each step is under 15% of its predecessor.
    CHECK(group_by_relative_length(ticks_with_lengths({100, 88, 77, 68})).size() == 1);
}

TEST_CASE("no contours is an error") {
    try {
        group_by_relative_length({});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.stage() == Stage::markers);
        CHECK(e.code() == "NoContours");
    }
}

TEST_CASE("worked example positions") {
    std::vector<Contour> cs;
    for (int y : {201, 6, 136, 266, 73}) cs.push_back(tick(60, y - 1));
    for (int y : {20, 35, 50, 90}) cs.push_back(tick(25, y - 1));
    auto majors = major_markers(group_by_relative_length(cs));
    REQUIRE(majors.size() == 5);
    const double expect[] = {6, 73, 136, 201, 266};
    for (int i = 0; i < 5; ++i) CHECK(majors[i].y == doctest::Approx(expect[i]));
    CHECK(majors[0].length == 60);
    CHECK(median_spacing(majors) == doctest::Approx(65.0));
}

TEST_CASE("near-duplicate majors merge") {
    std::vector<Contour> cs{tick(60, 99), tick(58, 100, 80), tick(59, 200)};
    auto majors = major_markers(group_by_relative_length(cs));
    REQUIRE(majors.size() == 2);
    CHECK(majors[0].y == doctest::Approx(100.5));
    CHECK(majors[0].length == 60);
    CHECK(majors[0].x_min == 10);
    CHECK(majors[0].x_max == 138);
    for (std::size_t i = 1; i < majors.size(); ++i) CHECK(majors[i].y > majors[i - 1].y);
}

TEST_CASE("single group of three, sorted by y") {
    auto majors = major_markers(group_by_relative_length({tick(30, 50), tick(30, 10), tick(30, 30)}));
    REQUIRE(majors.size() == 3);
    CHECK(majors[0].y < majors[1].y);
    CHECK(majors[1].y < majors[2].y);
}

TEST_CASE("require_majors") {
    CHECK_NOTHROW(require_majors({{1, 1, 0, 1}, {2, 1, 0, 1}}));
    try {
        require_majors({{1, 1, 0, 1}});
        FAIL("expected a throw");
    } catch (const Error& e) {
        CHECK(e.stage() == Stage::markers);
        CHECK(e.code() == "TooFewMajors");
    }
}

TEST_CASE("grouping is scale invariant") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> major(90, 110), minor(30, 45);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<int> base;
        for (int i = 0; i < 5; ++i) base.push_back(major(rng) * 10);
        for (int i = 0; i < 12; ++i) base.push_back(minor(rng) * 10);
        std::vector<std::vector<int>> sizes;
        for (double k : {0.6, 1.0, 1.5}) {
            std::vector<int> scaled;
            for (int v : base) scaled.push_back(int(v * k));
            auto g = group_by_relative_length(ticks_with_lengths(scaled));
            sizes.emplace_back();
            for (const auto& gr : g) sizes.back().push_back(int(gr.members.size()));
        }
        CHECK(sizes[0] == sizes[1]);
        CHECK(sizes[1] == sizes[2]);
    }
}

TEST_CASE("group ratio bounds") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> len(5, 200);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> ls;
        for (int i = 0; i < 15; ++i) ls.push_back(len(rng));
        auto g = lengths_of(group_by_relative_length(ticks_with_lengths(ls)));
        for (std::size_t gi = 0; gi < g.size(); ++gi) {
            const auto& m = g[gi];
            for (std::size_t i = 1; i < m.size(); ++i) {
                CHECK(m[i] <= m[i - 1]);
                CHECK(m[i - 1] - m[i] <= 0.15 * m[i - 1] + 1e-9);
            }
            if (gi + 1 < g.size()) CHECK(m.back() - g[gi + 1].front() > 0.15 * m.back());
        }
    }
}

TEST_CASE("synthetic scales give the same partition at 0.6 and 1.5") {
    for (auto kind : {synth::Preset::syringe, synth::Preset::cylinder}) {
        std::vector<std::vector<int>> sizes;
        for (double sf : {0.6, 1.0, 1.5}) {
            auto spec = synth::preset(kind);
            spec.scale_factor = sf;
            auto linear = filter_linear(find_contours(synth::render_tick_mask(spec)));
            auto g = group_by_relative_length(linear);
            sizes.emplace_back();
            for (const auto& gr : g) sizes.back().push_back(int(gr.members.size()));
        }
        const int majors = synth::preset(kind).n_major;
        CHECK(sizes[0].front() == majors);
        CHECK(sizes[0] == sizes[1]);
        CHECK(sizes[1] == sizes[2]);
    }
}

}  // TEST_SUITE
