#include "ptb/farey.hpp"

#include <set>

#include "doctest.h"
#include "oracles.hpp"

using namespace ptb;
using oracle::make_word;

namespace {

IdealTriangle tri(Slope a, Slope b, Slope c) {
    return IdealTriangle({std::move(a), std::move(b), std::move(c)});
}

std::vector<Slope> slopes(std::initializer_list<std::pair<int, int>> ps) {
    std::vector<Slope> out;
    for (auto [p, q] : ps) out.emplace_back(p, q);
    return out;
}

}  // namespace

TEST_CASE("strip of the simplest word") {
    Strip s = build_strip(make_word({{1, 1}}));
    CHECK(s.n == 2);
    CHECK(s.monodromy == MatSL2(2, 1, 1, 1));

    CHECK(s.triangle(0) == tri(Slope(0, 1), Slope(1, 1), Slope(1, 0)));
    CHECK(s.triangle(1) == tri(Slope(1, 1), Slope(2, 1), Slope(1, 0)));
    CHECK(s.triangle(2) == tri(Slope(1, 1), Slope(3, 2), Slope(2, 1)));

    CHECK(s.step(0).letter == 'R');
    CHECK(s.step(0).pivot == Slope::infinity());
    CHECK(s.step(0).other == Slope(1, 1));
    CHECK(s.step(0).dropped == Slope(0, 1));
    CHECK(s.step(0).added == Slope(2, 1));
    CHECK(s.step(1).letter == 'L');
    CHECK(s.step(1).pivot == Slope(1, 1));
    CHECK(s.step(1).other == Slope(2, 1));
    CHECK(s.step(1).dropped == Slope(1, 0));
    CHECK(s.step(1).added == Slope(3, 2));

    CHECK(s.orbit_reps == slopes({{1, 1}, {2, 1}}));
    CHECK(s.vertex(Slope(1, 1)).first == 0);
    CHECK(s.vertex(Slope(1, 1)).last == 2);
    CHECK(s.vertex(Slope(2, 1)).first == 1);
    CHECK(s.vertex(Slope(2, 1)).last == 3);
    CHECK(s.vertex(Slope::infinity()).first == -1);
    CHECK(s.vertex(Slope::infinity()).last == 1);
    CHECK(s.vertex(Slope::infinity()).orbit == 1);
    CHECK(s.vertex(Slope::infinity()).shift == -1);
    CHECK(s.vertex(Slope(0, 1)).orbit == 0);
    CHECK(s.vertex(Slope(0, 1)).shift == -1);

    CHECK_THROWS_AS(build_strip(make_word({})), Error);
    CHECK_THROWS_AS(build_strip(make_word({{1, 0}})), NonPositiveSyllable);
}

TEST_CASE("strip structure holds across short words") {
    std::vector<TwistWord> words;
    for (Int n = 2; n <= 6; ++n) oracle::words_of_size(n, words);
    for (const TwistWord& w : words) {
        Strip s = build_strip(w);
        CAPTURE(w.str());

        // Periodicity: T_{j+n} is the monodromy image of T_j.
        for (long j = s.lo; j + s.n <= s.hi; ++j) {
            std::array<Slope, 3> c = s.triangle(j).corners;
            for (Slope& sl : c) sl = apply_to_slope(s.monodromy, sl);
            CHECK(s.triangle(j + s.n) == IdealTriangle(c));
        }

        // All materialized triangles are distinct.
        std::set<IdealTriangle> uniq(s.tris.begin(), s.tris.end());
        CHECK(uniq.size() == s.tris.size());

        // Consecutive steps with the same letter pivot around one vertex.
        for (long j = s.lo; j + 1 < s.hi; ++j)
            if (s.step(j).letter == s.step(j + 1).letter)
                CHECK(s.step(j).pivot == s.step(j + 1).pivot);

        // Every interior vertex sits in a contiguous run of triangles.
        for (const auto& [sl, info] : s.verts)
            for (long j = info.first; j <= info.last; ++j)
                CHECK(s.triangle(j).contains(sl));

        // One orbit per letter; dropped vertices realize each orbit once
        // per period.
        CHECK(static_cast<long>(s.orbit_reps.size()) == s.n);
        std::set<long> dropped_orbits;
        for (long j = 0; j < s.n; ++j)
            dropped_orbits.insert(s.vertex(s.step(j).dropped).orbit);
        CHECK(static_cast<long>(dropped_orbits.size()) == s.n);
    }
}

TEST_CASE("quotient graph counts and the simplest example") {
    Strip s = build_strip(make_word({{1, 1}}));
    QuotientGraph g = quotient_graph(s);
    CHECK(g.reps == slopes({{1, 1}, {2, 1}}));
    REQUIRE(g.edges.size() == 4);
    CHECK(g.edges[0].orbit_a == 0);
    CHECK(g.edges[0].shift_a == 0);
    CHECK(g.edges[0].orbit_b == 0);
    CHECK(g.edges[0].shift_b == 1);
    CHECK(g.edges[0].tri == std::vector<long>{2});
    CHECK(g.edges[1].tri == std::vector<long>{1, 2});
    CHECK(g.edges[2].tri == std::vector<long>{2, 3});
    CHECK(g.edges[3].tri == std::vector<long>{3});

    // n vertices and 2n edges: the quotient complex closes into a torus.
    std::vector<TwistWord> words;
    for (Int n = 2; n <= 6; ++n) oracle::words_of_size(n, words);
    for (const TwistWord& w : words) {
        Strip st = build_strip(w);
        QuotientGraph q = quotient_graph(st);
        CHECK(q.edges.size() == size_t(2 * st.n));
        for (const auto& e : q.edges) {
            CHECK(e.shift_a * e.shift_b == 0);  // smaller shift normalized to 0
            CHECK((e.tri.size() == 1 || e.tri.size() == 2));
        }
    }
}

TEST_CASE("edge path validation and period") {
    MatSL2 m(2, 1, 1, 1);  // monodromy of the simplest word
    CHECK_THROWS_AS(EdgePath(slopes({{1, 1}}), m), InvalidPath);
    CHECK_THROWS_AS(EdgePath(slopes({{1, 1}, {3, 1}}), m), InvalidPath);

    EdgePath p(slopes({{1, 1}, {3, 2}}), m);
    CHECK(p.edge_count() == 1);
    CHECK(path_period(p) == 1);

    // Open path: no shift matches the monodromy.
    CHECK_THROWS_AS(path_period(EdgePath(slopes({{0, 1}, {1, 0}}), m)),
                    InvalidPath);

    // Doubled traversal of a two-edge loop reports the shorter period.
    MatSL2 m2(3, 2, 1, 1);
    EdgePath doubled(slopes({{1, 1}, {2, 1}, {5, 2}, {8, 3}, {19, 7}}), m2);
    CHECK(path_period(doubled) == 2);
    EdgePath once(slopes({{1, 1}, {2, 1}, {5, 2}}), m2);
    CHECK(path_period(once) == 2);
}

TEST_CASE("minimal paths of the frozen examples") {
    auto paths = minimal_paths(build_strip(make_word({{1, 1}})));
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].vertices == slopes({{1, 1}, {3, 2}}));
    CHECK(paths[1].vertices == slopes({{2, 1}, {5, 3}}));

    paths = minimal_paths(build_strip(make_word({{2, 1}})));
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].vertices == slopes({{3, 1}, {11, 4}}));
    CHECK(paths[1].vertices == slopes({{1, 1}, {2, 1}, {5, 2}}));

    paths = minimal_paths(build_strip(make_word({{1, 2}})));
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].vertices == slopes({{1, 1}, {4, 3}}));
    CHECK(paths[1].vertices == slopes({{2, 1}, {3, 2}, {7, 5}}));

    CHECK_THROWS_AS(minimal_paths(build_strip(make_word({{1, 1}})), 1),
                    TooManyPaths);
}

TEST_CASE("minimal paths agree with the reference search") {
    std::vector<TwistWord> words;
    for (Int n = 2; n <= 6; ++n) oracle::words_of_size(n, words);
    for (const TwistWord& w : words) {
        CAPTURE(w.str());
        Strip s = build_strip(w);
        std::vector<EdgePath> got = minimal_paths(s, 4096);
        std::set<std::vector<Slope>> got_keys;
        for (const EdgePath& p : got) {
            std::vector<Slope> key(p.vertices.begin(), p.vertices.end() - 1);
            got_keys.insert(key);
        }
        CHECK(got_keys == oracle::PathOracle(s).run());
        CHECK(got_keys.size() == got.size());

        for (const EdgePath& p : got) {
            // Paths close onto the monodromy image of their start.
            CHECK(p.vertices.back() ==
                  apply_to_slope(s.monodromy, p.vertices.front()));
            CHECK(path_period(p) == p.edge_count());
            // Consecutive edges never sit in a common triangle, including
            // around the closing seam.
            oracle::PathOracle po(s);
            size_t K = p.vertices.size() - 1;
            for (size_t i = 0; i + 1 < K; ++i) {
                auto a = po.edge_tris(p.vertices[i], p.vertices[i + 1]);
                auto b = po.edge_tris(p.vertices[i + 1], p.vertices[i + 2]);
                CHECK(oracle::PathOracle::disjoint(a, b));
            }
            auto last = po.edge_tris(p.vertices[K - 1], p.vertices[K]);
            auto first = po.edge_tris(p.vertices[0], p.vertices[1]);
            std::set<long> shifted;
            for (long x : first) shifted.insert(x + s.n);
            CHECK(oracle::PathOracle::disjoint(last, shifted));
        }
    }
}
