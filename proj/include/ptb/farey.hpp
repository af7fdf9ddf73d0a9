#pragma once

#include <array>
#include <map>
#include <utility>
#include <vector>

#include "ptb/sl2z.hpp"

namespace ptb {

// Ideal triangle of the Farey tessellation, corners sorted for determinism.
struct IdealTriangle {
    std::array<Slope, 3> corners;

    explicit IdealTriangle(std::array<Slope, 3> c);

    bool contains(const Slope& s) const;
    bool operator==(const IdealTriangle& o) const { return corners == o.corners; }
    bool operator<(const IdealTriangle& o) const { return corners < o.corners; }
};

// One elementary move of the strip: triangle j and j+1 share an edge
// {pivot, other}; `dropped` leaves, `added` enters.
struct StripStep {
    char letter;  // 'R' or 'L'
    Slope pivot, other, dropped, added;

    StripStep() : letter('?'), pivot(1, 0), other(1, 0), dropped(1, 0), added(1, 0) {}
};

// The invariant Farey strip of a twist word: triangles T_j with
// T_{j+n} = M T_j, materialized on a window of indices wide enough for the
// path search.  Base period is j in [0, n).
struct Strip {
    TwistWord word;
    MatSL2 monodromy = MatSL2::identity();  // positive word matrix
    long n = 0;                             // letters per period
    long lo = 0, hi = 0;                    // materialized indices, inclusive

    std::vector<IdealTriangle> tris;  // tris[j - lo]
    std::vector<StripStep> steps;     // steps[j - lo], between T_j and T_{j+1}

    struct VertexInfo {
        long first = 0, last = 0;  // contiguous run of triangles containing it
        bool clipped = false;      // run touches the window boundary
        long orbit = -1;           // index into orbit_reps (unclipped only)
        long shift = 0;            // vertex == M^shift * orbit rep
    };
    std::map<Slope, VertexInfo> verts;
    std::vector<Slope> orbit_reps;  // one per orbit, sorted; size == n

    const IdealTriangle& triangle(long j) const;
    const StripStep& step(long j) const;
    const VertexInfo& vertex(const Slope& s) const;  // throws on clipped/unknown

    // Translate a slope by M^t.
    Slope translate(const Slope& s, long t) const;
};

// Builds the strip (and its orbit bookkeeping) for a validated twist word.
Strip build_strip(const TwistWord& w);

// Image of the strip in the mapping torus: n vertex orbits and their edges.
// Edge endpoints are (orbit, shift) pairs with the smaller shift normalized
// to zero; `tri` lists the materialized triangles containing that lift.
struct QuotientGraph {
    std::vector<Slope> reps;
    struct Edge {
        long orbit_a, shift_a, orbit_b, shift_b;
        std::vector<long> tri;
        bool operator<(const Edge& o) const;
    };
    std::vector<Edge> edges;  // sorted, one per orbit of strip edges
};

QuotientGraph quotient_graph(const Strip& s);

// Closed edge path in the Farey tessellation: vertices v_0 .. v_K with each
// consecutive pair spanning a Farey edge.  Only adjacency is enforced here;
// consumers check closure against their monodromy.
struct EdgePath {
    std::vector<Slope> vertices;
    MatSL2 monodromy = MatSL2::identity();

    EdgePath(std::vector<Slope> vs, MatSL2 m);  // throws InvalidPath

    long edge_count() const { return static_cast<long>(vertices.size()) - 1; }
};

// Smallest d such that v_{i+d} = M v_i wherever both are defined; a list
// that traverses a shorter loop several times reports the shorter period.
// Throws InvalidPath when no shift works.
long path_period(const EdgePath& p);

// All minimal edge paths of the strip: loops in the quotient whose
// consecutive edges never share a triangle and which run monotonically down
// the strip.  Each result starts at the lexicographically least orbit
// representative it passes through and ends at its monodromy image.
// Results are sorted by (length, vertex list); more than `max_paths`
// distinct paths raises TooManyPaths.
std::vector<EdgePath> minimal_paths(const Strip& s, size_t max_paths = 64);

}  // namespace ptb
