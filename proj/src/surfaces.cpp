#include "ptb/surfaces.hpp"

#include <numeric>
#include <utility>

#include "ptb/errors.hpp"

namespace ptb {

namespace {

// Homology lift of the slope p/q: the vector (q, p), so that the Moebius
// action on slopes becomes an integer linear action on lifts.
using Vec2 = std::pair<Int, Int>;

Vec2 lift(const Slope& s) { return {s.q, s.p}; }

Int det2(const Vec2& u, const Vec2& v) {
    return u.first * v.second - u.second * v.first;
}

Vec2 apply_lift(const MatSL2& m, const Vec2& w) {
    // Lift of p/q -> (a p + b q)/(c p + d q).
    return {m.c * w.second + m.d * w.first, m.a * w.second + m.b * w.first};
}

// The model saddle with bottom slope 0/1 and top slope 1/0: arcs and
// verticals in octagon order, edge j from corner j-1 to corner j.
constexpr std::array<OctagonEdge, 8> kModelOctagon = {{
    {ArcRole::BottomArc, "l-"},
    {ArcRole::Vertical, "p1"},
    {ArcRole::TopArc, "m+"},
    {ArcRole::Vertical, "p2"},
    {ArcRole::BottomArc, "l+"},
    {ArcRole::Vertical, "p3"},
    {ArcRole::TopArc, "m-"},
    {ArcRole::Vertical, "p4"},
}};

struct UnionFind {
    std::vector<long> parent;

    explicit UnionFind(long n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0L);
    }
    long find(long x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(long x, long y) { parent[find(x)] = find(y); }
};

// Collapses corner and edge instances along the gluings and fills the class
// maps, the counts, and the Euler characteristic.
void assemble(SurfaceComplex& c) {
    const long f = static_cast<long>(c.pieces.size());
    UnionFind corners(8 * f), edges(8 * f);
    for (const Gluing& g : c.gluings) {
        edges.unite(g.face_a * 8 + (g.edge_a - 1), g.face_b * 8 + (g.edge_b - 1));
        const long sa = g.face_a * 8 + (g.edge_a - 1);  // start corner
        const long ta = g.face_a * 8 + (g.edge_a % 8);  // end corner
        const long sb = g.face_b * 8 + (g.edge_b - 1);
        const long tb = g.face_b * 8 + (g.edge_b % 8);
        corners.unite(sa, g.reversed ? tb : sb);
        corners.unite(ta, g.reversed ? sb : tb);
    }

    c.vertex_class.assign(f, {});
    c.edge_class.assign(f, {});
    c.vertex_members.clear();
    c.edge_members.clear();
    std::vector<long> vid(8 * f, -1), eid(8 * f, -1);
    for (long i = 0; i < f; ++i) {
        for (int j = 0; j < 8; ++j) {
            long r = corners.find(i * 8 + j);
            if (vid[r] < 0) {
                vid[r] = static_cast<long>(c.vertex_members.size());
                c.vertex_members.emplace_back();
            }
            c.vertex_class[i][j] = vid[r];
            c.vertex_members[vid[r]].push_back({i, j});

            r = edges.find(i * 8 + j);
            if (eid[r] < 0) {
                eid[r] = static_cast<long>(c.edge_members.size());
                c.edge_members.emplace_back();
            }
            c.edge_class[i][j] = eid[r];
            c.edge_members[eid[r]].push_back({i, j + 1});
        }
    }

    c.vertex_count = static_cast<long>(c.vertex_members.size());
    c.edge_count = static_cast<long>(c.edge_members.size());
    c.face_count = f;
    c.boundary_edge_count = c.interior_edge_count = 0;
    for (const auto& members : c.edge_members) {
        if (members.size() == 1)
            ++c.boundary_edge_count;
        else if (members.size() == 2)
            ++c.interior_edge_count;
        else
            throw Error("octagon edge glued more than once");
    }
    c.chi = c.vertex_count - c.edge_count + c.face_count;
}

// Two mirrored copies of each octagon; an interior gluing crosses between
// the copies exactly when it would flip the co-orientation.
std::shared_ptr<const SurfaceComplex> build_double(const SurfaceComplex& base) {
    auto dbl = std::make_shared<SurfaceComplex>();
    const long k = base.k;
    dbl->k = k;
    dbl->epsilon = base.epsilon;
    dbl->closure_sign = base.closure_sign;
    dbl->pieces.reserve(2 * base.pieces.size());
    for (long t = 0; t < 2; ++t)
        for (const SaddlePiece& p : base.pieces) {
            SaddlePiece q = p;
            q.index = p.index + t * k;
            dbl->pieces.push_back(q);
        }
    for (const Gluing& g : base.gluings) {
        const bool flip = !g.reversed;
        for (long t = 0; t < 2; ++t) {
            const long t2 = flip ? 1 - t : t;
            dbl->gluings.push_back(
                {g.face_a + t * k, g.edge_a, g.face_b + t2 * k, g.edge_b, g.reversed});
        }
    }
    assemble(*dbl);
    dbl->sided = sidedness(*dbl);
    return dbl;
}

}  // namespace

SurfaceComplex build_surface(const EdgePath& path, const MatSL2& A) {
    const long k = path.edge_count();
    SurfaceComplex c;
    c.k = k;

    std::vector<Vec2> w;
    w.reserve(k + 1);
    for (const Slope& s : path.vertices) w.push_back(lift(s));

    // Frame of saddle i: the lifts of its bottom and top slopes.  The frame
    // determinant tells whether transporting the model flips left and right.
    c.epsilon.reserve(k);
    for (long i = 0; i < k; ++i) {
        const Int d = det2(w[i], w[i + 1]);
        if (d != 1 && d != -1)
            throw InvalidPath("consecutive path slopes are not Farey-adjacent");
        c.epsilon.push_back(d > 0 ? 1 : -1);
    }

    const Vec2 u = apply_lift(A, w[0]);
    if (u == w[k])
        c.closure_sign = 1;
    else if (u.first == -w[k].first && u.second == -w[k].second)
        c.closure_sign = -1;
    else
        throw InvalidPath("path does not close up under the monodromy");

    c.pieces.reserve(k);
    for (long i = 0; i < k; ++i) {
        SaddlePiece p;
        p.index = i;
        p.bottom_slope = path.vertices[i];
        p.top_slope = path.vertices[i + 1];
        p.edges = kModelOctagon;
        c.pieces.push_back(p);
    }

    // Stack the saddles: the two top arcs of piece i-1 meet the two bottom
    // arcs of piece i along the level-i slope curve.  Matching frame
    // determinants put m+ and l- on the same side of that curve with equal
    // directions; opposite determinants cross the copies over and reverse.
    for (long i = 1; i < k; ++i) {
        if (c.epsilon[i - 1] == c.epsilon[i]) {
            c.gluings.push_back({i - 1, 3, i, 1, false});
            c.gluings.push_back({i - 1, 7, i, 5, false});
        } else {
            c.gluings.push_back({i - 1, 3, i, 5, true});
            c.gluings.push_back({i - 1, 7, i, 1, true});
        }
    }
    // Return level k to level 0 through the monodromy; a negative closure
    // sign mirrors the level-0 arcs and reverses their directions.
    const bool flipped_bottom = (c.epsilon[0] < 0) != (c.closure_sign < 0);
    if ((c.epsilon[k - 1] < 0) == flipped_bottom) {
        c.gluings.push_back({k - 1, 3, 0, 1, c.closure_sign < 0});
        c.gluings.push_back({k - 1, 7, 0, 5, c.closure_sign < 0});
    } else {
        c.gluings.push_back({k - 1, 3, 0, 5, c.closure_sign > 0});
        c.gluings.push_back({k - 1, 7, 0, 1, c.closure_sign > 0});
    }

    assemble(c);
    c.sided = sidedness(c);
    if (k % 2 != 0) c.orientation_double = build_double(c);
    return c;
}

Sidedness sidedness(const SurfaceComplex& c) {
    // A transverse co-orientation survives an identification that traverses
    // the common arc in opposite directions and flips across one that runs
    // the same way; a cycle of gluings whose required sign product is -1 has
    // no consistent assignment.
    const long f = static_cast<long>(c.pieces.size());
    std::vector<std::vector<std::pair<long, int>>> adj(f);
    for (const Gluing& g : c.gluings) {
        const int product = g.reversed ? 1 : -1;
        adj[g.face_a].push_back({g.face_b, product});
        adj[g.face_b].push_back({g.face_a, product});
    }
    std::vector<int> sign(f, 0);
    for (long start = 0; start < f; ++start) {
        if (sign[start] != 0) continue;
        sign[start] = 1;
        std::vector<long> queue{start};
        while (!queue.empty()) {
            const long u = queue.back();
            queue.pop_back();
            for (const auto& [v, product] : adj[u]) {
                const int want = sign[u] * product;
                if (sign[v] == 0) {
                    sign[v] = want;
                    queue.push_back(v);
                } else if (sign[v] != want) {
                    return Sidedness::OneSided;
                }
            }
        }
    }
    return Sidedness::TwoSided;
}

GutsReport guts_report(const EdgePath& path) {
    const long k = path_period(path);
    if (k != path.edge_count())
        throw InvalidPath("path traverses a shorter loop more than once");
    const SurfaceComplex c = build_surface(path, path.monodromy);

    GutsReport r;
    r.k = k;
    r.parity = (k % 2 == 0) ? Parity::Even : Parity::Odd;
    r.square_neighborhoods = k;
    r.seifert_solid_tori = k;
    r.handlebody_ibundle = (r.parity == Parity::Odd) ? 1 : 0;
    r.guts_empty = true;
    r.chi_surface = (r.parity == Parity::Even) ? -k : -2 * k;

    const long constructed = (r.parity == Parity::Even)
                                 ? c.chi
                                 : (c.orientation_double ? c.orientation_double->chi : 0);
    if (constructed != r.chi_surface)
        throw Error("surface Euler characteristic disagrees with the parity rule");

    r.agol_lower_bound = 0.0;  // empty guts: the bound -2 V3 chi(guts) vanishes
    return r;
}

}  // namespace ptb
