#include "ptb/farey.hpp"

#include <algorithm>
#include <set>

namespace ptb {

namespace {

long floor_div_l(long a, long b) {
    long q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0))) --q;
    return q;
}

long mod_l(long a, long b) {
    long r = a % b;
    return r < 0 ? r + b : r;
}

MatSL2 mat_pow(const MatSL2& m, long t) {
    MatSL2 base = t < 0 ? m.inverse() : m;
    MatSL2 out = MatSL2::identity();
    for (long i = 0; i < (t < 0 ? -t : t); ++i) out = out * base;
    return out;
}

}  // namespace

IdealTriangle::IdealTriangle(std::array<Slope, 3> c) : corners(std::move(c)) {
    std::sort(corners.begin(), corners.end());
    if (corners[0] == corners[1] || corners[1] == corners[2])
        throw Error("degenerate ideal triangle");
    for (int i = 0; i < 3; ++i)
        if (!farey_adjacent(corners[i], corners[(i + 1) % 3]))
            throw Error("triangle corners are not pairwise Farey adjacent");
}

bool IdealTriangle::contains(const Slope& s) const {
    return corners[0] == s || corners[1] == s || corners[2] == s;
}

const IdealTriangle& Strip::triangle(long j) const {
    if (j < lo || j > hi) throw Error("triangle index outside materialized window");
    return tris[static_cast<size_t>(j - lo)];
}

const StripStep& Strip::step(long j) const {
    if (j < lo || j >= hi) throw Error("step index outside materialized window");
    return steps[static_cast<size_t>(j - lo)];
}

const Strip::VertexInfo& Strip::vertex(const Slope& s) const {
    auto it = verts.find(s);
    if (it == verts.end()) throw Error("slope " + s.str() + " is not a strip vertex");
    if (it->second.clipped)
        throw Error("slope " + s.str() + " touches the materialized window boundary");
    return it->second;
}

Slope Strip::translate(const Slope& s, long t) const {
    return apply_to_slope(mat_pow(monodromy, t), s);
}

Strip build_strip(const TwistWord& w) {
    w.validate();
    if (w.syllables.empty()) throw Error("empty twist word has no strip");

    Strip s;
    s.word = w;
    std::vector<char> letters = w.letters();
    s.n = static_cast<long>(letters.size());
    TwistWord pos = w;
    pos.sign = 1;
    s.monodromy = word_to_matrix(pos);
    s.lo = -2 * (s.n + 1);
    s.hi = 4 * (s.n + 1);

    // Prefix products of the periodically extended letter sequence;
    // T_j is the prefix applied to the base triangle {0/1, 1/1, 1/0}.
    auto letter_mat = [](char c) {
        return c == 'R' ? MatSL2::twist_r() : MatSL2::twist_l();
    };
    std::vector<MatSL2> prefix(static_cast<size_t>(s.hi - s.lo + 1),
                               MatSL2::identity());
    auto pref = [&](long j) -> MatSL2& {
        return prefix[static_cast<size_t>(j - s.lo)];
    };
    for (long j = 0; j < s.hi; ++j)
        pref(j + 1) = pref(j) * letter_mat(letters[mod_l(j, s.n)]);
    for (long j = 0; j > s.lo; --j)
        pref(j - 1) = pref(j) * letter_mat(letters[mod_l(j - 1, s.n)]).inverse();

    const std::array<Slope, 3> base{Slope(0, 1), Slope(1, 1), Slope(1, 0)};
    for (long j = s.lo; j <= s.hi; ++j) {
        std::array<Slope, 3> c{apply_to_slope(pref(j), base[0]),
                               apply_to_slope(pref(j), base[1]),
                               apply_to_slope(pref(j), base[2])};
        s.tris.emplace_back(c);
    }

    // Step data: shared edge, pivot, dropped and added corners.
    for (long j = s.lo; j < s.hi; ++j) {
        const IdealTriangle& cur = s.triangle(j);
        const IdealTriangle& nxt = s.tris[static_cast<size_t>(j + 1 - s.lo)];
        StripStep st;
        st.letter = letters[mod_l(j, s.n)];
        st.pivot = apply_to_slope(
            pref(j), st.letter == 'R' ? Slope(1, 0) : Slope(0, 1));
        int shared = 0;
        for (const Slope& c : cur.corners) {
            if (nxt.contains(c)) {
                if (c != st.pivot) st.other = c;
                ++shared;
            } else {
                st.dropped = c;
            }
        }
        for (const Slope& c : nxt.corners)
            if (!cur.contains(c)) st.added = c;
        if (shared != 2 || !nxt.contains(st.pivot))
            throw Error("strip step is not an elementary Farey move");
        s.steps.push_back(st);
    }

    // Vertex runs: every vertex occupies a contiguous block of triangles.
    std::map<Slope, long> count;
    for (long j = s.lo; j <= s.hi; ++j) {
        for (const Slope& c : s.triangle(j).corners) {
            auto [it, fresh] = s.verts.try_emplace(c);
            if (fresh) {
                it->second.first = it->second.last = j;
            } else {
                it->second.first = std::min(it->second.first, j);
                it->second.last = std::max(it->second.last, j);
            }
            ++count[c];
        }
    }
    for (auto& [sl, info] : s.verts) {
        if (count[sl] != info.last - info.first + 1)
            throw Error("vertex run is not contiguous for " + sl.str());
        info.clipped = info.first == s.lo || info.last == s.hi;
    }

    // Orbit representatives: the unique lift whose run starts in [0, n).
    for (auto& [sl, info] : s.verts)
        if (!info.clipped && info.first >= 0 && info.first < s.n)
            s.orbit_reps.push_back(sl);
    std::sort(s.orbit_reps.begin(), s.orbit_reps.end());
    if (static_cast<long>(s.orbit_reps.size()) != s.n)
        throw Error("expected one vertex orbit per strip letter");

    std::map<Slope, long> rep_index;
    for (size_t i = 0; i < s.orbit_reps.size(); ++i)
        rep_index[s.orbit_reps[i]] = static_cast<long>(i);
    for (auto& [sl, info] : s.verts) {
        if (info.clipped) continue;
        long t = floor_div_l(info.first, s.n);
        Slope rep = s.translate(sl, -t);
        auto it = rep_index.find(rep);
        if (it == rep_index.end())
            throw Error("orbit representative of " + sl.str() + " not materialized");
        info.orbit = it->second;
        info.shift = t;
    }
    return s;
}

bool QuotientGraph::Edge::operator<(const Edge& o) const {
    return std::tie(orbit_a, shift_a, orbit_b, shift_b) <
           std::tie(o.orbit_a, o.shift_a, o.orbit_b, o.shift_b);
}

QuotientGraph quotient_graph(const Strip& s) {
    QuotientGraph g;
    g.reps = s.orbit_reps;
    std::set<std::array<long, 4>> seen;
    for (long j = 0; j < s.n; ++j) {
        const IdealTriangle& t = s.triangle(j);
        for (int i = 0; i < 3; ++i) {
            const Slope& u = t.corners[i];
            const Slope& v = t.corners[(i + 1) % 3];
            const auto& iu = s.vertex(u);
            const auto& iv = s.vertex(v);
            long m = std::min(iu.shift, iv.shift);
            std::array<long, 4> key{iu.orbit, iu.shift - m, iv.orbit, iv.shift - m};
            if (std::tie(key[0], key[1]) > std::tie(key[2], key[3])) {
                std::swap(key[0], key[2]);
                std::swap(key[1], key[3]);
            }
            if (!seen.insert(key).second) continue;
            QuotientGraph::Edge e{key[0], key[1], key[2], key[3], {}};
            const auto& ia = s.vertex(s.translate(s.orbit_reps[size_t(e.orbit_a)],
                                                  e.shift_a));
            const auto& ib = s.vertex(s.translate(s.orbit_reps[size_t(e.orbit_b)],
                                                  e.shift_b));
            for (long k = std::max(ia.first, ib.first);
                 k <= std::min(ia.last, ib.last); ++k)
                e.tri.push_back(k);
            if (e.tri.empty()) throw Error("quotient edge without a triangle");
            g.edges.push_back(e);
        }
    }
    std::sort(g.edges.begin(), g.edges.end());
    return g;
}

EdgePath::EdgePath(std::vector<Slope> vs, MatSL2 m)
    : vertices(std::move(vs)), monodromy(std::move(m)) {
    if (vertices.size() < 2)
        throw InvalidPath("edge path needs at least two vertices");
    for (size_t i = 0; i + 1 < vertices.size(); ++i)
        if (!farey_adjacent(vertices[i], vertices[i + 1]))
            throw InvalidPath("vertices " + vertices[i].str() + " and " +
                              vertices[i + 1].str() + " span no Farey edge");
}

long path_period(const EdgePath& p) {
    long K = p.edge_count();
    for (long d = 1; d <= K; ++d) {
        bool ok = true;
        for (long i = 0; i + d <= K && ok; ++i)
            ok = p.vertices[size_t(i + d)] ==
                 apply_to_slope(p.monodromy, p.vertices[size_t(i)]);
        if (ok) return d;
    }
    throw InvalidPath("path does not close up under the monodromy");
}

namespace {

struct PathSearch {
    const Strip& s;
    size_t raw_cap = 100000;
    size_t raw_count = 0;
    std::set<std::vector<Slope>> canon;  // deduplicated canonical vertex lists

    explicit PathSearch(const Strip& strip) : s(strip) {}

    std::vector<Slope> neighbors(const Slope& v) const {
        const auto& info = s.vertex(v);
        std::set<Slope> out;
        for (long j = info.first; j <= info.last; ++j)
            for (const Slope& c : s.triangle(j).corners)
                if (c != v) out.insert(c);
        return {out.begin(), out.end()};
    }

    // Rotate the cyclic lift list to start at its least orbit representative
    // and translate that start onto the representative itself.
    std::vector<Slope> canonical(const std::vector<Slope>& path) const {
        size_t K = path.size(), best = 0;
        Slope best_rep = s.orbit_reps[size_t(s.vertex(path[0]).orbit)];
        for (size_t i = 1; i < K; ++i) {
            Slope rep = s.orbit_reps[size_t(s.vertex(path[i]).orbit)];
            if (rep < best_rep) { best_rep = rep; best = i; }
        }
        long shift = s.vertex(path[best]).shift;
        std::vector<Slope> out;
        for (size_t i = 0; i < K; ++i) {
            size_t j = (best + i) % K;
            long wrap = best + i >= K ? 1 : 0;
            out.push_back(s.translate(path[j], wrap - shift));
        }
        return out;
    }

    void dfs(const Slope& target, long first_lo, long prev_hi,
             std::vector<Slope>& path, std::vector<char>& visited) {
        const Slope cur = path.back();  // copy: push_back below reallocates
        for (const Slope& w : neighbors(cur)) {
            const auto& iu = s.vertex(cur);
            const auto& iw = s.vertex(w);
            long elo = std::max(iu.first, iw.first);
            long ehi = std::min(iu.last, iw.last);
            bool has_prev = path.size() >= 2;
            // Consecutive edges may not share a triangle, and the walk must
            // move monotonically down the strip: both collapse to this.
            if (has_prev && elo <= prev_hi) continue;
            if (w == target) {
                long flo = has_prev ? first_lo : elo;
                if (ehi < flo + s.n) {
                    if (++raw_count > raw_cap)
                        throw TooManyPaths("minimal path search exploded");
                    canon.insert(canonical(path));
                }
                continue;
            }
            if (iw.orbit < 0) throw Error("path search left the orbit window");
            if (visited[size_t(iw.orbit)]) continue;
            if (static_cast<long>(path.size()) >= s.n) continue;
            visited[size_t(iw.orbit)] = 1;
            path.push_back(w);
            dfs(target, has_prev ? first_lo : elo, ehi, path, visited);
            path.pop_back();
            visited[size_t(iw.orbit)] = 0;
        }
    }
};

}  // namespace

std::vector<EdgePath> minimal_paths(const Strip& s, size_t max_paths) {
    PathSearch search(s);
    for (long i = 0; i < s.n; ++i) {
        const Slope& rep = s.orbit_reps[size_t(i)];
        Slope target = s.translate(rep, 1);
        std::vector<Slope> path{rep};
        std::vector<char> visited(size_t(s.n), 0);
        visited[size_t(i)] = 1;
        search.dfs(target, 0, 0, path, visited);
    }
    if (search.canon.size() > max_paths)
        throw TooManyPaths("found " + std::to_string(search.canon.size()) +
                           " minimal paths, cap is " + std::to_string(max_paths));
    std::vector<EdgePath> out;
    for (const auto& lifts : search.canon) {
        std::vector<Slope> vs = lifts;
        vs.push_back(s.translate(vs[0], 1));
        out.emplace_back(std::move(vs), s.monodromy);
    }
    std::sort(out.begin(), out.end(), [](const EdgePath& a, const EdgePath& b) {
        if (a.vertices.size() != b.vertices.size())
            return a.vertices.size() < b.vertices.size();
        return std::lexicographical_compare(a.vertices.begin(), a.vertices.end(),
                                            b.vertices.begin(), b.vertices.end());
    });
    return out;
}

}  // namespace ptb
