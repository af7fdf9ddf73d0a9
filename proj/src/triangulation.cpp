#include "ptb/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ptb/errors.hpp"

namespace ptb {

namespace {

using Vec2 = std::pair<Int, Int>;  // plane lift (q, p) of a slope

Vec2 lift(const Slope& s) { return {s.q, s.p}; }

Slope slope_of(const Vec2& v) { return Slope(v.second, v.first); }

Vec2 apply_lift(const MatSL2& m, const Vec2& w) {
    // Lift of p/q -> (a p + b q)/(c p + d q).
    return {m.c * w.second + m.d * w.first, m.a * w.second + m.b * w.first};
}

// Coordinate of the point (x, y) against the lattice lines of slope s.
Int line_coord(const Slope& s, const Int& x, const Int& y) { return s.q * y - s.p * x; }

// Region key of a triangle inside the lifted triangulation with the sorted
// slope triple `tri`: the floors of the three line coordinates at the
// centroid, normalized by the unique lattice translation zeroing the first
// two.  X is three times the centroid, so everything stays integral; equal
// keys mean the same region modulo lattice translation.
Int region_key(const std::array<Slope, 3>& tri, const Vec2& X) {
    const Int fu = floor_div(line_coord(tri[0], X.first, X.second), 3);
    const Int fv = floor_div(line_coord(tri[1], X.first, X.second), 3);
    const Int fw = floor_div(line_coord(tri[2], X.first, X.second), 3);
    const Int det = tri[1].p * tri[0].q - tri[0].p * tri[1].q;  // +-1
    const Int lam1 = (fu * tri[1].q - tri[0].q * fv) / det;
    const Int lam2 = (tri[1].p * fu - tri[0].p * fv) / det;
    return fw - (tri[2].q * lam2 - tri[2].p * lam1);
}

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

const std::vector<double>& zeta_even_table() {
    static const std::vector<double> table = [] {
        const double pi = std::numbers::pi;
        std::vector<double> z{pi * pi / 6.0, std::pow(pi, 4) / 90.0,
                              std::pow(pi, 6) / 945.0};
        for (int s = 8; s <= 60; s += 2) {
            double v = 0.0;
            for (int k = 400; k >= 1; --k) v += std::pow(static_cast<double>(k), -s);
            z.push_back(v);
        }
        return z;
    }();
    return table;
}

double total_objective(const Eigen::VectorXd& x) {
    double v = 0.0;
    for (long i = 0; i < x.size(); ++i) v += lobachevsky(x[i]);
    return v;
}

}  // namespace

std::array<int, 2> Tetrahedron::bottom_face_ids() const {
    return bottom_diagonal == 4 ? std::array<int, 2>{1, 3} : std::array<int, 2>{0, 2};
}

std::array<int, 2> Tetrahedron::top_face_ids() const {
    return top_diagonal == 4 ? std::array<int, 2>{1, 3} : std::array<int, 2>{0, 2};
}

std::array<int, 3> face_corners(int f) {
    std::array<int, 3> out{};
    int k = 0;
    for (int c = 0; c < 4; ++c)
        if (c != f) out[k++] = c;
    return out;
}

int edge_index(int a, int b) {
    if (a > b) std::swap(a, b);
    if (a == 0 && b == 1) return 0;
    if (a == 1 && b == 2) return 1;
    if (a == 2 && b == 3) return 2;
    if (a == 0 && b == 3) return 3;
    if (a == 0 && b == 2) return 4;
    if (a == 1 && b == 3) return 5;
    throw Error("not a tetrahedron edge");
}

LayeredTriangulation build_layered_triangulation(const TwistWord& w) {
    const Strip strip = build_strip(w);

    LayeredTriangulation t;
    t.word = strip.word;
    t.monodromy = strip.monodromy;
    t.n = strip.n;

    for (long j = 0; j < t.n; ++j) {
        const StripStep& st = strip.step(j);
        Slope s1 = st.pivot, s2 = st.other;
        if (s2 < s1) std::swap(s1, s2);
        Vec2 w1 = lift(s1), w2 = lift(s2);
        const Vec2 sum{w1.first + w2.first, w1.second + w2.second};
        const Vec2 diff{w2.first - w1.first, w2.second - w1.second};
        const Slope plus = slope_of(sum), minus = slope_of(diff);

        Tetrahedron tet;
        tet.index = j;
        tet.letter = st.letter;
        tet.edge_pair = {1, 2, 1, 2, 0, 0};
        if (plus == st.dropped && minus == st.added) {
            tet.bottom_diagonal = 4;
            tet.top_diagonal = 5;
        } else if (minus == st.dropped && plus == st.added) {
            tet.bottom_diagonal = 5;
            tet.top_diagonal = 4;
        } else {
            throw Error("strip step slopes do not match the parallelogram diagonals");
        }

        // Normalize the corner order so every tetrahedron is positively
        // oriented once the bottom diagonal is pushed below the top one:
        // lifting the bottom diagonal's endpoints down, the signed volume of
        // (corner1 - corner0, corner2 - corner0, corner3 - corner0) is
        // 2 det[w1 w2] for a bottom diagonal at 02 and -2 det[w1 w2] at 13.
        // A uniform sign keeps one shape-parameter convention valid in every
        // layer; a mirrored tetrahedron would silently swap two of its
        // logarithmic holonomy contributions.
        const Int det = w1.first * w2.second - w1.second * w2.first;
        if ((tet.bottom_diagonal == 4 ? det : -det) < 0) {
            std::swap(s1, s2);
            std::swap(w1, w2);
        }
        tet.corners = {{{Int(0), Int(0)},
                        {w1.first, w1.second},
                        {sum.first, sum.second},
                        {w2.first, w2.second}}};
        tet.edge_slopes = {s1, s2, s1, s2, plus, minus};
        t.tets.push_back(tet);
    }

    // Pair top faces of each layer with the bottom faces of the next by the
    // plane region they occupy; the wrap from the last layer to layer 0 goes
    // through the inverse monodromy first.
    UnionFind uf(6 * t.n);
    const MatSL2 back = t.monodromy.inverse();
    for (long j = 0; j < t.n; ++j) {
        const bool wrap = (j + 1 == t.n);
        const long j2 = wrap ? 0 : j + 1;
        const std::array<Slope, 3>& level = strip.triangle(wrap ? 0 : j + 1).corners;

        const auto face_key = [&](long tt, int f, bool transform) {
            const std::array<int, 3> cs = face_corners(f);
            Vec2 X{0, 0};
            for (int ci : cs) {
                X.first += t.tets[tt].corners[ci][0];
                X.second += t.tets[tt].corners[ci][1];
            }
            if (transform) X = apply_lift(back, X);
            return region_key(level, X);
        };

        for (int fa : t.tets[j].top_face_ids()) {
            const Int ka = face_key(j, fa, wrap);
            int match = -1;
            for (int fb : t.tets[j2].bottom_face_ids())
                if (face_key(j2, fb, false) == ka) match = (match < 0) ? fb : -2;
            if (match < 0)
                throw Error("face regions do not match across a layer interface");
            t.pairings.push_back({j, fa, j2, match});

            // Identify the three edges of the glued faces by slope.
            const std::array<int, 3> ca = face_corners(fa);
            const std::array<int, 3> cb = face_corners(match);
            for (int u = 0; u < 3; ++u)
                for (int v = u + 1; v < 3; ++v) {
                    const int ea = edge_index(ca[u], ca[v]);
                    const Slope sa = t.tets[j].edge_slopes[ea];
                    const Slope target = wrap ? apply_to_slope(back, sa) : sa;
                    int eb = -1;
                    for (int x = 0; x < 3; ++x)
                        for (int y = x + 1; y < 3; ++y) {
                            const int cand = edge_index(cb[x], cb[y]);
                            if (t.tets[j2].edge_slopes[cand] == target) eb = cand;
                        }
                    if (eb < 0) throw Error("glued faces disagree on their edge slopes");
                    uf.unite(j * 6 + ea, j2 * 6 + eb);
                }
        }
    }

    // Deterministic classes: numbered by their least (tetrahedron, edge).
    std::vector<long> class_of_root(6 * t.n, -1);
    t.edge_class_of.assign(t.n, {-1, -1, -1, -1, -1, -1});
    for (long j = 0; j < t.n; ++j)
        for (int e = 0; e < 6; ++e) {
            const long r = uf.find(j * 6 + e);
            if (class_of_root[r] < 0) {
                class_of_root[r] = static_cast<long>(t.edge_classes.size());
                t.edge_classes.emplace_back();
            }
            EdgeClass& cls = t.edge_classes[class_of_root[r]];
            cls.slots.push_back({j, e});
            cls.angle_slots.push_back({j, t.tets[j].edge_pair[e]});
            t.edge_class_of[j][e] = class_of_root[r];
        }
    if (static_cast<long>(t.edge_classes.size()) != t.n)
        throw Error("edge class count disagrees with the word length");
    return t;
}

GluingSystem gluing_equations(const LayeredTriangulation& t) {
    const long n = t.n;
    GluingSystem sys;
    sys.coeffs = Eigen::MatrixXi::Zero(2 * n, 3 * n);
    sys.rhs = Eigen::VectorXi(2 * n);
    for (long j = 0; j < n; ++j) {
        for (int p = 0; p < 3; ++p) sys.coeffs(j, 3 * j + p) = 1;
        sys.rhs(j) = 1;
    }
    for (long c = 0; c < n; ++c) {
        for (const auto& [tet, pair] : t.edge_classes[c].angle_slots)
            sys.coeffs(n + c, 3 * tet + pair) += 1;
        sys.rhs(n + c) = 2;
    }
    return sys;
}

double lobachevsky(double theta) {
    const double pi = std::numbers::pi;
    const double r = std::remainder(theta, pi);  // in [-pi/2, pi/2]
    const double x = std::fabs(r);
    if (x == 0.0 || x == pi / 2) return 0.0;

    const auto& zeta = zeta_even_table();
    const double t2 = (x / pi) * (x / pi);
    double series = 0.0, pw = 1.0;
    for (size_t m = 1; m <= zeta.size(); ++m) {
        pw *= t2;
        series += zeta[m - 1] * pw / static_cast<double>(m * (2 * m + 1));
    }
    const double val = x * (1.0 - std::log(2.0 * x)) + x * series;
    return r < 0 ? -val : val;
}

double regular_ideal_volume() {
    static const double v3 = 3.0 * lobachevsky(std::numbers::pi / 3.0);
    return v3;
}

std::pair<AngleStructure, ShapeSolution> solve_geometric(const LayeredTriangulation& t,
                                                         double tol) {
    if (!(tol > 0.0)) throw Error("solver tolerance must be positive");
    const double pi = std::numbers::pi;
    const long dim = 3 * t.n;

    const GluingSystem sys = gluing_equations(t);
    const Eigen::MatrixXd A = sys.coeffs.cast<double>();
    const Eigen::VectorXd b = sys.rhs.cast<double>() * pi;

    // All angles pi/3, corrected minimally onto the affine constraint set.
    const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(dim, pi / 3.0);
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    const Eigen::VectorXd xf = x0 + cod.solve(b - A * x0);
    if ((A * xf - b).lpNorm<Eigen::Infinity>() > 1e-9)
        throw Error("angle constraints are inconsistent");

    // Orthonormal basis of the constraint null space; ascent directions and
    // the convergence test live in these reduced coordinates.
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    const Eigen::MatrixXd kernel = lu.kernel();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(kernel);
    const Eigen::MatrixXd Q =
        qr.householderQ() * Eigen::MatrixXd::Identity(dim, kernel.cols());

    Eigen::VectorXd y = Eigen::VectorXd::Zero(Q.cols());
    Eigen::VectorXd x = xf;

    // Phase one when the projected start is not safely interior: push inward
    // by maximizing a smoothed log barrier (concave, defined everywhere).
    if (x.minCoeff() < 1e-4) {
        const double t0 = 1e-3;
        const auto smoothed_log = [&](double v, double& d1, double& d2) {
            if (v >= t0) {
                d1 = 1.0 / v;
                d2 = -1.0 / (v * v);
                return std::log(v);
            }
            const double u = v - t0;
            d1 = 1.0 / t0 - u / (t0 * t0);
            d2 = -1.0 / (t0 * t0);
            return std::log(t0) + u / t0 - 0.5 * u * u / (t0 * t0);
        };
        const auto surrogate = [&](const Eigen::VectorXd& xx) {
            double s = 0.0, d1 = 0.0, d2 = 0.0;
            for (long i = 0; i < dim; ++i) s += smoothed_log(xx[i], d1, d2);
            return s;
        };
        for (int iter = 0; iter < 200; ++iter) {
            x = xf + Q * y;
            if (x.minCoeff() >= 1e-4) break;
            Eigen::VectorXd g(dim), h(dim);
            for (long i = 0; i < dim; ++i) smoothed_log(x[i], g[i], h[i]);
            const Eigen::VectorXd gr = Q.transpose() * g;
            if (gr.lpNorm<Eigen::Infinity>() < 1e-12) break;  // barrier optimum
            const Eigen::MatrixXd Hr = Q.transpose() * h.asDiagonal() * Q;
            Eigen::LDLT<Eigen::MatrixXd> ldlt(-Hr);
            Eigen::VectorXd dy = ldlt.solve(gr);
            if (ldlt.info() != Eigen::Success || gr.dot(dy) <= 0.0) dy = gr;
            const double slope0 = g.dot(Q * dy);
            const double base = surrogate(x);
            double step = 1.0;
            for (int halvings = 0; halvings < 60; ++halvings) {
                if (surrogate(xf + Q * (y + step * dy)) >= base + 1e-4 * step * slope0)
                    break;
                step *= 0.5;
            }
            y += step * dy;
        }
        x = xf + Q * y;
        if (x.minCoeff() <= 0.0)
            throw NoInteriorPoint("angle polytope has an empty interior");
    }

    // Newton ascent on the strictly concave total volume.
    bool converged = false;
    for (int iter = 0; iter < 500; ++iter) {
        x = xf + Q * y;
        Eigen::VectorXd g(dim), h(dim);
        for (long i = 0; i < dim; ++i) {
            const double s = std::sin(x[i]);
            g[i] = -std::log(2.0 * s);
            h[i] = -std::cos(x[i]) / s;
        }
        const Eigen::VectorXd gr = Q.transpose() * g;
        if (gr.lpNorm<Eigen::Infinity>() < tol) {
            converged = true;
            break;
        }
        const Eigen::MatrixXd Hr = Q.transpose() * h.asDiagonal() * Q;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(-Hr);
        Eigen::VectorXd dy = ldlt.solve(gr);
        if (ldlt.info() != Eigen::Success || gr.dot(dy) <= 0.0) dy = gr;

        const Eigen::VectorXd d = Q * dy;
        double cap = std::numeric_limits<double>::infinity();
        for (long i = 0; i < dim; ++i)
            if (d[i] < 0.0) cap = std::min(cap, -x[i] / d[i]);
        double step = std::min(1.0, 0.99 * cap);
        const double base = total_objective(x);
        const double slope0 = g.dot(d);
        // Near the maximum the predicted increase sinks below the rounding
        // noise of the objective sum; demanding certified progress there
        // would stall the line search, so sub-noise Newton steps pass as is.
        const double noise = 1e-14 * (1.0 + std::fabs(base));
        if (slope0 > noise) {
            for (int halvings = 0; halvings < 60; ++halvings) {
                if (step * slope0 < noise) break;
                if (total_objective(xf + Q * (y + step * dy)) >=
                    base + 1e-4 * step * slope0 - noise)
                    break;
                step *= 0.5;
            }
        }
        y += step * dy;
    }
    if (!converged) throw NonConvergence("volume maximization did not converge");

    AngleStructure angles;
    angles.n = t.n;
    angles.angles.resize(t.n);
    for (long j = 0; j < t.n; ++j)
        angles.angles[j] = {x[3 * j], x[3 * j + 1], x[3 * j + 2]};

    ShapeSolution shapes;
    shapes.shapes.reserve(t.n);
    for (long j = 0; j < t.n; ++j) {
        const auto& [al, be, ga] = angles.angles[j];
        shapes.shapes.push_back(std::polar(std::sin(be) / std::sin(ga), al));
    }
    // Log-form gluing defect: around each edge the shape logs must add up to
    // 2 pi i (modulus part zero, angles a full turn).
    shapes.residual = 0.0;
    for (const EdgeClass& cls : t.edge_classes) {
        std::complex<double> sum{0.0, 0.0};
        for (const auto& [tet, pair] : cls.angle_slots) {
            const auto& [al, be, ga] = angles.angles[tet];
            if (pair == 0)
                sum += std::complex<double>(
                    std::log(std::sin(be)) - std::log(std::sin(ga)), al);
            else if (pair == 1)
                sum += std::complex<double>(
                    std::log(std::sin(ga)) - std::log(std::sin(al)), be);
            else
                sum += std::complex<double>(
                    std::log(std::sin(al)) - std::log(std::sin(be)), ga);
        }
        shapes.residual =
            std::max(shapes.residual, std::abs(sum - std::complex<double>(0.0, 2.0 * pi)));
    }
    return {angles, shapes};
}

VolumeResult volume(const AngleStructure& a, double bound_tol) {
    VolumeResult r;
    r.n = a.n;
    for (const auto& [al, be, ga] : a.angles)
        r.volume += lobachevsky(al) + lobachevsky(be) + lobachevsky(ga);
    r.bound = static_cast<double>(a.n) * regular_ideal_volume();
    r.bound_satisfied = r.volume <= r.bound + bound_tol;
    r.equality_gap = r.bound - r.volume;
    return r;
}

}  // namespace ptb
