#include "ptb/sl2z.hpp"

#include <cassert>
#include <map>
#include <sstream>
#include <tuple>

namespace ptb {

MatSL2::MatSL2(Int a_, Int b_, Int c_, Int d_)
    : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {
    Int det = a * d - b * c;
    if (det != 1)
        throw DeterminantError("matrix determinant must be 1, got " + det.str());
}

MatSL2 MatSL2::identity() { return MatSL2(1, 0, 0, 1); }
MatSL2 MatSL2::twist_r() { return MatSL2(1, 1, 0, 1); }
MatSL2 MatSL2::twist_l() { return MatSL2(1, 0, 1, 1); }
MatSL2 MatSL2::twist_r_pow(const Int& k) { return MatSL2(1, k, 0, 1); }
MatSL2 MatSL2::twist_l_pow(const Int& k) { return MatSL2(1, 0, k, 1); }

MatSL2 MatSL2::inverse() const { return MatSL2(d, -b, -c, a); }
MatSL2 MatSL2::negated() const { return MatSL2(-a, -b, -c, -d); }

MatSL2 MatSL2::operator*(const MatSL2& o) const {
    return MatSL2(a * o.a + b * o.c, a * o.b + b * o.d,
                  c * o.a + d * o.c, c * o.b + d * o.d);
}

bool MatSL2::operator==(const MatSL2& o) const {
    return a == o.a && b == o.b && c == o.c && d == o.d;
}

bool MatSL2::operator<(const MatSL2& o) const {
    return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d);
}

std::string MatSL2::str() const {
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

bool is_hyperbolic(const MatSL2& m) { return abs_int(m.trace()) > 2; }

Slope::Slope(Int p_, Int q_) : p(std::move(p_)), q(std::move(q_)) {
    if (p == 0 && q == 0) throw Error("slope 0/0 is not a boundary point");
    Int g = gcd_int(p, q);
    p /= g;
    q /= g;
    if (q < 0) { p = -p; q = -q; }
    if (q == 0) p = 1;  // both lifts of infinity collapse to 1/0
}

bool Slope::operator<(const Slope& o) const {
    return std::tie(p, q) < std::tie(o.p, o.q);
}

std::string Slope::str() const { return p.str() + "/" + q.str(); }

Slope apply_to_slope(const MatSL2& m, const Slope& s) {
    return Slope(m.a * s.p + m.b * s.q, m.c * s.p + m.d * s.q);
}

bool farey_adjacent(const Slope& s1, const Slope& s2) {
    return abs_int(s1.p * s2.q - s2.p * s1.q) == 1;
}

QuadraticSurd::QuadraticSurd(Int p_, Int d_, Int q_)
    : p(std::move(p_)), d(std::move(d_)), q(std::move(q_)) {
    if (d <= 0 || is_square(d)) throw Error("surd radicand must be a positive non-square");
    if (q == 0) throw Error("surd denominator must be nonzero");
    // Arrange q | d - p^2 by scaling all three entries if necessary.
    if ((d - p * p) % q != 0) {
        Int s = abs_int(q);
        p *= s;
        d *= q * q;
        q *= s;
    }
    // Strip common square content, but only when the divisibility survives.
    Int g = gcd_int(p, q);
    for (Int f = 2; f * f <= g; ++f) {
        while (g % f == 0) {
            Int pn = p / f, qn = q / f, dn = d / (f * f);
            if (p % f == 0 && q % f == 0 && d % (f * f) == 0 &&
                (dn - pn * pn) % qn == 0) {
                p = pn; q = qn; d = dn;
                g = gcd_int(p, q);
            } else {
                break;
            }
        }
    }
    // g itself may be the last prime factor.
    if (g > 1) {
        Int pn = p / g, qn = q / g;
        if (d % (g * g) == 0) {
            Int dn = d / (g * g);
            if ((dn - pn * pn) % qn == 0) { p = pn; q = qn; d = dn; }
        }
    }
    assert((d - p * p) % q == 0);
}

bool QuadraticSurd::operator==(const QuadraticSurd& o) const {
    // (p1 + sqrt(d1))/q1 == (p2 + sqrt(d2))/q2 as real numbers.
    return p * o.q == o.p * q && d * o.q * o.q == o.d * q * q &&
           sgn(q) == sgn(o.q);
}

namespace {

// Exact floor of (pp + sqrt(dd))/qq assuming qq | dd - pp^2.
Int floor_surd(const Int& pp, const Int& dd, const Int& qq) {
    // "x >= a" decided with integer arithmetic only.
    auto ge = [&](const Int& a) {
        Int t = a * qq - pp;  // compare sqrt(dd) against t
        if (qq > 0) return t <= 0 || dd > t * t;
        return t >= 0 && dd < t * t;
    };
    Int a = floor_div(pp + isqrt_floor(dd), qq);
    while (!ge(a)) --a;
    while (ge(a + 1)) ++a;
    return a;
}

}  // namespace

Int QuadraticSurd::floor() const { return floor_surd(p, d, q); }

double QuadraticSurd::approx() const {
    return (p.convert_to<double>() + sqrt(d.convert_to<double>())) /
           q.convert_to<double>();
}

std::string QuadraticSurd::str() const {
    return "(" + p.str() + "+sqrt(" + d.str() + "))/" + q.str();
}

ContinuedFraction surd_continued_fraction(const QuadraticSurd& x) {
    // States (p_i, q_i) with fixed radicand repeat exactly; the first
    // repeated state marks the start of the period.
    Int P = x.p, Q = x.q;
    const Int& D = x.d;
    std::map<std::pair<Int, Int>, size_t> seen;
    std::vector<Int> digits;
    for (size_t iter = 0; iter < 1000000; ++iter) {
        auto key = std::make_pair(P, Q);
        auto it = seen.find(key);
        if (it != seen.end()) {
            ContinuedFraction cf;
            cf.preperiod.assign(digits.begin(), digits.begin() + it->second);
            cf.period.assign(digits.begin() + it->second, digits.end());
            return cf;
        }
        seen.emplace(key, digits.size());
        Int a = floor_surd(P, D, Q);
        digits.push_back(a);
        Int Pn = a * Q - P;
        assert((D - Pn * Pn) % Q == 0);
        Int Qn = (D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    throw Error("continued fraction failed to become periodic");
}

QuadraticSurd attracting_fixed_point(const MatSL2& m) {
    if (!is_hyperbolic(m))
        throw NonHyperbolic("matrix trace " + m.trace().str() +
                            " has absolute value <= 2");
    MatSL2 M = m.trace() < 0 ? m.negated() : m;
    // c == 0 with det 1 forces trace +-2, excluded above.
    assert(M.c != 0);
    Int D = M.trace() * M.trace() - 4;
    return QuadraticSurd(M.a - M.d, D, 2 * M.c);
}

Int TwistWord::letter_count() const {
    Int n = 0;
    for (const auto& [l, mm] : syllables) n += l + mm;
    return n;
}

std::vector<char> TwistWord::letters() const {
    validate();
    std::vector<char> out;
    for (const auto& [l, mm] : syllables) {
        if (l > 1000000 || mm > 1000000)
            throw Error("twist exponent too large to expand letter by letter");
        for (Int i = 0; i < l; ++i) out.push_back('R');
        for (Int i = 0; i < mm; ++i) out.push_back('L');
    }
    return out;
}

void TwistWord::validate() const {
    if (sign != 1 && sign != -1) throw Error("twist word sign must be +-1");
    for (const auto& [l, mm] : syllables)
        if (l <= 0 || mm <= 0)
            throw NonPositiveSyllable("twist exponents must be positive, got (" +
                                      l.str() + "," + mm.str() + ")");
}

namespace {

// Index of the syllable rotation whose flattened exponent sequence is
// lexicographically least (lowest index on ties).
size_t canonical_rotation_index(const std::vector<std::pair<Int, Int>>& syl) {
    size_t r = syl.size();
    if (r <= 1) return 0;
    auto flat = [&](size_t rot, size_t j) -> const Int& {
        size_t s = (rot + j / 2) % r;
        return j % 2 == 0 ? syl[s].first : syl[s].second;
    };
    size_t best = 0;
    for (size_t cand = 1; cand < r; ++cand) {
        for (size_t j = 0; j < 2 * r; ++j) {
            if (flat(cand, j) < flat(best, j)) { best = cand; break; }
            if (flat(best, j) < flat(cand, j)) break;
        }
    }
    return best;
}

}  // namespace

TwistWord TwistWord::canonical_rotation() const {
    validate();
    TwistWord out;
    out.sign = sign;
    size_t r0 = canonical_rotation_index(syllables);
    for (size_t i = 0; i < syllables.size(); ++i)
        out.syllables.push_back(syllables[(r0 + i) % syllables.size()]);
    return out;
}

std::string TwistWord::str() const {
    std::string s = sign < 0 ? "-" : "";
    if (syllables.empty()) return s + "1";
    bool first = true;
    for (const auto& [l, mm] : syllables) {
        if (!first) s += " ";
        first = false;
        s += "R";
        if (l != 1) s += "^" + l.str();
        s += " L";
        if (mm != 1) s += "^" + mm.str();
    }
    return s;
}

MatSL2 word_to_matrix(const TwistWord& w) {
    w.validate();
    MatSL2 m = MatSL2::identity();
    for (const auto& [l, mm] : w.syllables)
        m = m * MatSL2::twist_r_pow(l) * MatSL2::twist_l_pow(mm);
    return w.sign < 0 ? m.negated() : m;
}

namespace {

// det +-1 workspace matrix for the continued-fraction bookkeeping; the
// convergent steps [[a,1],[1,0]] have determinant -1 and so cannot be MatSL2.
struct Mat2 {
    Int a, b, c, d;
    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Int det() const { return a * d - b * c; }
};

Mat2 step(const Int& a) { return {a, 1, 1, 0}; }

MatSL2 to_sl2(const Mat2& m) { return MatSL2(m.a, m.b, m.c, m.d); }

}  // namespace

Factorization rl_factorize(const MatSL2& m_in) {
    if (!is_hyperbolic(m_in))
        throw NonHyperbolic("matrix trace " + m_in.trace().str() +
                            " has absolute value <= 2");
    int sign = m_in.trace() < 0 ? -1 : 1;
    MatSL2 M = sign < 0 ? m_in.negated() : m_in;

    ContinuedFraction cf = surd_continued_fraction(attracting_fixed_point(M));
    // Period digits are >= 1 (the periodic tail is a reduced surd), so the
    // word built from them has positive exponents; word_to_matrix re-checks.
    std::vector<Int> digits = cf.period;
    if (digits.size() % 2 != 0)
        digits.insert(digits.end(), cf.period.begin(), cf.period.end());

    // Preperiod steps conjugate the periodic tail onto the fixed point.
    Mat2 S{1, 0, 0, 1};
    for (const Int& a : cf.preperiod) S = S * step(a);

    Mat2 G0 = S;
    if (cf.preperiod.size() % 2 != 0) {
        // det(S) == -1; absorb a mirror swap (which exchanges the two twist
        // generators) and rotate the digit list by one to compensate.
        Mat2 J{0, 1, 1, 0};
        Mat2 Ld{1, 0, digits[0], 1};
        G0 = S * J * Ld;
        digits.push_back(digits.front());
        digits.erase(digits.begin());
    }
    assert(G0.det() == 1);

    TwistWord unit;
    for (size_t i = 0; i < digits.size(); i += 2)
        unit.syllables.emplace_back(digits[i], digits[i + 1]);
    MatSL2 U = word_to_matrix(unit);

    // The conjugated input is a positive power of the primitive word; the
    // trace of U^q grows strictly, so scan until it matches.
    Int target = M.trace();
    TwistWord word;
    MatSL2 W = MatSL2::identity();
    for (int q = 0; q < 10000; ++q) {
        if (W.trace() == target && q > 0) break;
        if (W.trace() > target)
            throw Error("trace mismatch while matching the primitive word power");
        W = W * U;
        word.syllables.insert(word.syllables.end(), unit.syllables.begin(),
                              unit.syllables.end());
    }
    if (W.trace() != target)
        throw Error("failed to match the primitive word power");

    // Rotating to the canonical form conjugates by the skipped prefix.
    size_t r0 = canonical_rotation_index(word.syllables);
    MatSL2 prefix = MatSL2::identity();
    for (size_t i = 0; i < r0; ++i)
        prefix = prefix * MatSL2::twist_r_pow(word.syllables[i].first) *
                 MatSL2::twist_l_pow(word.syllables[i].second);

    Factorization out;
    out.word = word.canonical_rotation();
    out.word.sign = sign;
    out.conjugator = to_sl2(G0) * prefix;
    out.conjugator_found = true;

    MatSL2 rebuilt = out.conjugator * word_to_matrix(out.word) *
                     out.conjugator.inverse();
    if (rebuilt != m_in)
        throw Error("internal factorization check failed for " + m_in.str());
    return out;
}

}  // namespace ptb
