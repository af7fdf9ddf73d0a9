#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ptb/errors.hpp"
#include "ptb/ints.hpp"

namespace ptb {

// 2x2 integer matrix with determinant +1, row-major [[a,b],[c,d]].
struct MatSL2 {
    Int a, b, c, d;

    MatSL2(Int a_, Int b_, Int c_, Int d_);

    static MatSL2 identity();
    static MatSL2 twist_r();                 // [[1,1],[0,1]]
    static MatSL2 twist_l();                 // [[1,0],[1,1]]
    static MatSL2 twist_r_pow(const Int& k); // [[1,k],[0,1]]
    static MatSL2 twist_l_pow(const Int& k); // [[1,0],[k,1]]

    Int trace() const { return a + d; }
    MatSL2 inverse() const;  // exact, via the adjugate
    MatSL2 negated() const;

    MatSL2 operator*(const MatSL2& o) const;
    bool operator==(const MatSL2& o) const;
    bool operator!=(const MatSL2& o) const { return !(*this == o); }
    bool operator<(const MatSL2& o) const;  // lexicographic, for map keys

    std::string str() const;
};

// |trace| > 2, i.e. two distinct real fixed points on the boundary circle.
bool is_hyperbolic(const MatSL2& m);

// Reduced fraction p/q with q >= 0; infinity is 1/0.
struct Slope {
    Int p, q;

    Slope(Int p_, Int q_);  // normalizes sign and divides out the gcd

    static Slope infinity() { return Slope(1, 0); }

    bool is_infinity() const { return q == 0; }
    bool operator==(const Slope& o) const { return p == o.p && q == o.q; }
    bool operator!=(const Slope& o) const { return !(*this == o); }
    bool operator<(const Slope& o) const;

    std::string str() const;  // "p/q"
};

// Moebius action on the boundary: p/q -> (a p + b q)/(c p + d q).
Slope apply_to_slope(const MatSL2& m, const Slope& s);

// True when the slopes span a Farey edge: |p1 q2 - p2 q1| == 1.
bool farey_adjacent(const Slope& s1, const Slope& s2);

// Real quadratic irrational (p + sqrt(d))/q with d > 0 non-square, q != 0,
// kept in a form where q divides d - p^2 (needed by the continued-fraction
// recurrence).  The radical always enters with a plus sign; q carries the
// sign of the irrational part.
struct QuadraticSurd {
    Int p, d, q;

    QuadraticSurd(Int p_, Int d_, Int q_);

    // Value-based comparison (independent of the chosen representation).
    bool operator==(const QuadraticSurd& o) const;
    bool operator!=(const QuadraticSurd& o) const { return !(*this == o); }

    Int floor() const;       // exact integer floor
    double approx() const;   // for display only

    std::string str() const;
};

// Eventually periodic continued fraction [pre..; per..] with per repeating.
struct ContinuedFraction {
    std::vector<Int> preperiod;
    std::vector<Int> period;
};

// Expansion of a quadratic irrational; the period is detected exactly.
ContinuedFraction surd_continued_fraction(const QuadraticSurd& x);

// Fixed point the Moebius action of m attracts to; throws NonHyperbolic.
QuadraticSurd attracting_fixed_point(const MatSL2& m);

// Word sign * R^{l_1} L^{m_1} ... R^{l_r} L^{m_r}, all exponents >= 1.
struct TwistWord {
    int sign = 1;  // +1 or -1
    std::vector<std::pair<Int, Int>> syllables;

    Int r() const { return Int(syllables.size()); }
    Int letter_count() const;            // sum of all exponents
    std::vector<char> letters() const;   // expansion into 'R'/'L' marks

    void validate() const;  // throws NonPositiveSyllable on bad exponents

    // Rotates syllables so the flattened exponent sequence is
    // lexicographically least among all syllable rotations.
    TwistWord canonical_rotation() const;

    bool operator==(const TwistWord& o) const {
        return sign == o.sign && syllables == o.syllables;
    }
    bool operator!=(const TwistWord& o) const { return !(*this == o); }

    std::string str() const;  // e.g. "-R^2 L R L^3"
};

MatSL2 word_to_matrix(const TwistWord& w);

// Result of the normal-form computation: input = conjugator * word * conjugator^-1.
struct Factorization {
    TwistWord word;
    MatSL2 conjugator = MatSL2::identity();
    bool conjugator_found = false;
};

// Twist-word normal form of a hyperbolic matrix, computed from the
// continued-fraction expansion of its attracting fixed point.  The returned
// word is in canonical rotation and the conjugacy is verified exactly.
Factorization rl_factorize(const MatSL2& m);

}  // namespace ptb
