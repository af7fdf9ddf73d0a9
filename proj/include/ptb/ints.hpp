#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace ptb {

// Arbitrary-precision integer used throughout the exact-arithmetic layer.
// Matrix entries, slopes and surd data grow without bound under composition,
// so nothing here is allowed to silently wrap.
using Int = boost::multiprecision::cpp_int;

inline int sgn(const Int& x) { return x == 0 ? 0 : (x < 0 ? -1 : 1); }

inline Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int gcd_int(const Int& x, const Int& y) {
    return boost::multiprecision::gcd(x, y);
}

// Floor division (cpp_int's operator/ truncates toward zero).
inline Int floor_div(const Int& n, const Int& d) {
    Int q = n / d;
    Int r = n % d;
    if (r != 0 && ((r < 0) != (d < 0))) --q;
    return q;
}

// Floor of sqrt(n) for n >= 0, exact.
inline Int isqrt_floor(const Int& n) {
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const Int& n) {
    if (n < 0) return false;
    Int s = isqrt_floor(n);
    return s * s == n;
}

}  // namespace ptb
