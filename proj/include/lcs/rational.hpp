#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace lcs {

// Exact rational scalar. All expression coefficients are mpq-backed; no
// floating point enters the symbolic layer.
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_one(const Rational& q) { return q == 1; }
inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

inline double to_double(const Rational& q) { return q.get_d(); }

inline std::string to_string(const Rational& q) { return q.get_str(); }

// q^k for integer k; requires q != 0 when k < 0.
Rational rat_pow(const Rational& q, long k);

} // namespace lcs
