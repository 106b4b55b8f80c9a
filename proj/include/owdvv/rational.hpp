#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>

namespace owdvv {

using Rational = mpq_class;

/* Mathematical rejection: degenerate input, missing branch, window too small. */
struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* A requested coefficient lies outside the known window of a truncated series. */
struct WindowError : MathError {
    using MathError::MathError;
};

/* Malformed input data (JSON shape, labels, flags). */
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Rational frac(long num, long den);
std::string to_string(const Rational& q);
Rational parse_rational(const std::string& text);
double to_double(const Rational& q);

/* Exact n-th root when one exists in Q; the positive root is chosen for even n. */
std::optional<Rational> rational_root(const Rational& x, unsigned n);
Rational rational_pow(const Rational& x, long e);
/* binom(q, i) = q (q - 1) ... (q - i + 1) / i! for rational q. */
Rational binom(const Rational& q, int i);
Rational factorial(int n);
/* c_p = 1 + 1/2 + ... + 1/p, c_0 = 0. */
Rational harmonic(int p);

inline bool is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool base_is_zero(const Rational& x) { return sgn(x) == 0; }
inline Rational base_value(const Rational& x) { return x; }
inline int nilpotency(const Rational&) { return 0; }
Rational inverse(const Rational& x);
inline Rational nilpotent_part(const Rational&) { return Rational(0); }

/* Free-function zero test usable inside classes that have an is_zero() member. */
template <class T>
bool ring_is_zero(const T& x)
{
    return is_zero(x);
}

}  // namespace owdvv
