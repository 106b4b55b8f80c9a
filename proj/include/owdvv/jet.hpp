#pragma once

#include "owdvv/rational.hpp"

#include <string>
#include <vector>

namespace owdvv {

/*
 * Truncated multivariate Taylor jet  c0 + sum_i a_i e_i + sum_{i<=j} A_ij e_i e_j
 * in n formal directions, truncated above total order 1 or 2.  A jet with
 * n = 0 is a plain constant and adopts the shape of whatever it meets.
 */
class Jet {
public:
    Jet() : c_(1, Rational(0)) {}
    Jet(const Rational& c) : c_(1, c) {}
    Jet(long c) : c_(1, Rational(c)) {}

    static Jet constant(int nvars, int order, const Rational& c);
    /* base + e_index */
    static Jet variable(int nvars, int order, int index, const Rational& base);

    int nvars() const { return n_; }
    int order() const { return order_; }
    const Rational& base() const { return c_[0]; }
    Rational grad(int i) const;
    /* Second partial derivative d_i d_j at the base point. */
    Rational second(int i, int j) const;
    /* Coefficient of the monomial e_i e_j (i <= j). */
    Rational mono2(int i, int j) const;

    bool is_zero() const;
    Jet nilpotent() const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet operator-() const;
    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend bool operator==(const Jet& a, const Jet& b);

    std::string str() const;

private:
    int n_ = 0;
    int order_ = 0;
    std::vector<Rational> c_;

    size_t qidx(int i, int j) const;
    void promote(int n, int order);
};

inline bool is_zero(const Jet& x) { return x.is_zero(); }
inline bool base_is_zero(const Jet& x) { return sgn(x.base()) == 0; }
inline Rational base_value(const Jet& x) { return x.base(); }
inline int nilpotency(const Jet& x) { return x.order(); }
inline Jet nilpotent_part(const Jet& x) { return x.nilpotent(); }
Jet inverse(const Jet& x);

}  // namespace owdvv
