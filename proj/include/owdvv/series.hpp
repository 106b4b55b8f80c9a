#pragma once

#include "owdvv/ratfunc.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <string>

namespace owdvv {

/* Expansion point: infinity (local parameter t = 1/z) or a finite rational point (t = z - phi). */
struct Center {
    bool infinity = true;
    Rational point;

    static Center at_infinity() { return Center{true, Rational(0)}; }
    static Center at(const Rational& p) { return Center{false, p}; }
    friend bool operator==(const Center& a, const Center& b)
    {
        return a.infinity == b.infinity && (a.infinity || a.point == b.point);
    }
    std::string str() const { return infinity ? "inf" : to_string(point); }
};

inline constexpr int kExact = 1 << 28;

inline int sat(long x) { return static_cast<int>(std::min<long>(x, kExact)); }

/*
 * Truncated Laurent-Puiseux series  sum_e c_e tau^e,  tau^ram = t.
 * Coefficients below lo vanish, [lo, lo + c.size()) are stored, then zeros up
 * to hi; from hi on nothing is known.  hi == kExact marks a finite exact sum.
 */
template <class T>
struct Series {
    Center center;
    int ram = 1;
    int lo = kExact;
    int hi = kExact;
    std::vector<T> c;

    static Series zero(Center ctr, int ram = 1, int hi = kExact)
    {
        Series s;
        s.center = ctr;
        s.ram = ram;
        s.lo = hi;
        s.hi = hi;
        return s;
    }
    static Series make(Center ctr, int ram, int lo, std::vector<T> c, int hi)
    {
        Series s;
        s.center = ctr;
        s.ram = ram;
        s.lo = lo;
        s.c = std::move(c);
        s.hi = hi;
        s.normalize();
        return s;
    }
    static Series monomial(Center ctr, int ram, int e, const T& v, int hi = kExact)
    {
        return make(ctr, ram, e, std::vector<T>{v}, hi);
    }

    void normalize()
    {
        if (lo >= hi) {
            c.clear();
            lo = hi;
            return;
        }
        if (static_cast<long>(lo) + static_cast<long>(c.size()) > hi)
            c.resize(hi - lo);
        size_t first = 0;
        while (first < c.size() && is_zero(c[first]))
            ++first;
        if (first == c.size()) {
            c.clear();
            lo = hi;
            return;
        }
        if (first) {
            c.erase(c.begin(), c.begin() + first);
            lo += static_cast<int>(first);
        }
        while (!c.empty() && is_zero(c.back()))
            c.pop_back();
    }

    bool is_exact_zero() const { return c.empty() && hi == kExact; }
    bool empty() const { return c.empty(); }
    int end() const { return lo + static_cast<int>(c.size()); }

    T coeff(int e) const
    {
        if (e >= hi)
            throw WindowError("coefficient tau^" + std::to_string(e) + " at " + center.str() +
                              " is outside the known window (hi = " + std::to_string(hi) + ")");
        if (e < lo || e >= end())
            return T(Rational(0));
        return c[e - lo];
    }
};

template <class T>
void check_compatible(const Series<T>& a, const Series<T>& b)
{
    if (!(a.center == b.center))
        throw MathError("series expanded at different centers");
    if (a.ram != b.ram)
        throw MathError("series with different ramification");
}

/* Replaces tau by tau^k (ram -> ram * k). */
template <class T>
Series<T> ramify(const Series<T>& s, int k)
{
    if (k == 1)
        return s;
    Series<T> r;
    r.center = s.center;
    r.ram = s.ram * k;
    r.lo = s.lo >= kExact ? kExact : s.lo * k;
    r.hi = s.hi >= kExact ? kExact : s.hi * k;
    r.c.assign(s.c.empty() ? 0 : (s.c.size() - 1) * k + 1, T(Rational(0)));
    for (size_t i = 0; i < s.c.size(); ++i)
        r.c[i * k] = s.c[i];
    r.normalize();
    return r;
}

template <class T>
void align(Series<T>& a, Series<T>& b)
{
    if (a.ram == b.ram)
        return;
    int l = std::lcm(a.ram, b.ram);
    a = ramify(a, l / a.ram);
    b = ramify(b, l / b.ram);
}

template <class T>
Series<T> operator+(Series<T> a, Series<T> b)
{
    if (a.is_exact_zero())
        return b;
    if (b.is_exact_zero())
        return a;
    align(a, b);
    check_compatible(a, b);
    int lo = std::min(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    int end = std::min(std::max(a.end(), b.end()), hi);
    std::vector<T> c(std::max(0, end - lo), T(Rational(0)));
    for (int e = lo; e < end; ++e) {
        if (e >= a.lo && e < a.end())
            c[e - lo] += a.c[e - a.lo];
        if (e >= b.lo && e < b.end())
            c[e - lo] += b.c[e - b.lo];
    }
    return Series<T>::make(a.center, a.ram, lo, std::move(c), hi);
}

template <class T>
Series<T> operator-(const Series<T>& a)
{
    Series<T> r = a;
    for (auto& v : r.c)
        v = -v;
    return r;
}

template <class T>
Series<T> operator-(const Series<T>& a, const Series<T>& b)
{
    return a + (-b);
}

template <class T>
Series<T> operator*(const Series<T>& a, const T& s)
{
    Series<T> r = a;
    for (auto& v : r.c)
        v = v * s;
    r.normalize();
    return r;
}

template <class T>
Series<T> operator*(Series<T> a, Series<T> b)
{
    if (a.is_exact_zero() || b.is_exact_zero()) {
        Center ctr = a.is_exact_zero() ? b.center : a.center;
        return Series<T>::zero(ctr, std::max(a.ram, b.ram));
    }
    align(a, b);
    check_compatible(a, b);
    int lo = sat(static_cast<long>(a.lo) + b.lo);
    int hi = std::min(sat(static_cast<long>(a.lo) + b.hi), sat(static_cast<long>(b.lo) + a.hi));
    long full = static_cast<long>(a.c.size()) + static_cast<long>(b.c.size()) - 1;
    int end = static_cast<int>(std::min<long>(static_cast<long>(lo) + std::max(0L, full), hi));
    std::vector<T> c(std::max(0, end - lo), T(Rational(0)));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (is_zero(a.c[i]))
            continue;
        for (size_t j = 0; j < b.c.size() && static_cast<int>(i + j) < end - lo; ++j)
            c[i + j] += a.c[i] * b.c[j];
    }
    return Series<T>::make(a.center, a.ram, lo, std::move(c), hi);
}

/* Drops every coefficient at exponent >= h (lowers the window). */
template <class T>
Series<T> clip(const Series<T>& s, int h)
{
    Series<T> r = s;
    r.hi = std::min(r.hi, h);
    r.normalize();
    return r;
}

/* d/dz, with tau^ram = t and t = z - phi or 1/z. */
template <class T>
Series<T> d_dz(const Series<T>& s)
{
    const int N = s.ram;
    if (s.c.empty()) {
        Series<T> r = s;
        if (s.hi < kExact)
            r.hi = r.lo = s.hi + (s.center.infinity ? N : -N);
        return r;
    }
    std::vector<T> c(s.c.size(), T(Rational(0)));
    for (size_t i = 0; i < s.c.size(); ++i) {
        int e = s.lo + static_cast<int>(i);
        Rational f = s.center.infinity ? Rational(frac(-e, N)) : Rational(frac(e, N));
        c[i] = s.c[i] * T(f);
    }
    int shift = s.center.infinity ? N : -N;
    return Series<T>::make(s.center, N, s.lo + shift, std::move(c), s.hi >= kExact ? kExact : s.hi + shift);
}

/* Formal d/dtau, used for recurrences. */
template <class T>
Series<T> d_dtau(const Series<T>& s)
{
    std::vector<T> c(s.c.size(), T(Rational(0)));
    for (size_t i = 0; i < s.c.size(); ++i)
        c[i] = s.c[i] * T(Rational(s.lo + static_cast<int>(i)));
    return Series<T>::make(s.center, s.ram, s.lo - 1, std::move(c), s.hi >= kExact ? kExact : s.hi - 1);
}

/* Expansion of f at the center, exponents < hi (ram 1). */
template <class T>
Series<T> expand(const RatFunc<T>& f, Center ctr, int hi)
{
    if (f.is_zero())
        return Series<T>::zero(ctr, 1, hi);
    int lo = ctr.infinity ? f.valuation_infinity() : -f.pole_order(ctr.point);
    lo = std::min(lo, hi);
    auto c = ctr.infinity ? f.laurent_at_infinity(lo, hi) : f.laurent_at(ctr.point, lo, hi);
    return Series<T>::make(ctr, 1, lo, std::move(c), hi);
}

/* Branch data for fractional powers of a leading coefficient c0: root^n == c0. */
struct Branch {
    Rational root;
    int n = 1;
};

/* c^q for a coefficient c = c0 (1 + y), y nilpotent. */
template <class T>
T coef_pow(const T& c, const Rational& q, const std::optional<Branch>& br)
{
    Rational c0 = base_value(c);
    if (sgn(c0) == 0)
        throw MathError("power of a coefficient with vanishing base value");
    Rational p0;
    if (q.get_den() == 1) {
        p0 = rational_pow(c0, q.get_num().get_si());
    } else if (br) {
        if (rational_pow(br->root, br->n) != c0)
            throw MathError("declared branch root " + to_string(br->root) + " is not a " +
                            std::to_string(br->n) + "-th root of " + to_string(c0));
        Rational e = q * br->n;
        if (e.get_den() != 1)
            throw MathError("exponent " + to_string(q) + " is not compatible with the declared branch");
        p0 = rational_pow(br->root, e.get_num().get_si());
    } else {
        auto r = rational_root(c0, static_cast<unsigned>(q.get_den().get_ui()));
        if (!r)
            throw MathError("leading coefficient " + to_string(c0) + " has no rational " +
                            q.get_den().get_str() + "-th root; declare a branch root");
        p0 = rational_pow(*r, q.get_num().get_si());
    }
    const int D = nilpotency(c);
    if (D == 0) {
        if (!is_zero(c - T(c0)))
            throw MathError("fractional power of a non-constant coefficient");
        return T(p0);
    }
    T y = nilpotent_part(c) * T(inverse(c0));
    T r = T(Rational(1)), yp = T(Rational(1));
    for (int i = 1; i <= D; ++i) {
        yp = yp * y;
        r += yp * T(binom(q, i));
    }
    return r * T(p0);
}

template <class T>
struct Normalized {
    int v = 0;
    T lc;
    Series<T> uplus;  /* power series, exponents >= 1, window [.., P) */
    Series<T> uminus; /* exact, exponents < 0, nilpotent coefficients */
    int prec = 0;     /* P: U known below this exponent */
};

/* s = lc tau^v (1 + U), U = U+ + U-, with lc having non-nilpotent base. */
template <class T>
Normalized<T> normalize_leading(const Series<T>& s)
{
    Normalized<T> n;
    int v = s.lo;
    while (true) {
        if (v >= s.hi)
            throw WindowError("leading term at " + s.center.str() + " is not determined within the window");
        if (!base_is_zero(s.coeff(v)))
            break;
        ++v;
    }
    n.v = v;
    n.lc = s.coeff(v);
    T inv = inverse(n.lc);
    n.prec = s.hi >= kExact ? kExact : s.hi - v;
    std::vector<T> up, um;
    for (int e = s.lo; e < s.end(); ++e) {
        if (e == v)
            continue;
        T u = s.coeff(e) * inv;
        if (e < v) {
            if (um.empty())
                um.assign(v - e, T(Rational(0)));
            um[e - s.lo] = u;
        } else {
            if (up.size() < static_cast<size_t>(e - v))
                up.resize(e - v, T(Rational(0)));
            up[e - v - 1] = u;
        }
    }
    n.uplus = Series<T>::make(s.center, s.ram, 1, std::move(up), n.prec);
    n.uminus = Series<T>::make(s.center, s.ram, s.lo - v, std::move(um), kExact);
    return n;
}

/* (1 + u)^q for a power series u with vanishing constant term. */
template <class T>
Series<T> one_plus_pow(const Series<T>& u, const Rational& q)
{
    if (u.c.empty() && u.hi >= kExact)
        return Series<T>::monomial(u.center, u.ram, 0, T(Rational(1)));
    if (u.lo < 1)
        throw MathError("one_plus_pow needs a series without constant term");
    int P = u.hi;
    int len = P >= kExact ? 0 : P;
    if (P >= kExact) {
        /* exact polynomial u: integer q keeps the result finite */
        if (q.get_den() != 1 || sgn(q) < 0)
            throw MathError("infinite window requested for a non-terminating power");
        Series<T> r = Series<T>::monomial(u.center, u.ram, 0, T(Rational(1)));
        Series<T> onep = r + u;
        for (long i = 0; i < q.get_num().get_si(); ++i)
            r = r * onep;
        return r;
    }
    std::vector<T> f(len, T(Rational(0))), g(len, T(Rational(0)));
    f[0] = T(Rational(1));
    for (int e = 1; e < len; ++e)
        f[e] = u.coeff(e);
    g[0] = T(Rational(1));
    for (int n = 1; n < len; ++n) {
        T acc = T(Rational(0));
        for (int k = 1; k <= n; ++k) {
            if (is_zero(f[k]))
                continue;
            Rational w = (q + 1) * k - n;
            acc += f[k] * g[n - k] * T(w);
        }
        g[n] = acc * T(frac(1, n));
    }
    return Series<T>::make(u.center, u.ram, 0, std::move(g), P);
}

/* log(1 + u) for a power series u with vanishing constant term. */
template <class T>
Series<T> one_plus_log(const Series<T>& u)
{
    if (u.c.empty() && u.hi >= kExact)
        return Series<T>::zero(u.center, u.ram);
    if (u.lo < 1)
        throw MathError("one_plus_log needs a series without constant term");
    if (u.hi >= kExact)
        throw MathError("infinite window requested for a logarithm");
    int len = u.hi;
    std::vector<T> f(len, T(Rational(0))), L(len, T(Rational(0)));
    for (int e = 1; e < len; ++e)
        f[e] = u.coeff(e);
    for (int k = 1; k < len; ++k) {
        T acc = f[k] * T(Rational(k));
        for (int j = 1; j < k; ++j)
            acc -= L[j] * f[k - j] * T(Rational(j));
        L[k] = acc * T(frac(1, k));
    }
    return Series<T>::make(u.center, u.ram, 0, std::move(L), len);
}

/* exp(u) for a power series u with vanishing constant term. */
template <class T>
Series<T> exp_series(const Series<T>& u)
{
    if (u.lo < 1)
        throw MathError("exp_series needs a series without constant term");
    if (u.hi >= kExact)
        throw MathError("infinite window requested for an exponential");
    int len = u.hi;
    std::vector<T> E(len, T(Rational(0)));
    E[0] = T(Rational(1));
    for (int k = 1; k < len; ++k) {
        T acc = T(Rational(0));
        for (int j = 1; j <= k; ++j)
            acc += u.coeff(j) * E[k - j] * T(Rational(j));
        E[k] = acc * T(frac(1, k));
    }
    return Series<T>::make(u.center, u.ram, 0, std::move(E), len);
}

/* s^q; fractional q may ramify the result.  The branch fixes lc^q when lc0 has no rational root. */
template <class T>
Series<T> pow(const Series<T>& s0, const Rational& q, const std::optional<Branch>& br = std::nullopt)
{
    Normalized<T> n0 = normalize_leading(s0);
    Rational vq = q * n0.v;
    int k = static_cast<int>(vq.get_den().get_si());
    Series<T> s = ramify(s0, k);
    Normalized<T> n = k == 1 ? n0 : normalize_leading(s);
    vq = q * n.v;
    if (vq.get_den() != 1)
        throw MathError("internal: non-integral leading exponent");
    T lcq = coef_pow(n.lc, q, br);
    Series<T> main = one_plus_pow(n.uplus, q);
    if (!n.uminus.c.empty()) {
        Series<T> inv = one_plus_pow(n.uplus, Rational(-1));
        Series<T> w = n.uminus * inv;
        Series<T> corr = Series<T>::monomial(s.center, s.ram, 0, T(Rational(1)));
        Series<T> wp = corr;
        int D = nilpotency(n.lc);
        for (auto& v : s.c)
            D = std::max(D, nilpotency(v));
        for (int i = 1; i <= D; ++i) {
            wp = wp * w;
            corr = corr + wp * T(binom(q, i));
        }
        main = main * corr;
    }
    Series<T> lead = Series<T>::monomial(s.center, s.ram, static_cast<int>(vq.get_num().get_si()), lcq);
    return lead * main;
}

template <class T>
Series<T> inverse(const Series<T>& s)
{
    return pow(s, Rational(-1));
}

template <class T>
Series<T> nth_root(const Series<T>& s, int n, const std::optional<Branch>& br = std::nullopt)
{
    return pow(s, frac(1, n), br);
}

/* Series with logarithms: reg + logt * log(t) + sum_c clog[c] * log(c), t the local parameter. */
template <class T>
struct LogSeries {
    Series<T> reg;
    Series<T> logt;
    std::map<Rational, Series<T>> clog;

    static LogSeries from(const Series<T>& s)
    {
        LogSeries r;
        r.reg = s;
        r.logt = Series<T>::zero(s.center, s.ram);
        return r;
    }
    Center center() const { return reg.center; }
};

template <class T>
LogSeries<T> operator+(const LogSeries<T>& a, const LogSeries<T>& b)
{
    LogSeries<T> r;
    r.reg = a.reg + b.reg;
    r.logt = a.logt + b.logt;
    r.clog = a.clog;
    for (auto& [k, v] : b.clog) {
        auto it = r.clog.find(k);
        if (it == r.clog.end())
            r.clog[k] = v;
        else
            it->second = it->second + v;
    }
    return r;
}

template <class T>
LogSeries<T> operator*(const LogSeries<T>& a, const Series<T>& s)
{
    LogSeries<T> r;
    r.reg = a.reg * s;
    r.logt = a.logt * s;
    for (auto& [k, v] : a.clog)
        r.clog[k] = v * s;
    return r;
}

template <class T>
LogSeries<T> operator*(const LogSeries<T>& a, const T& s)
{
    LogSeries<T> r;
    r.reg = a.reg * s;
    r.logt = a.logt * s;
    for (auto& [k, v] : a.clog)
        r.clog[k] = v * s;
    return r;
}

template <class T>
LogSeries<T> operator-(const LogSeries<T>& a, const LogSeries<T>& b)
{
    return a + b * T(Rational(-1));
}

/* d/dz; log(t) differentiates to 1/t at a finite center and to -1/z = -t at infinity. */
template <class T>
LogSeries<T> d_dz(const LogSeries<T>& a)
{
    LogSeries<T> r;
    r.reg = d_dz(a.reg);
    r.logt = d_dz(a.logt);
    for (auto& [k, v] : a.clog)
        r.clog[k] = d_dz(v);
    if (!a.logt.is_exact_zero()) {
        const int N = a.logt.ram;
        Series<T> dl = a.reg.center.infinity ? Series<T>::monomial(a.reg.center, N, N, T(Rational(-1)))
                                             : Series<T>::monomial(a.reg.center, N, -N, T(Rational(1)));
        r.reg = r.reg + a.logt * dl;
    }
    return r;
}

/* log of a series with invertible leading coefficient. */
template <class T>
LogSeries<T> log(const Series<T>& s)
{
    Normalized<T> n = normalize_leading(s);
    LogSeries<T> r;
    Rational c0 = base_value(n.lc);
    Series<T> reg = one_plus_log(n.uplus);
    const int D0 = nilpotency(n.lc);
    if (D0 > 0) {
        T y = nilpotent_part(n.lc) * T(inverse(c0));
        T acc = T(Rational(0)), yp = T(Rational(1));
        for (int i = 1; i <= D0; ++i) {
            yp = yp * y;
            acc += yp * T(frac(i % 2 ? 1 : -1, i));
        }
        reg = reg + Series<T>::monomial(s.center, s.ram, 0, acc);
    }
    if (!n.uminus.c.empty()) {
        Series<T> w = n.uminus * one_plus_pow(n.uplus, Rational(-1));
        Series<T> wp = Series<T>::monomial(s.center, s.ram, 0, T(Rational(1)));
        int D = D0;
        for (auto& v : s.c)
            D = std::max(D, nilpotency(v));
        for (int i = 1; i <= D; ++i) {
            wp = wp * w;
            reg = reg + wp * T(frac(i % 2 ? 1 : -1, i));
        }
    }
    r.reg = reg;
    r.logt = n.v ? Series<T>::monomial(s.center, s.ram, 0, T(frac(n.v, s.ram))) : Series<T>::zero(s.center, s.ram);
    if (c0 != 1)
        r.clog[c0] = Series<T>::monomial(s.center, s.ram, 0, T(Rational(1)));
    return r;
}

/*
 * Compositional inverse of s(tau) = a0 tau + a1 tau^2 + ...  (a0 invertible)
 * by Lagrange inversion, b_k = (1/k) [tau^(k-1)] (s / tau)^(-k).
 */
template <class T>
Series<T> revert(const Series<T>& s)
{
    if (s.ram != 1)
        throw MathError("reversion of a ramified series");
    if (s.c.empty() || s.lo != 1 || base_is_zero(s.c[0]))
        throw MathError("reversion needs valuation exactly 1 with invertible linear coefficient");
    if (s.hi >= kExact)
        throw MathError("infinite window requested for a reversion");
    int P = s.hi - 1;
    std::vector<T> a(P, T(Rational(0)));
    for (int i = 0; i < P; ++i)
        a[i] = s.coeff(i + 1);
    Series<T> A = Series<T>::make(s.center, 1, 0, a, P);
    Series<T> R = inverse(A);
    std::vector<T> b(P, T(Rational(0)));
    Series<T> Rk = Series<T>::monomial(s.center, 1, 0, T(Rational(1)));
    for (int k = 1; k <= P; ++k) {
        Rk = clip(Rk * R, P);
        b[k - 1] = Rk.coeff(k - 1) * T(frac(1, k));
    }
    return Series<T>::make(s.center, 1, 1, std::move(b), s.hi);
}

/* outer(inner(tau)), inner of valuation >= 1, outer a power series. */
template <class T>
Series<T> compose(const Series<T>& outer, const Series<T>& inner)
{
    if (inner.lo < 1)
        throw MathError("composition needs an inner series of positive valuation");
    if (outer.lo < 0)
        throw MathError("composition needs an outer power series");
    int h = outer.hi;
    Series<T> r = Series<T>::zero(inner.center, inner.ram);
    Series<T> p = Series<T>::monomial(inner.center, inner.ram, 0, T(Rational(1)));
    for (int e = 0; e < std::min(h, outer.end()); ++e) {
        if (e > 0)
            p = p * inner;
        if (e >= outer.lo)
            r = r + p * outer.coeff(e);
    }
    return clip(r, sat(static_cast<long>(h) * inner.lo));
}

/* (s)_{inf, >= 0}: the polynomial part in z of an expansion at infinity. */
template <class T>
RatFunc<T> truncate_infinity_nonneg(const Series<T>& s)
{
    if (!s.center.infinity)
        throw MathError("truncation at infinity of a series centred elsewhere");
    const int N = s.ram;
    if (s.hi <= 0)
        throw WindowError("window ends before the constant term at infinity");
    std::vector<T> pc;
    for (int e = s.lo; e <= 0 && e < s.end(); ++e) {
        T v = s.coeff(e);
        if (is_zero(v))
            continue;
        if (e % N != 0)
            throw MathError("fractional exponent survives the truncation at infinity");
        int k = -e / N;
        if (pc.size() <= static_cast<size_t>(k))
            pc.resize(k + 1, T(Rational(0)));
        pc[k] = v;
    }
    return RatFunc<T>(Poly<T>(std::move(pc)));
}

/* (s)_{phi, <= -1}: the principal part at a finite center. */
template <class T>
RatFunc<T> truncate_pole_neg(const Series<T>& s)
{
    if (s.center.infinity)
        throw MathError("principal-part truncation of a series centred at infinity");
    const int N = s.ram;
    if (s.hi <= -N)
        throw WindowError("window ends before the residue term at " + s.center.str());
    RatFunc<T> r;
    std::vector<T> pp;
    for (int e = s.lo; e <= -N && e < s.end(); ++e) {
        T v = s.coeff(e);
        if (is_zero(v))
            continue;
        if (e % N != 0)
            throw MathError("fractional exponent survives the truncation at " + s.center.str());
        int j = -e / N;
        if (pp.size() < static_cast<size_t>(j))
            pp.resize(j, T(Rational(0)));
        pp[j - 1] = v;
    }
    if (!pp.empty())
        r.parts[s.center.point] = std::move(pp);
    r.canonicalize();
    return r;
}

template <class T>
RatFunc<T> truncate(const Series<T>& s)
{
    return s.center.infinity ? truncate_infinity_nonneg(s) : truncate_pole_neg(s);
}

/* Coefficient of z^k in an expansion at infinity (k may be fractional via ram). */
template <class T>
T coeff_z(const Series<T>& s, const Rational& k)
{
    Rational e = -k * s.ram;
    if (e.get_den() != 1)
        return T(Rational(0));
    return s.coeff(static_cast<int>(e.get_num().get_si()));
}

/* Lower bound for the starting window of with_window (0 = none). */
void set_window_floor(int w);
int window_floor();

/* f(P) for a growing window P until no coefficient falls outside it. */
template <class F>
auto with_window(int start, F f)
{
    int P = std::max(start, window_floor());
    for (int attempt = 0;; ++attempt) {
        try {
            return f(P);
        } catch (const WindowError&) {
            if (attempt >= 6)
                throw;
            P = 2 * P + 4;
        }
    }
}

}  // namespace owdvv
