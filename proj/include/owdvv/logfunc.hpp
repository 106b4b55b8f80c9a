#pragma once

#include "owdvv/series.hpp"

#include <map>
#include <string>

namespace owdvv {

/* value + sum_c logs[c] * log(c) with rational arguments c (log 1 is dropped). */
struct LogScalar {
    Rational value;
    std::map<Rational, Rational> logs;

    LogScalar() = default;
    LogScalar(const Rational& v) : value(v) {}

    void add_log(const Rational& arg, const Rational& coef);
    bool is_zero() const;
    std::string str() const;

    LogScalar& operator+=(const LogScalar& o);
    LogScalar& operator-=(const LogScalar& o);
    friend LogScalar operator+(LogScalar a, const LogScalar& b) { return a += b; }
    friend LogScalar operator-(LogScalar a, const LogScalar& b) { return a -= b; }
    friend LogScalar operator*(const LogScalar& a, const Rational& s);
    friend bool operator==(const LogScalar& a, const LogScalar& b) { return (a - b).is_zero(); }
};

/*
 * Function of s with logarithms:
 *   rational(s) + sum_c clog[c](s) log(c) + sum_phi slog[phi](s) log(s - phi).
 */
template <class T>
struct LogRatFunc {
    RatFunc<T> rational;
    std::map<Rational, RatFunc<T>> clog;
    std::map<Rational, RatFunc<T>> slog;

    LogRatFunc() = default;
    LogRatFunc(const RatFunc<T>& r) : rational(r) {}

    void canonicalize()
    {
        for (auto* m : {&clog, &slog})
            for (auto it = m->begin(); it != m->end();)
                it = it->second.is_zero() ? m->erase(it) : std::next(it);
    }
    bool is_zero() const
    {
        for (auto& [k, v] : clog)
            if (!v.is_zero())
                return false;
        for (auto& [k, v] : slog)
            if (!v.is_zero())
                return false;
        return rational.is_zero();
    }
    bool has_logs() const
    {
        for (auto& [k, v] : clog)
            if (!v.is_zero())
                return true;
        for (auto& [k, v] : slog)
            if (!v.is_zero())
                return true;
        return false;
    }

    LogRatFunc& operator+=(const LogRatFunc& o)
    {
        rational += o.rational;
        for (auto& [k, v] : o.clog)
            clog[k] += v;
        for (auto& [k, v] : o.slog)
            slog[k] += v;
        canonicalize();
        return *this;
    }
    LogRatFunc operator-() const
    {
        LogRatFunc r = *this;
        r.rational = -r.rational;
        for (auto& [k, v] : r.clog)
            v = -v;
        for (auto& [k, v] : r.slog)
            v = -v;
        return r;
    }
    LogRatFunc& operator-=(const LogRatFunc& o) { return *this += -o; }
    friend LogRatFunc operator+(LogRatFunc a, const LogRatFunc& b) { return a += b; }
    friend LogRatFunc operator-(LogRatFunc a, const LogRatFunc& b) { return a -= b; }
    friend LogRatFunc operator*(const LogRatFunc& a, const RatFunc<T>& f)
    {
        LogRatFunc r;
        r.rational = a.rational * f;
        for (auto& [k, v] : a.clog)
            r.clog[k] = v * f;
        for (auto& [k, v] : a.slog)
            r.slog[k] = v * f;
        r.canonicalize();
        return r;
    }
    friend LogRatFunc operator*(const LogRatFunc& a, const T& s) { return a * RatFunc<T>(s); }
    friend bool operator==(const LogRatFunc& a, const LogRatFunc& b) { return (a - b).is_zero(); }

    /* d/ds; log(s - phi) differentiates to 1/(s - phi). */
    LogRatFunc derivative() const
    {
        LogRatFunc r;
        r.rational = rational.derivative();
        for (auto& [k, v] : clog)
            r.clog[k] = v.derivative();
        for (auto& [phi, v] : slog) {
            r.slog[phi] = v.derivative();
            r.rational += v * RatFunc<T>::pole(phi, 1, T(Rational(1)));
        }
        r.canonicalize();
        return r;
    }
};

template <class U, class T, class F>
LogRatFunc<U> map_coeffs(const LogRatFunc<T>& f, F fn)
{
    LogRatFunc<U> r;
    r.rational = map_coeffs<U>(f.rational, fn);
    for (auto& [k, v] : f.clog)
        r.clog[k] = map_coeffs<U>(v, fn);
    for (auto& [k, v] : f.slog)
        r.slog[k] = map_coeffs<U>(v, fn);
    r.canonicalize();
    return r;
}

/* Value at a rational s (s must avoid every pole and log branch point). */
LogScalar evaluate(const LogRatFunc<Rational>& f, const Rational& s);

/* Truncation of a log series; a surviving log(t) term is rejected. */
template <class T>
LogRatFunc<T> truncate(const LogSeries<T>& a)
{
    LogRatFunc<T> r;
    r.rational = truncate(a.reg);
    if (!a.logt.c.empty() && a.logt.lo <= (a.reg.center.infinity ? 0 : -a.logt.ram)) {
        RatFunc<T> lt = truncate(a.logt);
        if (!lt.is_zero())
            throw MathError("log(t) term survives the truncation at " + a.reg.center.str());
    }
    for (auto& [k, v] : a.clog)
        r.clog[k] = truncate(v);
    r.canonicalize();
    return r;
}

}  // namespace owdvv
