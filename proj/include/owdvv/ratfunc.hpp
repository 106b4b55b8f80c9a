#pragma once

#include "owdvv/poly.hpp"
#include "owdvv/rational.hpp"

#include <map>
#include <vector>

namespace owdvv {

/*
 * Rational function in canonical partial-fraction form
 *
 *     f(z) = P(z) + sum_phi sum_{j>=1} parts[phi][j-1] (z - phi)^(-j)
 *
 * Pole locations are rational.  Coefficients live in T (Rational, Jet, MPoly);
 * with jets a pole may carry nilpotent higher-order terms, which is how a
 * moving pole is represented around its base location.
 */
template <class T>
struct RatFunc {
    Poly<T> poly;
    std::map<Rational, std::vector<T>> parts;

    RatFunc() = default;
    RatFunc(const T& c) : poly(Poly<T>::constant(c)) {}
    explicit RatFunc(Poly<T> p) : poly(std::move(p)) {}

    static RatFunc monomial(int k, const T& c) { return RatFunc(Poly<T>::monomial(k, c)); }
    /* c (z - phi)^(-j) */
    static RatFunc pole(const Rational& phi, int j, const T& c)
    {
        RatFunc f;
        if (j < 1)
            throw MathError("pole order must be positive");
        std::vector<T> v(j, T(Rational(0)));
        v[j - 1] = c;
        f.parts[phi] = std::move(v);
        f.canonicalize();
        return f;
    }
    /* z - phi0 as a polynomial; phi may carry nilpotent parts */
    static RatFunc linear(const T& phi)
    {
        return RatFunc(Poly<T>(std::vector<T>{-phi, T(Rational(1))}));
    }

    void canonicalize()
    {
        poly.trim();
        for (auto it = parts.begin(); it != parts.end();) {
            auto& v = it->second;
            while (!v.empty() && ring_is_zero(v.back()))
                v.pop_back();
            if (v.empty())
                it = parts.erase(it);
            else
                ++it;
        }
    }

    bool is_zero() const { return poly.is_zero() && parts.empty(); }
    int pole_order(const Rational& phi) const
    {
        auto it = parts.find(phi);
        return it == parts.end() ? 0 : static_cast<int>(it->second.size());
    }
    /* Valuation at infinity in t = 1/z (-degree, or 1 when the polynomial part vanishes). */
    int valuation_infinity() const
    {
        if (!poly.is_zero())
            return -poly.degree();
        return 1;
    }

    T part(const Rational& phi, int j) const
    {
        auto it = parts.find(phi);
        if (it == parts.end() || j < 1 || j > static_cast<int>(it->second.size()))
            return T(Rational(0));
        return it->second[j - 1];
    }

    /* Coefficients of t^e, lo <= e < hi, of the expansion at z = phi + t. */
    std::vector<T> laurent_at(const Rational& phi, int lo, int hi) const
    {
        std::vector<T> out(std::max(0, hi - lo), T(Rational(0)));
        auto put = [&](int e, const T& v) {
            if (e >= lo && e < hi)
                out[e - lo] += v;
        };
        auto own = parts.find(phi);
        if (own != parts.end())
            for (size_t j = 0; j < own->second.size(); ++j)
                put(-static_cast<int>(j + 1), own->second[j]);
        if (hi > 0 && !poly.is_zero()) {
            auto tay = poly.taylor(phi);
            for (size_t e = 0; e < tay.size(); ++e)
                put(static_cast<int>(e), tay[e]);
        }
        for (auto& [psi, v] : parts) {
            if (psi == phi)
                continue;
            Rational delta = phi - psi;
            Rational dinv = inverse(delta);
            for (size_t jj = 0; jj < v.size(); ++jj) {
                if (ring_is_zero(v[jj]))
                    continue;
                int j = static_cast<int>(jj + 1);
                /* (t + delta)^(-j) = sum_e (-1)^e binom(j+e-1, e) delta^(-j-e) t^e */
                Rational c = rational_pow(dinv, j);
                for (int e = 0; e < hi; ++e) {
                    if (e >= lo)
                        put(e, v[jj] * T(Rational(binom(Rational(j + e - 1), e) * c)));
                    c *= -dinv;
                }
            }
        }
        return out;
    }

    /* Coefficients of t^e, lo <= e < hi, of the expansion at infinity, t = 1/z. */
    std::vector<T> laurent_at_infinity(int lo, int hi) const
    {
        std::vector<T> out(std::max(0, hi - lo), T(Rational(0)));
        auto put = [&](int e, const T& v) {
            if (e >= lo && e < hi)
                out[e - lo] += v;
        };
        for (int k = 0; k <= poly.degree(); ++k)
            put(-k, poly.coeffs()[k]);
        for (auto& [psi, v] : parts)
            for (size_t jj = 0; jj < v.size(); ++jj) {
                int j = static_cast<int>(jj + 1);
                /* (z - psi)^(-j) = t^j sum_m binom(j+m-1, m) psi^m t^m */
                Rational pw(1);
                for (int m = 0; j + m < hi; ++m) {
                    if (j + m >= lo)
                        put(j + m, v[jj] * T(Rational(binom(Rational(j + m - 1), m) * pw)));
                    pw *= psi;
                }
            }
        return out;
    }

    RatFunc derivative() const
    {
        RatFunc r(poly.derivative());
        for (auto& [phi, v] : parts) {
            std::vector<T> d(v.size() + 1, T(Rational(0)));
            for (size_t jj = 0; jj < v.size(); ++jj)
                d[jj + 1] = v[jj] * T(Rational(-static_cast<long>(jj + 1)));
            r.parts[phi] = std::move(d);
        }
        r.canonicalize();
        return r;
    }

    T residue(const Rational& phi) const { return part(phi, 1); }
    /* Res at infinity = -(coefficient of 1/z) = -(sum of finite residues). */
    T residue_infinity() const
    {
        T s = T(Rational(0));
        for (auto& [phi, v] : parts)
            s -= v[0];
        return s;
    }

    template <class X>
    X evaluate(const X& x) const
    {
        X r = poly.template evaluate<X>(x);
        for (auto& [phi, v] : parts) {
            X d = x - X(phi);
            X di = inverse(d);
            X p = di;
            for (size_t jj = 0; jj < v.size(); ++jj) {
                r = r + X(v[jj]) * p;
                p = p * di;
            }
        }
        return r;
    }

    RatFunc principal_part(const Rational& phi) const
    {
        RatFunc r;
        auto it = parts.find(phi);
        if (it != parts.end())
            r.parts[phi] = it->second;
        return r;
    }
    RatFunc polynomial_part() const { return RatFunc(poly); }

    /* f(-z) */
    RatFunc reflect() const
    {
        std::vector<T> c = poly.coeffs();
        for (size_t k = 1; k < c.size(); k += 2)
            c[k] = -c[k];
        RatFunc r{Poly<T>(std::move(c))};
        for (auto& [phi, v] : parts) {
            /* (-z - phi)^(-j) = (-1)^j (z + phi)^(-j) */
            std::vector<T> w = v;
            for (size_t jj = 0; jj < w.size(); jj += 2)
                w[jj] = -w[jj];
            r.parts[Rational(-phi)] = std::move(w);
        }
        return r;
    }

    RatFunc& operator+=(const RatFunc& o)
    {
        poly += o.poly;
        for (auto& [phi, v] : o.parts) {
            auto& w = parts[phi];
            if (w.size() < v.size())
                w.resize(v.size(), T(Rational(0)));
            for (size_t j = 0; j < v.size(); ++j)
                w[j] += v[j];
        }
        canonicalize();
        return *this;
    }
    RatFunc& operator-=(const RatFunc& o) { return *this += -o; }
    RatFunc operator-() const
    {
        RatFunc r = *this;
        r.poly = -r.poly;
        for (auto& [phi, v] : r.parts)
            for (auto& c : v)
                c = -c;
        return r;
    }
    friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
    friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
    friend RatFunc operator*(const RatFunc& f, const T& s)
    {
        RatFunc r = f;
        r.poly = r.poly * s;
        for (auto& [phi, v] : r.parts)
            for (auto& c : v)
                c = c * s;
        r.canonicalize();
        return r;
    }
    friend RatFunc operator*(const T& s, const RatFunc& f) { return f * s; }

    friend RatFunc operator*(const RatFunc& f, const RatFunc& g)
    {
        if (f.is_zero() || g.is_zero())
            return RatFunc();
        RatFunc r;
        if (f.parts.empty() && g.parts.empty()) {
            r.poly = f.poly * g.poly;
            return r;
        }
        /* principal part at each pole from the local Laurent expansions */
        std::map<Rational, int> poles;
        for (auto& [phi, v] : f.parts)
            poles[phi];
        for (auto& [phi, v] : g.parts)
            poles[phi];
        for (auto& [phi, dummy] : poles) {
            int a = f.pole_order(phi), b = g.pole_order(phi);
            auto ef = f.laurent_at(phi, -a, b);
            auto eg = g.laurent_at(phi, -b, a);
            std::vector<T> pp(a + b, T(Rational(0)));
            for (int i = 0; i < a + b; ++i)
                for (int k = 0; k < a + b; ++k) {
                    int e = (i - a) + (k - b);
                    if (e < 0 && -e <= a + b)
                        pp[-e - 1] += ef[i] * eg[k];
                }
            r.parts[phi] = std::move(pp);
        }
        /* polynomial part from the expansion at infinity */
        int vf = f.valuation_infinity(), vg = g.valuation_infinity();
        if (vf + vg <= 0) {
            auto ef = f.laurent_at_infinity(vf, 1 - vg);
            auto eg = g.laurent_at_infinity(vg, 1 - vf);
            std::vector<T> pc(-(vf + vg) + 1, T(Rational(0)));
            for (size_t i = 0; i < ef.size(); ++i)
                for (size_t k = 0; k < eg.size(); ++k) {
                    int e = vf + static_cast<int>(i) + vg + static_cast<int>(k);
                    if (e <= 0)
                        pc[-e] += ef[i] * eg[k];
                }
            r.poly = Poly<T>(std::move(pc));
        }
        r.canonicalize();
        return r;
    }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return (a - b).is_zero(); }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }
};

template <class T>
RatFunc<T> pow(const RatFunc<T>& f, int p)
{
    if (p < 0)
        throw MathError("negative power of a rational function");
    RatFunc<T> r(T(Rational(1))), b = f;
    while (p) {
        if (p & 1)
            r = r * b;
        p >>= 1;
        if (p)
            b = b * b;
    }
    return r;
}

template <class U, class T, class F>
RatFunc<U> map_coeffs(const RatFunc<T>& f, F fn)
{
    std::vector<U> pc;
    for (auto& c : f.poly.coeffs())
        pc.push_back(fn(c));
    RatFunc<U> r{Poly<U>(std::move(pc))};
    for (auto& [phi, v] : f.parts) {
        std::vector<U> w;
        for (auto& c : v)
            w.push_back(fn(c));
        r.parts[phi] = std::move(w);
    }
    r.canonicalize();
    return r;
}

template <class T>
RatFunc<T> lift(const RatFunc<Rational>& f)
{
    return map_coeffs<T>(f, [](const Rational& c) { return T(c); });
}

/* One factor (z - phi)^mult of a denominator. */
struct PoleFactor {
    Rational phi;
    int mult;
};

/*
 * Canonical form of num / prod (z - phi)^mult.  Repeated factors are merged;
 * non-positive multiplicities are rejected.
 */
RatFunc<Rational> from_factored(const Poly<Rational>& num, const std::vector<PoleFactor>& den);

}  // namespace owdvv
