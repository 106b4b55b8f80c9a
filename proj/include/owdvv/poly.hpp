#pragma once

#include "owdvv/rational.hpp"

#include <algorithm>
#include <vector>

namespace owdvv {

/* Dense univariate polynomial, c[k] the coefficient of z^k, trailing zeros trimmed. */
template <class T>
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<T> c) : c_(std::move(c)) { trim(); }
    static Poly constant(const T& c) { return Poly(std::vector<T>{c}); }
    static Poly monomial(int k, const T& c)
    {
        std::vector<T> v(k + 1, T(Rational(0)));
        v[k] = c;
        return Poly(std::move(v));
    }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(int k) const
    {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : T(Rational(0));
    }

    void trim()
    {
        while (!c_.empty() && ring_is_zero(c_.back()))
            c_.pop_back();
    }

    Poly derivative() const
    {
        std::vector<T> d;
        for (size_t k = 1; k < c_.size(); ++k)
            d.push_back(c_[k] * T(Rational(static_cast<long>(k))));
        return Poly(std::move(d));
    }

    /* Antiderivative with zero constant term. */
    Poly integral() const
    {
        std::vector<T> d(c_.size() + 1, T(Rational(0)));
        for (size_t k = 0; k < c_.size(); ++k)
            d[k + 1] = c_[k] * T(frac(1, static_cast<long>(k + 1)));
        return Poly(std::move(d));
    }

    template <class X>
    X evaluate(const X& x) const
    {
        X r = X(Rational(0));
        for (size_t k = c_.size(); k-- > 0;)
            r = r * x + X(c_[k]);
        return r;
    }

    /* Taylor coefficients at z = phi: p(phi + t) = sum_e out[e] t^e. */
    std::vector<T> taylor(const Rational& phi) const
    {
        std::vector<T> out(c_.size(), T(Rational(0)));
        for (size_t k = 0; k < c_.size(); ++k) {
            std::vector<Rational> powphi(k + 1, Rational(1));
            for (size_t i = 1; i <= k; ++i)
                powphi[i] = powphi[i - 1] * phi;
            for (size_t e = 0; e <= k; ++e) {
                Rational be = binom(Rational(static_cast<long>(k)), static_cast<int>(e));
                out[e] += c_[k] * T(Rational(be * powphi[k - e]));
            }
        }
        return out;
    }

    Poly& operator+=(const Poly& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), T(Rational(0)));
        for (size_t k = 0; k < o.c_.size(); ++k)
            c_[k] += o.c_[k];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o)
    {
        if (o.c_.size() > c_.size())
            c_.resize(o.c_.size(), T(Rational(0)));
        for (size_t k = 0; k < o.c_.size(); ++k)
            c_[k] -= o.c_[k];
        trim();
        return *this;
    }
    Poly operator-() const
    {
        Poly r = *this;
        for (auto& v : r.c_)
            v = -v;
        return r;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b)
    {
        if (a.is_zero() || b.is_zero())
            return Poly();
        std::vector<T> r(a.c_.size() + b.c_.size() - 1, T(Rational(0)));
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(r));
    }
    friend Poly operator*(const Poly& a, const T& s)
    {
        std::vector<T> r = a.c_;
        for (auto& v : r)
            v = v * s;
        return Poly(std::move(r));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return (a - b).is_zero(); }

    /* Exact quotient and remainder by a monic divisor. */
    static std::pair<Poly, Poly> divmod_monic(const Poly& num, const Poly& den)
    {
        if (den.is_zero() || !ring_is_zero(T(den.c_.back() - T(Rational(1)))))
            throw MathError("divisor must be monic");
        std::vector<T> r = num.c_;
        int dn = den.degree();
        if (num.degree() < dn)
            return {Poly(), num};
        std::vector<T> q(num.degree() - dn + 1, T(Rational(0)));
        for (int k = num.degree(); k >= dn; --k) {
            T lead = r[k];
            q[k - dn] = lead;
            for (int i = 0; i <= dn; ++i)
                r[k - dn + i] -= lead * den.c_[i];
        }
        r.resize(dn);
        return {Poly(std::move(q)), Poly(std::move(r))};
    }

private:
    std::vector<T> c_;
};

}  // namespace owdvv
