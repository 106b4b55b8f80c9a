#pragma once

#include "owdvv/ratfunc.hpp"

#include <complex>
#include <vector>

namespace owdvv {

using Complex = std::complex<long double>;

/* Disk D_j = { |z - center| < radius } with marked pole phi and winding d of zeta. */
struct Disk {
    Rational center;
    Rational radius;
    Rational phi;
    int d = 1;
};

struct DiskConfig {
    std::vector<Disk> disks;

    int size() const { return static_cast<int>(disks.size()); }
    /* Throws on malformed geometry: overlapping disks, phi outside, radius <= 0. */
    void validate() const;
    /* Index of the disk strictly containing x, -1 if strictly outside all; throws on a boundary. */
    int locate(const Rational& x) const;
};

/*
 * A function on the union of the contours, one rational germ per contour.
 * Restrictions f 1_j and genuinely different germs (hat a per disk) both
 * live here.
 */
template <class T>
struct ContourFunc {
    std::vector<RatFunc<T>> germ;

    ContourFunc() = default;
    explicit ContourFunc(std::vector<RatFunc<T>> g) : germ(std::move(g)) {}
    static ContourFunc uniform(const RatFunc<T>& f, int m) { return ContourFunc(std::vector<RatFunc<T>>(m, f)); }
    static ContourFunc masked(const RatFunc<T>& f, int j, int m)
    {
        ContourFunc c{std::vector<RatFunc<T>>(m)};
        c.germ.at(j) = f;
        return c;
    }
    int size() const { return static_cast<int>(germ.size()); }

    ContourFunc& operator+=(const ContourFunc& o)
    {
        check(o);
        for (size_t j = 0; j < germ.size(); ++j)
            germ[j] += o.germ[j];
        return *this;
    }
    ContourFunc& operator-=(const ContourFunc& o)
    {
        check(o);
        for (size_t j = 0; j < germ.size(); ++j)
            germ[j] -= o.germ[j];
        return *this;
    }
    ContourFunc operator-() const
    {
        ContourFunc r = *this;
        for (auto& g : r.germ)
            g = -g;
        return r;
    }
    friend ContourFunc operator+(ContourFunc a, const ContourFunc& b) { return a += b; }
    friend ContourFunc operator-(ContourFunc a, const ContourFunc& b) { return a -= b; }
    friend ContourFunc operator*(const ContourFunc& a, const ContourFunc& b)
    {
        a.check(b);
        ContourFunc r = a;
        for (size_t j = 0; j < r.germ.size(); ++j)
            r.germ[j] = a.germ[j] * b.germ[j];
        return r;
    }
    friend ContourFunc operator*(const ContourFunc& a, const RatFunc<T>& f)
    {
        ContourFunc r = a;
        for (auto& g : r.germ)
            g = g * f;
        return r;
    }
    friend ContourFunc operator*(const RatFunc<T>& f, const ContourFunc& a) { return a * f; }
    friend ContourFunc operator+(const ContourFunc& a, const RatFunc<T>& f)
    {
        ContourFunc r = a;
        for (auto& g : r.germ)
            g += f;
        return r;
    }
    friend ContourFunc operator-(const ContourFunc& a, const RatFunc<T>& f) { return a + (-f); }
    friend ContourFunc operator-(const RatFunc<T>& f, const ContourFunc& a) { return (-a) + f; }
    ContourFunc derivative() const
    {
        ContourFunc r = *this;
        for (auto& g : r.germ)
            g = g.derivative();
        return r;
    }
    bool is_zero() const
    {
        for (auto& g : germ)
            if (!g.is_zero())
                return false;
        return true;
    }
    friend bool operator==(const ContourFunc& a, const ContourFunc& b) { return (a - b).is_zero(); }

private:
    void check(const ContourFunc& o) const
    {
        if (o.germ.size() != germ.size())
            throw MathError("contour function size mismatch");
    }
};

/* f_- on the exterior (one rational function) and f_+ restricted to each disk. */
template <class T>
struct ContourSplit {
    RatFunc<T> minus;
    ContourFunc<T> plus;
};

/* sum over disks j of the principal parts of g_j at poles strictly inside D_j */
template <class T>
RatFunc<T> minus_part(const ContourFunc<T>& g, const DiskConfig& cfg)
{
    if (g.size() != cfg.size())
        throw MathError("contour function does not match the disk configuration");
    RatFunc<T> r;
    for (int j = 0; j < cfg.size(); ++j)
        for (auto& [phi, v] : g.germ[j].parts)
            if (cfg.locate(phi) == j)
                r += g.germ[j].principal_part(phi);
    return r;
}

template <class T>
ContourSplit<T> project(const ContourFunc<T>& g, const DiskConfig& cfg)
{
    ContourSplit<T> s;
    s.minus = minus_part(g, cfg);
    s.plus = g - s.minus;
    return s;
}

template <class T>
ContourSplit<T> project(const RatFunc<T>& f, const DiskConfig& cfg)
{
    return project(ContourFunc<T>::uniform(f, cfg.size()), cfg);
}

/* Projections of f 1_{gamma_j}. */
template <class T>
ContourSplit<T> mask_project(const RatFunc<T>& f, int j, const DiskConfig& cfg)
{
    return project(ContourFunc<T>::masked(f, j, cfg.size()), cfg);
}

/* (1/2 pi i) sum_j oint_{gamma_j} g_j dz, counterclockwise. */
template <class T>
T contour_integral(const ContourFunc<T>& g, const DiskConfig& cfg)
{
    T s = T(Rational(0));
    for (int j = 0; j < cfg.size(); ++j)
        for (auto& [phi, v] : g.germ[j].parts)
            if (cfg.locate(phi) == j)
                s += v[0];
    return s;
}

Complex eval_complex(const RatFunc<Rational>& f, Complex z);

struct WindingReport {
    std::vector<long double> measured;
    std::vector<int> declared;
    bool ok = true;
    std::string message;
};

/* Trapezoidal quadrature of (1/2 pi i) oint zeta'/zeta on every contour. */
WindingReport winding_check(const RatFunc<Rational>& zeta, const DiskConfig& cfg, int samples = 2048);

}  // namespace owdvv
