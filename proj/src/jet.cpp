#include "owdvv/jet.hpp"

#include <sstream>

namespace owdvv {

static size_t jet_size(int n, int order)
{
    size_t s = 1;
    if (order >= 1)
        s += n;
    if (order >= 2)
        s += static_cast<size_t>(n) * (n + 1) / 2;
    return s;
}

Jet Jet::constant(int nvars, int order, const Rational& c)
{
    if (order < 0 || order > 2)
        throw MathError("jet order must be 1 or 2");
    Jet j;
    j.n_ = nvars;
    j.order_ = nvars ? order : 0;
    j.c_.assign(jet_size(j.n_, j.order_), Rational(0));
    j.c_[0] = c;
    return j;
}

Jet Jet::variable(int nvars, int order, int index, const Rational& base)
{
    if (index < 0 || index >= nvars || order < 1)
        throw MathError("jet variable index out of range");
    Jet j = constant(nvars, order, base);
    j.c_[1 + index] = 1;
    return j;
}

size_t Jet::qidx(int i, int j) const
{
    if (i > j)
        std::swap(i, j);
    /* row-major packing of the upper triangle */
    return 1 + n_ + static_cast<size_t>(i) * n_ - static_cast<size_t>(i) * (i - 1) / 2 + (j - i);
}

void Jet::promote(int n, int order)
{
    if (n_ == n && order_ == order)
        return;
    if (n_ != 0)
        throw MathError("jet shape mismatch");
    Rational c = c_[0];
    *this = constant(n, order, c);
}

Rational Jet::grad(int i) const
{
    if (n_ == 0)
        return Rational(0);
    return c_[1 + i];
}

Rational Jet::mono2(int i, int j) const
{
    if (order_ < 2)
        return Rational(0);
    return c_[qidx(i, j)];
}

Rational Jet::second(int i, int j) const
{
    Rational m = mono2(i, j);
    return i == j ? Rational(2 * m) : m;
}

bool Jet::is_zero() const
{
    for (const auto& v : c_)
        if (sgn(v) != 0)
            return false;
    return true;
}

Jet Jet::nilpotent() const
{
    Jet r = *this;
    r.c_[0] = 0;
    return r;
}

Jet& Jet::operator+=(const Jet& o)
{
    if (o.n_ == 0) {
        c_[0] += o.c_[0];
        return *this;
    }
    promote(o.n_, o.order_);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o)
{
    if (o.n_ == 0) {
        c_[0] -= o.c_[0];
        return *this;
    }
    promote(o.n_, o.order_);
    for (size_t i = 0; i < c_.size(); ++i)
        c_[i] -= o.c_[i];
    return *this;
}

Jet Jet::operator-() const
{
    Jet r = *this;
    for (auto& v : r.c_)
        v = -v;
    return r;
}

Jet operator*(const Jet& a, const Jet& b)
{
    if (a.n_ == 0) {
        Jet r = b;
        for (auto& v : r.c_)
            v *= a.c_[0];
        return r;
    }
    if (b.n_ == 0) {
        Jet r = a;
        for (auto& v : r.c_)
            v *= b.c_[0];
        return r;
    }
    if (a.n_ != b.n_ || a.order_ != b.order_)
        throw MathError("jet shape mismatch");
    const int n = a.n_;
    Jet r = Jet::constant(n, a.order_, a.c_[0] * b.c_[0]);
    for (int i = 0; i < n; ++i)
        r.c_[1 + i] = a.c_[0] * b.c_[1 + i] + b.c_[0] * a.c_[1 + i];
    if (a.order_ == 2) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                size_t q = r.qidx(i, j);
                Rational v = a.c_[0] * b.c_[q] + b.c_[0] * a.c_[q];
                if (i == j)
                    v += a.c_[1 + i] * b.c_[1 + i];
                else
                    v += a.c_[1 + i] * b.c_[1 + j] + a.c_[1 + j] * b.c_[1 + i];
                r.c_[q] = v;
            }
    }
    return r;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

bool operator==(const Jet& a, const Jet& b) { return (a - b).is_zero(); }

std::string Jet::str() const
{
    std::ostringstream os;
    os << to_string(c_[0]);
    for (int i = 0; i < n_ && order_ >= 1; ++i)
        if (sgn(c_[1 + i]))
            os << " + (" << to_string(c_[1 + i]) << ")e" << i;
    for (int i = 0; i < n_ && order_ >= 2; ++i)
        for (int j = i; j < n_; ++j)
            if (sgn(c_[qidx(i, j)]))
                os << " + (" << to_string(c_[qidx(i, j)]) << ")e" << i << "e" << j;
    return os.str();
}

Jet inverse(const Jet& x)
{
    Rational b = inverse(x.base());
    /* 1/(b0 (1 + y)) = (1/b0)(1 - y + y^2 - ...) with y nilpotent */
    Jet y = x.nilpotent() * Jet(b);
    Jet r(1), p(1);
    for (int i = 1; i <= x.order(); ++i) {
        p = p * (-y);
        r += p;
    }
    return r * Jet(b);
}

}  // namespace owdvv
