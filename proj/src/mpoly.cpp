#include "owdvv/mpoly.hpp"

#include <sstream>

namespace owdvv {

MPoly::MPoly(const Rational& c)
{
    if (sgn(c))
        t_[Exponent{}] = c;
}

MPoly MPoly::variable(int nvars, int index)
{
    MPoly p;
    p.n_ = nvars;
    Exponent e(nvars, 0);
    e.at(index) = 1;
    p.t_[e] = 1;
    return p;
}

void MPoly::promote(int n)
{
    if (n_ == n || n == 0)
        return;
    if (n_ != 0)
        throw MathError("polynomial variable count mismatch");
    std::map<Exponent, Rational> t;
    for (auto& [e, c] : t_)
        t[Exponent(n, 0)] = c;
    t_ = std::move(t);
    n_ = n;
}

bool MPoly::is_constant() const
{
    for (auto& [e, c] : t_)
        for (int k : e)
            if (k)
                return false;
    return true;
}

Rational MPoly::constant_term() const
{
    for (auto& [e, c] : t_) {
        bool z = true;
        for (int k : e)
            z = z && k == 0;
        if (z)
            return c;
    }
    return Rational(0);
}

int MPoly::total_degree() const
{
    int d = -1;
    for (auto& [e, c] : t_) {
        int s = 0;
        for (int k : e)
            s += k;
        d = std::max(d, s);
    }
    return d;
}

void MPoly::add_term(const Exponent& e, const Rational& c)
{
    if (sgn(c) == 0)
        return;
    promote(static_cast<int>(e.size()));
    Exponent key = e;
    if (key.empty() && n_)
        key.assign(n_, 0);
    auto it = t_.find(key);
    if (it == t_.end()) {
        t_[key] = c;
    } else {
        it->second += c;
        if (sgn(it->second) == 0)
            t_.erase(it);
    }
}

MPoly MPoly::derivative(int var) const
{
    MPoly r;
    r.n_ = n_;
    for (auto& [e, c] : t_) {
        if (var >= static_cast<int>(e.size()) || e[var] == 0)
            continue;
        Exponent f = e;
        f[var] -= 1;
        r.add_term(f, c * e[var]);
    }
    return r;
}

Rational MPoly::evaluate(const std::vector<Rational>& x) const
{
    Rational s(0);
    for (auto& [e, c] : t_) {
        Rational m = c;
        for (size_t i = 0; i < e.size(); ++i)
            m *= rational_pow(x.at(i), e[i]);
        s += m;
    }
    return s;
}

MPoly& MPoly::operator+=(const MPoly& o)
{
    promote(o.n_);
    for (auto& [e, c] : o.t_)
        add_term(e.empty() ? Exponent(n_, 0) : e, c);
    return *this;
}

MPoly& MPoly::operator-=(const MPoly& o)
{
    promote(o.n_);
    for (auto& [e, c] : o.t_)
        add_term(e.empty() ? Exponent(n_, 0) : e, -c);
    return *this;
}

MPoly MPoly::operator-() const
{
    MPoly r = *this;
    for (auto& [e, c] : r.t_)
        c = -c;
    return r;
}

MPoly operator*(const MPoly& a, const MPoly& b)
{
    int n = std::max(a.n_, b.n_);
    if (a.n_ && b.n_ && a.n_ != b.n_)
        throw MathError("polynomial variable count mismatch");
    MPoly r;
    r.n_ = n;
    for (auto& [ea, ca] : a.t_)
        for (auto& [eb, cb] : b.t_) {
            MPoly::Exponent e(n, 0);
            for (size_t i = 0; i < ea.size(); ++i)
                e[i] += ea[i];
            for (size_t i = 0; i < eb.size(); ++i)
                e[i] += eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

bool operator==(const MPoly& a, const MPoly& b) { return (a - b).is_zero(); }

std::string MPoly::str(const std::vector<std::string>& names) const
{
    if (t_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational a = c;
        if (!first)
            os << (sgn(a) < 0 ? " - " : " + ");
        else if (sgn(a) < 0)
            os << "-";
        if (sgn(a) < 0)
            a = -a;
        first = false;
        bool mono = false;
        for (int k : e)
            mono = mono || k;
        if (!mono || a != 1)
            os << to_string(a);
        bool star = mono && a != 1;
        for (size_t i = 0; i < e.size(); ++i) {
            if (!e[i])
                continue;
            if (star)
                os << "*";
            star = true;
            os << (i < names.size() ? names[i] : "x" + std::to_string(i));
            if (e[i] > 1)
                os << "^" << e[i];
        }
    }
    return os.str();
}

Rational base_value(const MPoly& x) { return x.constant_term(); }

MPoly inverse(const MPoly& x)
{
    if (!x.is_constant() || x.is_zero())
        throw MathError("polynomial coefficient is not an invertible constant");
    return MPoly(inverse(x.constant_term()));
}

}  // namespace owdvv
