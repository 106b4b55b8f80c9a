#include "owdvv/rational.hpp"

#include <cctype>

namespace owdvv {

Rational frac(long num, long den)
{
    if (den == 0)
        throw MathError("zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s.empty())
        throw SchemaError("empty rational literal");
    auto slash = s.find('/');
    auto check = [&](const std::string& part) {
        size_t i = (!part.empty() && (part[0] == '-' || part[0] == '+')) ? 1 : 0;
        if (i >= part.size())
            throw SchemaError("malformed rational literal '" + text + "'");
        for (; i < part.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(part[i])))
                throw SchemaError("malformed rational literal '" + text + "'");
    };
    if (slash == std::string::npos) {
        check(s);
        return Rational(mpz_class(s[0] == '+' ? s.substr(1) : s));
    }
    std::string n = s.substr(0, slash), d = s.substr(slash + 1);
    check(n);
    check(d);
    mpz_class dn(d[0] == '+' ? d.substr(1) : d);
    if (dn == 0)
        throw SchemaError("zero denominator in '" + text + "'");
    Rational q(mpz_class(n[0] == '+' ? n.substr(1) : n), dn);
    q.canonicalize();
    return q;
}

double to_double(const Rational& q) { return q.get_d(); }

std::optional<Rational> rational_root(const Rational& x, unsigned n)
{
    if (n == 0)
        throw MathError("zeroth root");
    if (n == 1)
        return x;
    if (sgn(x) == 0)
        return Rational(0);
    bool neg = sgn(x) < 0;
    if (neg && n % 2 == 0)
        return std::nullopt;
    mpz_class num = abs(x.get_num()), den = x.get_den(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n))
        return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n))
        return std::nullopt;
    Rational r(rn, rd);
    r.canonicalize();
    return neg ? Rational(-r) : r;
}

Rational rational_pow(const Rational& x, long e)
{
    if (e < 0)
        return rational_pow(inverse(x), -e);
    Rational r(1), b(x);
    while (e) {
        if (e & 1)
            r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

Rational binom(const Rational& q, int i)
{
    Rational r(1);
    for (int k = 0; k < i; ++k)
        r = r * (q - k) / (k + 1);
    return r;
}

Rational factorial(int n)
{
    Rational r(1);
    for (int k = 2; k <= n; ++k)
        r *= k;
    return r;
}

Rational harmonic(int p)
{
    Rational r(0);
    for (int k = 1; k <= p; ++k)
        r += frac(1, k);
    return r;
}

Rational inverse(const Rational& x)
{
    if (sgn(x) == 0)
        throw MathError("division by zero");
    return Rational(1) / x;
}

}  // namespace owdvv
