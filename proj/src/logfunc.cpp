#include "owdvv/logfunc.hpp"

#include <sstream>

namespace owdvv {

void LogScalar::add_log(const Rational& arg, const Rational& coef)
{
    if (sgn(arg) == 0)
        throw MathError("log(0)");
    if (arg == 1 || sgn(coef) == 0)
        return;
    Rational& c = logs[arg];
    c += coef;
    if (sgn(c) == 0)
        logs.erase(arg);
}

bool LogScalar::is_zero() const { return sgn(value) == 0 && logs.empty(); }

LogScalar& LogScalar::operator+=(const LogScalar& o)
{
    value += o.value;
    for (auto& [a, c] : o.logs)
        add_log(a, c);
    return *this;
}

LogScalar& LogScalar::operator-=(const LogScalar& o)
{
    value -= o.value;
    for (auto& [a, c] : o.logs)
        add_log(a, -c);
    return *this;
}

LogScalar operator*(const LogScalar& a, const Rational& s)
{
    LogScalar r(a.value * s);
    for (auto& [arg, c] : a.logs)
        r.add_log(arg, c * s);
    return r;
}

std::string LogScalar::str() const
{
    std::ostringstream os;
    os << to_string(value);
    for (auto& [a, c] : logs)
        os << (sgn(c) < 0 ? " - " : " + ") << to_string(abs(c)) << "*log(" << to_string(a) << ")";
    return os.str();
}

LogScalar evaluate(const LogRatFunc<Rational>& f, const Rational& s)
{
    LogScalar r(f.rational.evaluate(s));
    for (auto& [c, g] : f.clog)
        r.add_log(c, g.evaluate(s));
    for (auto& [phi, g] : f.slog) {
        if (s == phi)
            throw MathError("log(s - phi) evaluated at its branch point");
        r.add_log(s - phi, g.evaluate(s));
    }
    return r;
}

}  // namespace owdvv
