#include "owdvv/ratfunc.hpp"
#include "owdvv/series.hpp"

#include <atomic>

namespace owdvv {

RatFunc<Rational> from_factored(const Poly<Rational>& num, const std::vector<PoleFactor>& den)
{
    std::map<Rational, int> mult;
    for (auto& f : den) {
        if (f.mult <= 0)
            throw MathError("denominator factor with non-positive multiplicity");
        mult[f.phi] += f.mult;
    }
    Poly<Rational> d = Poly<Rational>::constant(Rational(1));
    for (auto& [phi, m] : mult)
        for (int i = 0; i < m; ++i)
            d = d * Poly<Rational>(std::vector<Rational>{Rational(-phi), Rational(1)});
    RatFunc<Rational> out(Poly<Rational>::divmod_monic(num, d).first);
    for (auto& [phi, k] : mult) {
        RatFunc<Rational> g{num};
        for (auto& [psi, m] : mult)
            if (psi != phi)
                g = g * RatFunc<Rational>::pole(psi, m, Rational(1));
        auto c = g.laurent_at(phi, 0, k);
        std::vector<Rational> pp(k);
        for (int e = 0; e < k; ++e)
            pp[k - e - 1] = c[e];
        out.parts[phi] = pp;
    }
    out.canonicalize();
    return out;
}

namespace {
std::atomic<int> g_window_floor{0};
}

void set_window_floor(int w) { g_window_floor = w < 0 ? 0 : w; }
int window_floor() { return g_window_floor; }

}  // namespace owdvv
