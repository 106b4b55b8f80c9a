#include <doctest.h>

#include "owdvv/contour.hpp"
#include "owdvv/jet.hpp"
#include "owdvv/mpoly.hpp"
#include "owdvv/ratfunc.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace owdvv;
using RF = RatFunc<Rational>;

namespace {

RF poly(std::vector<Rational> c) { return RF(Poly<Rational>(std::move(c))); }

Rational rnd(std::mt19937& g, int span = 7, int den = 5)
{
    std::uniform_int_distribution<int> n(-span, span), d(1, den);
    return frac(n(g), d(g));
}

RF random_ratfunc(std::mt19937& g)
{
    RF f = poly({rnd(g), rnd(g), rnd(g)});
    std::vector<Rational> poles = {Rational(0), frac(1, 2), Rational(-3)};
    for (auto& p : poles) {
        std::uniform_int_distribution<int> ord(0, 3);
        int k = ord(g);
        for (int j = 1; j <= k; ++j)
            f += RF::pole(p, j, rnd(g));
    }
    return f;
}

/* Brute-force Cauchy integral (1/2 pi i) oint_{gamma_j} f(w)/(w - s) dw by the trapezoidal rule. */
Complex cauchy(const RF& f, const Disk& D, Complex s, int N = 4096)
{
    long double c = to_double(D.center), r = to_double(D.radius);
    Complex acc = 0;
    for (int k = 0; k < N; ++k) {
        long double th = 2 * std::numbers::pi_v<long double> * k / N;
        Complex e(std::cos(th), std::sin(th));
        Complex w = c + r * e;
        acc += eval_complex(f, w) / (w - s) * r * e;
    }
    return acc / static_cast<long double>(N);
}

}  // namespace

TEST_CASE("partial fractions of z^3/(z-2)^2")
{
    RF f = from_factored(Poly<Rational>({0, 0, 0, 1}), {{Rational(2), 2}});
    RF expect = poly({4, 1}) + RF::pole(Rational(2), 1, Rational(12)) + RF::pole(Rational(2), 2, Rational(8));
    CHECK(f == expect);
}

TEST_CASE("repeated denominator factors are merged, zero multiplicity rejected")
{
    RF a = from_factored(Poly<Rational>({1}), {{Rational(1), 1}, {Rational(1), 1}});
    CHECK(a == RF::pole(Rational(1), 2, Rational(1)));
    CHECK_THROWS_AS(from_factored(Poly<Rational>({1}), {{Rational(1), 0}}), MathError);
}

TEST_CASE("residues of (z^2+1)/(z(z-1))")
{
    RF f = from_factored(Poly<Rational>({1, 0, 1}), {{Rational(0), 1}, {Rational(1), 1}});
    CHECK(f.residue(Rational(0)) == -1);
    CHECK(f.residue(Rational(1)) == 2);
    CHECK(f.residue_infinity() == -1);
}

TEST_CASE("products and derivatives agree with pointwise evaluation")
{
    std::mt19937 g(7);
    for (int trial = 0; trial < 40; ++trial) {
        RF f = random_ratfunc(g), h = random_ratfunc(g);
        RF p = f * h;
        RF d = p.derivative();
        RF leib = f.derivative() * h + f * h.derivative();
        CHECK(d == leib);
        for (Rational x : {frac(1, 3), frac(-7, 4), Rational(5)}) {
            CHECK(p.evaluate(x) == f.evaluate(x) * h.evaluate(x));
        }
        /* residue theorem: Res_inf + sum of finite residues = 0 */
        Rational s = p.residue_infinity();
        for (auto& [phi, v] : p.parts)
            s += p.residue(phi);
        CHECK(s == 0);
    }
}

TEST_CASE("reflection f(-z)")
{
    std::mt19937 g(3);
    for (int trial = 0; trial < 10; ++trial) {
        RF f = random_ratfunc(g);
        for (Rational x : {frac(2, 7), frac(-5, 3)})
            CHECK(f.reflect().evaluate(x) == f.evaluate(Rational(-x)));
    }
}

TEST_CASE("jets carry exact first and second derivatives")
{
    /* F(x, y) = x^2 y / (1 + x) at (1, 2) */
    Jet x = Jet::variable(2, 2, 0, Rational(1)), y = Jet::variable(2, 2, 1, Rational(2));
    Jet F = x * x * y * inverse(Jet(Rational(1)) + x);
    CHECK(F.base() == 1);
    /* dF/dx = y (x^2 + 2x)/(1+x)^2 = 2*3/4, dF/dy = x^2/(1+x) = 1/2 */
    CHECK(F.grad(0) == frac(3, 2));
    CHECK(F.grad(1) == frac(1, 2));
    /* d2F/dx2 = 2y/(1+x)^3 = 1/2, d2F/dxdy = (x^2+2x)/(1+x)^2 = 3/4, d2F/dy2 = 0 */
    CHECK(F.second(0, 0) == frac(1, 2));
    CHECK(F.second(0, 1) == frac(3, 4));
    CHECK(F.second(1, 1) == 0);
}

TEST_CASE("multivariate polynomials")
{
    MPoly x = MPoly::variable(2, 0), y = MPoly::variable(2, 1);
    MPoly p = (x + y) * (x - y) + MPoly(Rational(3));
    CHECK(p.derivative(0) == x * MPoly(Rational(2)));
    CHECK(p.evaluate({Rational(2), Rational(1)}) == 6);
    CHECK_THROWS_AS(inverse(x), MathError);
    CHECK(inverse(MPoly(Rational(4))) == MPoly(frac(1, 4)));
}

TEST_CASE("disk geometry validation")
{
    DiskConfig ok{{{Rational(0), Rational(1), frac(1, 2), 1}, {Rational(5), Rational(1), Rational(5), 1}}};
    CHECK_NOTHROW(ok.validate());
    CHECK(ok.locate(frac(1, 3)) == 0);
    CHECK(ok.locate(Rational(3)) == -1);
    CHECK_THROWS_AS(ok.locate(Rational(1)), MathError);
    DiskConfig overlap{{{Rational(0), Rational(2), Rational(0), 1}, {Rational(3), Rational(2), Rational(3), 1}}};
    CHECK_THROWS_AS(overlap.validate(), MathError);
    DiskConfig outside{{{Rational(0), Rational(1), Rational(2), 1}}};
    CHECK_THROWS_AS(outside.validate(), MathError);
}

TEST_CASE("projections match numerical Cauchy integrals")
{
    DiskConfig cfg{{{Rational(0), Rational(1), Rational(0), 1}, {Rational(4), Rational(1), frac(9, 2), 1}}};
    std::mt19937 g(11);
    for (int trial = 0; trial < 5; ++trial) {
        RF f = poly({rnd(g), rnd(g)}) + RF::pole(Rational(0), 2, rnd(g)) + RF::pole(frac(9, 2), 1, rnd(g)) +
               RF::pole(Rational(-3), 1, rnd(g)) + RF::pole(frac(1, 3), 1, rnd(g));
        auto sp = project(f, cfg);
        CHECK(sp.minus + sp.plus.germ[0] == f);
        Complex sOut(2, 1);
        Complex num = -(cauchy(f, cfg.disks[0], sOut) + cauchy(f, cfg.disks[1], sOut));
        CHECK(std::abs(num - eval_complex(sp.minus, sOut)) < 1e-12L);
        for (int j = 0; j < 2; ++j) {
            Complex sIn = Complex(to_double(cfg.disks[j].center) + 0.25L, 0.125L);
            Complex plus = cauchy(f, cfg.disks[0], sIn) + cauchy(f, cfg.disks[1], sIn);
            CHECK(std::abs(plus - eval_complex(sp.plus.germ[j], sIn)) < 1e-12L);
        }
        for (int j = 0; j < 2; ++j) {
            auto mp = mask_project(f, j, cfg);
            Complex mnum = -cauchy(f, cfg.disks[j], sOut);
            CHECK(std::abs(mnum - eval_complex(mp.minus, sOut)) < 1e-12L);
            for (int k = 0; k < 2; ++k) {
                Complex sIn = Complex(to_double(cfg.disks[k].center) - 0.25L, 0.25L);
                CHECK(std::abs(cauchy(f, cfg.disks[j], sIn) - eval_complex(mp.plus.germ[k], sIn)) < 1e-12L);
            }
        }
    }
}

TEST_CASE("winding numbers by quadrature")
{
    /* z^2/(z - 1/4): two zeros and one pole inside the unit disk */
    RF zeta = from_factored(Poly<Rational>({0, 0, 1}), {{frac(1, 4), 1}});
    DiskConfig cfg{{{Rational(0), Rational(1), frac(1, 4), 1}}};
    auto w = winding_check(zeta, cfg);
    CHECK(w.ok);
    CHECK(std::fabs(w.measured[0] - 1) < 1e-9L);
    cfg.disks[0].d = 2;
    CHECK_FALSE(winding_check(zeta, cfg).ok);
}
