#include <doctest.h>

#include "owdvv/calm.hpp"
#include "owdvv/open_wdvv.hpp"

#include <cmath>
#include <random>

using namespace owdvv;
using RF = RatFunc<Rational>;
using CF = ContourFunc<Rational>;

namespace {

Rational rnd(std::mt19937& g, int lo = -4, int hi = 4)
{
    std::uniform_int_distribution<int> n(lo, hi), d(1, 3);
    return frac(n(g), d(g));
}

RF random_poly(std::mt19937& g, int deg)
{
    std::vector<Rational> c;
    for (int k = 0; k <= deg; ++k)
        c.push_back(rnd(g));
    return RF(Poly<Rational>(std::move(c)));
}

CovectorPair random_covector(std::mt19937& g, int m)
{
    return CovectorPair::uniform(random_poly(g, 2), random_poly(g, 2), m);
}

/* Flat point with phi_k in [3k, 3k + 1] and nonzero h_{k,1}. */
std::vector<Rational> random_flat(const ManifoldSpecM& spec, std::mt19937& g)
{
    std::vector<Rational> h;
    for (int r = 1; r < spec.n0; ++r)
        h.push_back(rnd(g));
    for (int k = 1; k <= spec.m(); ++k) {
        h.push_back(Rational(3 * k) + rnd(g, 0, 2) / 2);
        Rational b;
        do
            b = rnd(g);
        while (sgn(b) == 0);
        h.push_back(b);
        for (int r = 2; r <= spec.n[k - 1]; ++r)
            h.push_back(rnd(g));
    }
    return h;
}

/* Disk k centred at 3k + 1/2 with radius 1; zeta has two zeros and one pole in each, one pole at -5. */
PointCalM random_calm(const ManifoldSpecM& spec, std::mt19937& g)
{
    auto h = random_flat(spec, g);
    std::vector<Disk> disks;
    FactoredZeta z{rnd(g, 1, 3), {}};
    const Rational off[] = {frac(1, 4), frac(1, 3), frac(2, 5)};
    std::uniform_int_distribution<int> pick(0, 2);
    int off_idx = spec.n0 - 1;
    for (int k = 1; k <= spec.m(); ++k) {
        Rational c = Rational(3 * k) + frac(1, 2);
        disks.push_back({c, Rational(1), h[off_idx], 1});
        off_idx += spec.n[k - 1] + 1;
        z.roots.push_back({c + off[pick(g)], 1});
        z.roots.push_back({c - off[pick(g)], 1});
        z.roots.push_back({c + frac(1, 10), -1});
    }
    z.roots.push_back({Rational(-5), -1});
    return calm_point_from_flat(spec, h, z, disks);
}

const std::vector<ManifoldSpecM> kSpecs = {{2, {1}}, {1, {1}}, {1, {2}}, {2, {1, 1}}, {3, {1}}};

Rational ev(const RF& f, const Rational& x)
{
    return f.evaluate(x);
}

}  // namespace

TEST_CASE("eta, C, pairing, metric and d1 d2 Omega match the independent oracle")
{
    /* tests/oracles/calm_oracle.py: ell = z^2 + 1 + 1/z, zeta = (z-1/4)(z+1/5)/((z-1/3)(z-3)), disk |z| < 1 */
    FactoredZeta z{1, {{frac(1, 4), 1}, {frac(-1, 5), 1}, {frac(1, 3), -1}, {Rational(3), -1}}};
    PointCalM p = calm_point_from_flat({2, {1}}, {frac(1, 2), 0, 1}, z, {{0, 1, 0, 1}});
    CHECK(p.ell == RF(Poly<Rational>({1, 0, 1})) + RF::pole(0, 1, 1));
    auto w1 = CovectorPair::uniform(RF(Poly<Rational>({1, 1})), RF::monomial(2, 1), 1);
    auto w2 = CovectorPair::uniform(RF(Poly<Rational>({-2, 1})), RF(Poly<Rational>({3, 1})), 1);
    auto X1 = eta_map(p, w1), X2 = eta_map(p, w2);
    CHECK(ev(X1.xi, frac(5, 2)) == frac(4627, 8450));
    CHECK(ev(X1.xihat.germ[0], frac(1, 7)) == frac(27769, 500));
    auto C = c_operator(p, X1, w2);
    CHECK(ev(C.xi, frac(5, 2)) == frac(1815709, 253500));
    CHECK(ev(C.xihat.germ[0], frac(1, 7)) == frac(195940879, 1680000));
    CHECK(pairing(p, w1, X2) == frac(541, 180));
    CHECK(metric_eta(p, X1, X2) == frac(541, 180));
    double dd = to_double(ev(omega_dd(p, X1, X2), frac(5, 2)));
    CHECK(std::fabs(dd - -1.3704536489151873767) < 1e-12);
}

TEST_CASE("point validation")
{
    std::vector<Disk> d{{0, 1, 0, 1}};
    RF ell = RF(Poly<Rational>({1, 0, 1})) + RF::pole(0, 1, 1);
    RF zeta = RF(Poly<Rational>({-1, 2}));
    CHECK_NOTHROW(make_calm_point(ell, ell - zeta, DiskConfig{d}));
    CHECK_THROWS_AS(make_calm_point(ell + RF::pole(3, 1, 1), ell, DiskConfig{d}), MathError);
    CHECK_THROWS_AS(make_calm_point(ell, RF(Poly<Rational>({1, 0, 1})), DiskConfig{d}), MathError);
    CHECK_THROWS_AS(make_calm_point(ell, ell + RF::pole(frac(1, 2), 1, 1), DiskConfig{d}), MathError);
    std::vector<Disk> d2{{0, 1, 0, 2}};
    CHECK_THROWS_AS(make_calm_point(ell, ell - zeta, DiskConfig{d2}), MathError);
    FactoredZeta wrong{1, {{frac(1, 3), 1}}};
    CHECK_THROWS_AS(make_calm_point(ell, ell - zeta, DiskConfig{d}, {}, wrong), MathError);
    PointCalM zero = make_calm_point(ell, ell, DiskConfig{d});
    CHECK(zero.zeta_vanishes());
    CHECK_THROWS_AS(flat_tangent(zero, CalMTag::t(1, 0)), MathError);
}

TEST_CASE("flat tangents: t_{i,0} formula and h tangents")
{
    std::mt19937 g(21);
    PointCalM p = random_calm({2, {1}}, g);
    auto T = flat_tangent(p, CalMTag::t(1, 0));
    auto sp = mask_project(p.dzeta, 0, p.cfg);
    CHECK(T.xi == -sp.minus);
    CHECK(T.xihat == sp.plus);
    CHECK(T.dell(p.cfg).is_zero());
    auto H = flat_tangent(p, CalMTag::hl(0, 1));
    CHECK(H.xi == p.base.tangents[0]);
    CHECK(H.dzeta().is_zero());
    CHECK_THROWS_AS(flat_tangent(p, CalMTag::t(2, 0)), SchemaError);
    CHECK(parse_calm_tag("t1,-2").s == -2);
    CHECK(parse_calm_tag("h1,0").h == FlatLabel{1, 0});
    CHECK_THROWS_AS(parse_calm_tag("t1"), SchemaError);

    /* monomial point: d/dh_{0,n0-1} is the constant n0 */
    FactoredZeta z{1, {{frac(1, 4), 1}, {frac(1, 3), 1}, {frac(1, 5), -1}, {Rational(-5), -1}}};
    PointCalM q = calm_point_from_flat({3, {1}}, {0, 0, 0, 1}, z, {{0, 1, 0, 1}});
    CHECK(flat_tangent(q, CalMTag::hl(0, 2)).xi == RF(Rational(3)));
}

TEST_CASE("property: metric constants in the flat frames")
{
    std::mt19937 g(22);
    for (auto& s : kSpecs) {
        PointCalM p = random_calm(s, g);
        const int d = s.dim();
        auto labels = flat_labels(s);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                Rational v = metric_eta(p, flat_tangent(p, CalMTag::hl(labels[a].k, labels[a].r)),
                                        flat_tangent(p, CalMTag::hl(labels[b].k, labels[b].r)));
                CHECK(v == (b == dual_index(s, a) ? Rational(metric_constant(s, a)) : Rational(0)));
            }
        for (int i = 1; i <= s.m(); ++i)
            for (int s1 = -2; s1 <= 2; ++s1) {
                auto Ti = flat_tangent(p, CalMTag::t(i, s1));
                for (int s2 = -2; s2 <= 2; ++s2)
                    for (int i2 = 1; i2 <= s.m(); ++i2)
                        CHECK(metric_eta(p, Ti, flat_tangent(p, CalMTag::t(i2, s2))) ==
                              (i == i2 && s1 + s2 == -1 ? -1 : 0));
                for (int a = 0; a < d; ++a) {
                    auto H = flat_tangent(p, CalMTag::hl(labels[a].k, labels[a].r));
                    CHECK(metric_eta(p, Ti, H) == 0);
                    CHECK(metric_eta(p, H, Ti) == 0);
                }
            }
    }
}

TEST_CASE("property: eta duality, kernel shifts and the unit")
{
    std::mt19937 g(23);
    for (auto& s : kSpecs) {
        PointCalM p = random_calm(s, g);
        const int m = p.m();
        auto kers = kernel_covectors(p, 5);
        for (auto& k : kers) {
            auto K = eta_map(p, k);
            CHECK(K.xi.is_zero());
            CHECK(K.xihat.is_zero());
        }
        TangentCalM e = unit_tangent(p);
        for (int trial = 0; trial < 4; ++trial) {
            auto w = random_covector(g, m), w2 = random_covector(g, m);
            auto X = eta_map(p, w);
            auto Y = eta_map(p, w2);
            CHECK(pairing(p, w, Y) == metric_eta(p, X, Y));
            CHECK(metric_eta(p, X, Y) == metric_eta(p, Y, X));
            auto T = flat_tangent(p, CalMTag::t(1, trial % 2));
            CHECK(pairing(p, w, T) == metric_eta(p, X, T));
            CHECK(c_operator(p, X, w2 + kers[trial]) == c_operator(p, X, w2));
            CHECK(c_operator(p, e, w) == X);
            CHECK(pairing(p, CovectorPair::zero(m), X) == 0);
        }
    }
}

TEST_CASE("property: loop-space identities at random points with polynomial covectors")
{
    std::mt19937 g(24);
    for (auto& s : kSpecs)
        for (int trial = 0; trial < 2; ++trial) {
            PointCalM p = random_calm(s, g);
            auto rep = verify_identities(p, random_covector(g, p.m()), random_covector(g, p.m()));
            CHECK(rep.checked > 8);
            for (auto& f : rep.failures)
                FAIL_CHECK(f.tag << " " << f.detail);
        }
    PointCalM p = random_calm({2, {1}}, g);
    CHECK(verify_identities(p, CovectorPair::zero(1), CovectorPair::zero(1)).ok());
    /* a corrupted derivative of ahat is detected */
    p.dahat += RF::monomial(1, 1);
    auto bad = verify_identities(p, random_covector(g, 1), random_covector(g, 1));
    CHECK_FALSE(bad.ok());
}

TEST_CASE("property: second-derivative tables of Omega and Omegahat")
{
    std::mt19937 g(25);
    for (auto& s : {ManifoldSpecM{2, {1}}, ManifoldSpecM{1, {1, 1}}}) {
        PointCalM p = random_calm(s, g);
        std::vector<TangentCalM> dirs;
        for (int k = 0; k < 2; ++k)
            dirs.push_back(eta_map(p, random_covector(g, p.m())));
        dirs.push_back(flat_tangent(p, CalMTag::t(1, 1)));
        dirs.push_back(flat_tangent(p, CalMTag::hl(1, 0)));
        for (auto& X : dirs)
            for (auto& Y : dirs) {
                CHECK(omega_dd(p, X, Y) == omega_dd(p, Y, X));
                for (int d = 0; d < p.m(); ++d) {
                    CHECK(omegahat_dd(p, X, Y, d) == omegahat_dd(p, Y, X, d));
                    /* the two displays differ by the unsplit zeta-term */
                    CHECK(omega_dd(p, X, Y) - omegahat_dd(p, X, Y, d) == (X.dzeta() * *Y.g).germ[d]);
                }
            }
        CHECK(omega_dd(p, dirs[0], eta_map(p, CovectorPair::zero(p.m()))).is_zero());
    }
}

TEST_CASE("property: open WDVV for Omega and Omegahat along covector frames")
{
    std::mt19937 g(29);
    for (auto& s : {ManifoldSpecM{2, {1}}, ManifoldSpecM{1, {1, 1}}, ManifoldSpecM{1, {2}}}) {
        PointCalM p = random_calm(s, g);
        std::vector<CovectorPair> frame;
        for (int k = 0; k < 3; ++k)
            frame.push_back(random_covector(g, p.m()));
        frame.push_back(flat_tangent(p, CalMTag::t(1, 1)).pre.value());
        auto rep = verify_open_wdvv_calm(p, frame, TableVariant::Omega);
        CHECK(rep.checked == 4 * 4 * 4 + 4 * 4);
        CHECK(rep.ok());
        for (int d = 0; d < p.m(); ++d)
            CHECK(verify_open_wdvv_calm(p, frame, TableVariant::OmegaHat, d).ok());
        auto ser = verify_open_wdvv_calm(p, frame, TableVariant::Omega, 0, Exec::Serial);
        CHECK(ser.ok());
        PointCalM bad = p;
        bad.base.dell = bad.base.dell * Rational(2);
        CHECK_FALSE(verify_open_wdvv_calm(bad, frame, TableVariant::Omega).ok());
        auto X = std::vector<TangentCalM>{};
        for (auto& w : frame)
            X.push_back(eta_map(p, w));
        auto t = omega_table(p, X, TableVariant::Omega);
        CHECK(t.ss == p.da);
        CHECK(t.at(0, 1) == t.at(1, 0));
    }
}

TEST_CASE("zeta = 0: Omega and Omegahat reduce to F^o")
{
    std::mt19937 g(26);
    for (auto& s : kSpecs) {
        auto h = random_flat(s, g);
        std::vector<Disk> disks;
        int off = s.n0 - 1;
        for (int k = 1; k <= s.m(); ++k) {
            disks.push_back({Rational(3 * k) + frac(1, 2), 1, h[off], 1});
            off += s.n[k - 1] + 1;
        }
        PointCalM p = calm_point_from_flat(s, h, disks);
        auto fo = fo_table(p.base);
        auto labels = flat_labels(s);
        for (int a = 0; a < s.dim(); ++a)
            for (int b = 0; b < s.dim(); ++b) {
                auto X = flat_tangent(p, CalMTag::hl(labels[a].k, labels[a].r));
                auto Y = flat_tangent(p, CalMTag::hl(labels[b].k, labels[b].r));
                CHECK(omega_dd(p, X, Y) == fo.at(a, b));
                for (int d = 0; d < p.m(); ++d)
                    CHECK(omegahat_dd(p, X, Y, d) == fo.at(a, b));
            }
    }
}

TEST_CASE("Z2 closure at iota-symmetric points")
{
    std::mt19937 g(27);
    /* one self-symmetric disk; an even zeta winds twice */
    {
        RF ell = RF(Poly<Rational>({frac(1, 3), 0, 1})) + RF::pole(0, 2, 4);
        RF zeta = from_factored(Poly<Rational>({frac(-1, 16), 0, 1}), {{3, 1}, {-3, 1}});
        DiskConfig cfg{{{0, 1, 0, 2}}};
        RF zm = minus_part(CF::uniform(zeta, 1), cfg);
        PointCalM p = make_calm_point(ell + zm, ell - (zeta - zm), cfg, {Rational(2)});
        CHECK(is_iota_symmetric(p));
        for (int trial = 0; trial < 5; ++trial) {
            RF o1 = RF(Poly<Rational>({0, rnd(g), 0, rnd(g)})), o2 = RF(Poly<Rational>({0, rnd(g)}));
            auto w1 = CovectorPair::uniform(o1, o2, 1), w2 = CovectorPair::uniform(o2, o1, 1);
            REQUIRE(is_odd(w1, p.cfg));
            auto X = eta_map(p, w1);
            CHECK(is_even(X, p.cfg));
            CHECK(is_even(c_operator(p, X, w2), p.cfg));
        }
        auto even = CovectorPair::uniform(RF(Rational(1)), RF(), 1);
        CHECK_FALSE(is_odd(even, p.cfg));
    }
    /* two disks exchanged by z -> -z */
    {
        RF ell = RF(Poly<Rational>({1, 0, 1})) + RF::pole(2, 1, 3) + RF::pole(-2, 1, -3);
        RF zeta = from_factored(Poly<Rational>({frac(-441, 100), 0, 1}), {{5, 1}, {-5, 1}});
        DiskConfig cfg{{{2, frac(1, 2), 2, 1}, {-2, frac(1, 2), -2, 1}}};
        RF zm = minus_part(CF::uniform(zeta, 2), cfg);
        PointCalM p = make_calm_point(ell + zm, ell - (zeta - zm), cfg);
        CHECK(is_iota_symmetric(p));
        auto w1 = CovectorPair::uniform(RF::monomial(1, 1), RF::monomial(3, 2), 2);
        auto w2 = CovectorPair::uniform(RF::monomial(1, -1), RF(), 2);
        auto X = eta_map(p, w1);
        CHECK(is_even(X, p.cfg));
        CHECK(is_even(c_operator(p, X, w2), p.cfg));
    }
}

TEST_CASE("audit mode: floating metric constants and zeta-term quadrature")
{
    std::mt19937 g(28);
    PointCalM p = random_calm({2, {1}}, g);
    for (int s1 = -2; s1 <= 1; ++s1)
        for (int s2 = -2; s2 <= 1; ++s2) {
            auto r = audit_t_metric(p, 1, s1, s2);
            CHECK(r.residual < 1e-10);
            CHECK(r.expected == (s1 + s2 == -1 ? -1 : 0));
        }
    auto X = eta_map(p, random_covector(g, 1));
    auto Y = eta_map(p, random_covector(g, 1));
    for (auto z : {Rational(-1), frac(17, 3), Rational(9)}) {
        auto r = audit_zeta_term(p, X, Y, z);
        CHECK(r.residual < 1e-10);
    }
    /* d = 2 */
    RF ell = RF(Poly<Rational>({frac(1, 3), 0, 1})) + RF::pole(0, 2, 4);
    RF zeta = from_factored(Poly<Rational>({frac(-1, 16), 0, 1}), {{3, 1}, {-3, 1}});
    DiskConfig cfg{{{0, 1, 0, 2}}};
    RF zm = minus_part(CF::uniform(zeta, 1), cfg);
    PointCalM q = make_calm_point(ell + zm, ell - (zeta - zm), cfg, {Rational(2)});
    CHECK_THROWS_AS(flat_tangent(q, CalMTag::t(1, 0)), MathError);
    for (int s1 = -3; s1 <= 1; ++s1)
        for (int s2 = -3; s2 <= 1; ++s2) {
            auto r = audit_t_metric(q, 1, s1, s2);
            CHECK(r.residual < 1e-10);
            CHECK(r.expected == (s1 + s2 == -2 ? -2 : 0));
        }
}
