#include <doctest.h>

#include "owdvv/dtype.hpp"

#include <random>

using namespace owdvv;
using RF = RatFunc<Rational>;

namespace {

Rational rnd(std::mt19937& g, int lo = -4, int hi = 4)
{
    std::uniform_int_distribution<int> n(lo, hi), d(1, 3);
    return frac(n(g), d(g));
}

Rational nonzero(std::mt19937& g)
{
    Rational b;
    do
        b = rnd(g);
    while (sgn(b) == 0);
    return b;
}

PointDHat random_dhat(const SpecDHat& spec, std::mt19937& g)
{
    PointDHat pd{spec, {}};
    for (auto& l : reduced_labels(spec)) {
        if (l.k >= 2 && l.r == 0)
            pd.hhat.push_back(Rational(2 * l.k) + rnd(g, 0, 2) / 2);
        else if (l.r == 1 && l.k >= 1)
            pd.hhat.push_back(nonzero(g));
        else
            pd.hhat.push_back(rnd(g));
    }
    return pd;
}

const std::vector<SpecDHat> specs = {
    {1, 1, {}}, {2, 1, {}}, {1, 2, {}}, {1, 1, {1}}, {2, 1, {1}}, {1, 1, {2}}, {2, 2, {1}},
};

std::string spec_name(const SpecDHat& s)
{
    std::string r = "(" + std::to_string(s.n0p) + "," + std::to_string(s.n1p);
    for (int v : s.nkp)
        r += ";" + std::to_string(v);
    return r + ")";
}

}  // namespace

TEST_CASE("even shape: ambient spec, reduced chart and frame")
{
    SpecDHat s{2, 1, {2}};
    auto amb = s.ambient();
    CHECK(amb.n0 == 4);
    CHECK(amb.n == std::vector<int>{2, 2, 2});
    CHECK(s.dim() == 2 + 1 + 3);
    CHECK(reduced_names(s) == std::vector<std::string>{"h0,1", "h0,3", "h1,1", "h2,0", "h2,1", "h2,2"});
    auto frame = pushforward_frame(s);
    REQUIRE(frame.size() == 6);
    TangentM expect(amb.dim(), Rational(0));
    expect[label_index(amb, {2, 1})] = Rational(1);
    expect[label_index(amb, {3, 1})] = Rational(-1);
    CHECK(frame[4] == expect);
    CHECK_THROWS_AS(SpecDHat({0, 1, {}}).validate(), MathError);
}

TEST_CASE("even shape: minimal case against the sympy oracle")
{
    PointDHat pd{{1, 1, {}}, {frac(1, 3), Rational(2)}};
    PointM pt = embed(pd);
    CHECK(pt.flat == std::vector<Rational>{frac(1, 3), Rational(0), Rational(2), Rational(0)});

    auto in = reduced_intrinsic(pd);
    CHECK(in.metric == std::vector<std::vector<Rational>>{{Rational(2), Rational(0)}, {Rational(0), Rational(2)}});
    const int tri[2][2][2] = {{{4, 0}, {0, 4}}, {{0, 4}, {4, 0}}};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int d = 0; d < 2; ++d)
                CHECK(in.tri(a, b, d) == Rational(tri[a][b][d]));

    auto t = restricted_fo_table(pd);
    Rational s = frac(5, 2);
    CHECK(t.at(0, 0).evaluate(s) == Rational(0));
    CHECK(t.at(0, 1).evaluate(s) == Rational(0));
    CHECK(t.at(1, 1).evaluate(s) == frac(-4, 5));
    CHECK(t.ds[0].evaluate(s) == Rational(2));
    CHECK(t.ds[1].evaluate(s) == frac(16, 25));

    CHECK(restrict_structure(pd).ok());
    CHECK(verify_open_wdvv_dhat(pd).ok());
}

TEST_CASE("even shape: embedding round trips through the superpotential")
{
    std::mt19937 g(31);
    for (auto& spec : specs) {
        for (int it = 0; it < 2; ++it) {
            auto pd = random_dhat(spec, g);
            PointM pt = embed(pd);
            CHECK(pt.ell.reflect() == pt.ell);
            std::vector<Rational> order{Rational(0)};
            std::vector<std::optional<Rational>> br{pt.flat[label_index(pt.spec, {1, 1})]};
            for (int k = 2; k <= spec.mp() + 1; ++k) {
                Rational phi = pt.flat[label_index(pt.spec, {2 * k - 2, 0})];
                order.push_back(phi);
                order.push_back(-phi);
                br.push_back(pt.flat[label_index(pt.spec, {2 * k - 2, 1})]);
                br.push_back(-pt.flat[label_index(pt.spec, {2 * k - 2, 1})]);
            }
            auto back = flat_from_superpotential(pt.spec, pt.ell, order, br);
            INFO(spec_name(spec));
            CHECK(back == pt.flat);
            CHECK(restrict_flat(spec, back) == pd.hhat);
        }
    }
}

TEST_CASE("even shape: off-submanifold points and odd superpotentials are rejected")
{
    SpecDHat spec{1, 1, {1}};
    auto amb = spec.ambient();
    PointDHat pd{spec, {Rational(1), Rational(2), Rational(3), Rational(1)}};
    auto h = ambient_flat(spec, pd.hhat);
    h[label_index(amb, {3, 1})] = Rational(2);
    CHECK_THROWS_AS(restrict_flat(spec, h), MathError);
    PointDHat clash{spec, {Rational(1), Rational(2), Rational(0), Rational(1)}};
    CHECK_THROWS_AS(embed(clash), MathError);
    PointDHat flat0{spec, {Rational(1), Rational(0), Rational(3), Rational(1)}};
    CHECK_THROWS_AS(embed(flat0), MathError);
}

TEST_CASE("even shape: intrinsic and push-forward structures agree, product closes")
{
    std::mt19937 g(7);
    for (auto& spec : specs) {
        auto pd = random_dhat(spec, g);
        auto rep = restrict_structure(pd);
        std::string msg;
        for (auto& f : rep.failures)
            msg += f + "; ";
        INFO(spec_name(spec), " ", msg);
        CHECK(rep.ok());
        CHECK(rep.checked > 0);
    }
}

TEST_CASE("even shape: restricted open WDVV holds")
{
    std::mt19937 g(11);
    for (auto& spec : specs) {
        auto pd = random_dhat(spec, g);
        auto rep = verify_open_wdvv_dhat(pd);
        INFO(spec_name(spec));
        CHECK(rep.ok());
        CHECK(rep.checked > 0);
    }
}

TEST_CASE("even shape: parity and flow tangency on ten points")
{
    std::mt19937 g(5);
    const std::vector<SpecDHat> small = {{1, 1, {}}, {2, 1, {}}, {1, 1, {1}}, {1, 2, {}}, {1, 1, {2}}};
    for (int it = 0; it < 10; ++it) {
        const auto& spec = small[it % small.size()];
        auto pd = random_dhat(spec, g);
        TangentM ux;
        for (int a = 0; a < spec.dim(); ++a)
            ux.push_back(rnd(g));
        auto rep = check_parity(pd, ux, 2);
        std::string msg;
        for (auto& f : rep.failures)
            msg += f + "; ";
        INFO(spec_name(spec), " ", msg);
        CHECK(rep.ok());
    }
}

TEST_CASE("even shape: serial and parallel agree")
{
    std::mt19937 g(3);
    auto pd = random_dhat({2, 1, {1}}, g);
    auto a = reduced_pushforward(pd, Exec::Serial);
    auto b = reduced_pushforward(pd, Exec::Parallel);
    CHECK(a.c.c == b.c.c);
    CHECK(a.triple == b.triple);
    auto ta = restricted_fo_table(pd, Exec::Serial);
    auto tb = restricted_fo_table(pd, Exec::Parallel);
    CHECK(ta.dd == tb.dd);
    CHECK(ta.ds == tb.ds);
}

TEST_CASE("even shape: a broken frame is detected")
{
    std::mt19937 g(13);
    auto pd = random_dhat({1, 1, {1}}, g);
    PointM pt = embed(pd);
    auto frame = pushforward_frame(pd.spec);
    /* an odd direction: h_{2,1} + h_{3,1} */
    TangentM odd = frame[3];
    odd[label_index(pt.spec, {3, 1})] = Rational(1);
    CHECK_FALSE(tangent_ell(pt, odd).reflect() == tangent_ell(pt, odd));
}
