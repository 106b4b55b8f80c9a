#include "owdvv/open_wdvv.hpp"

namespace owdvv {

std::string variant_name(TableVariant v)
{
    switch (v) {
    case TableVariant::Fo:
        return "Fo";
    case TableVariant::Omega:
        return "Omega";
    case TableVariant::OmegaHat:
        return "OmegaHat";
    }
    return "?";
}

SecondDerivTable fo_table(const PointM& p, Exec ex)
{
    const int d = p.dim();
    SecondDerivTable t;
    t.variant = TableVariant::Fo;
    t.dim = d;
    t.dd.resize(static_cast<size_t>(d) * d);
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            pairs.push_back({a, b});
    auto centers = p.centers();
    for_each_index(ex, static_cast<long>(pairs.size()), [&](long i) {
        auto [a, b] = pairs[i];
        t.at(a, b) = split_truncation(centers, p.tangents[a] * p.tangents[b], p.dell);
    });
    for (auto [a, b] : pairs)
        t.at(b, a) = t.at(a, b);
    t.ds = p.tangents;
    t.ss = p.dell;
    return t;
}

OpenWdvvReport verify_open_wdvv(const SecondDerivTable& t, const StructureConstants& c, Exec ex)
{
    const int d = t.dim;
    if (c.dim != d)
        throw SchemaError("table and structure constants have different dimensions");
    /* X_ab = sum_d c_ab^d dd[d, .] and Y_ab = sum_d c_ab^d ds[d] */
    auto contract = [&](int a, int b, int col) {
        RatFunc<Rational> r;
        for (int e = 0; e < d; ++e)
            if (sgn(c.at(a, b, e)))
                r += (col < 0 ? t.ds[e] : t.at(e, col)) * c.at(a, b, e);
        return r;
    };
    const long n3 = static_cast<long>(d) * d * d;
    std::vector<RatFunc<Rational>> r1(n3), r2(static_cast<size_t>(d) * d);
    for_each_index(ex, n3, [&](long i) {
        int a = static_cast<int>(i / (d * d)), b = static_cast<int>(i / d % d), g = static_cast<int>(i % d);
        r1[i] = contract(a, b, g) + t.at(a, b) * t.ds[g] - contract(b, g, a) - t.at(b, g) * t.ds[a];
    });
    for_each_index(ex, static_cast<long>(d) * d, [&](long i) {
        int a = static_cast<int>(i / d), b = static_cast<int>(i % d);
        r2[i] = contract(a, b, -1) + t.at(a, b) * t.ss - t.ds[a] * t.ds[b];
    });
    OpenWdvvReport rep;
    rep.checked = n3 + static_cast<long>(d) * d;
    for (long i = 0; i < n3; ++i)
        if (!r1[i].is_zero())
            rep.failures.push_back(
                {1, static_cast<int>(i / (d * d)), static_cast<int>(i / d % d), static_cast<int>(i % d), r1[i]});
    for (long i = 0; i < static_cast<long>(d) * d; ++i)
        if (!r2[i].is_zero())
            rep.failures.push_back({2, static_cast<int>(i / d), static_cast<int>(i % d), -1, r2[i]});
    return rep;
}

namespace {

RatFunc<Rational> calm_dd(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y, TableVariant v, int disk)
{
    return v == TableVariant::Omega ? omega_dd(p, X, Y) : omegahat_dd(p, X, Y, disk);
}

RatFunc<Rational> calm_ds(const TangentCalM& X, TableVariant v, int disk)
{
    return v == TableVariant::Omega ? X.xi : X.xihat.germ.at(disk);
}

void check_calm_variant(const PointCalM& p, TableVariant v, int disk)
{
    if (v == TableVariant::Fo)
        throw SchemaError("loop-space tables are Omega or OmegaHat");
    if (v == TableVariant::OmegaHat && (disk < 0 || disk >= p.m()))
        throw SchemaError("disk index out of range");
}

}  // namespace

SecondDerivTable omega_table(const PointCalM& p, const std::vector<TangentCalM>& dirs, TableVariant v, int disk,
                             Exec ex)
{
    check_calm_variant(p, v, disk);
    const int d = static_cast<int>(dirs.size());
    SecondDerivTable t;
    t.variant = v;
    t.dim = d;
    t.dd.resize(static_cast<size_t>(d) * d);
    for_each_index(ex, static_cast<long>(d) * d,
                   [&](long i) { t.dd[i] = calm_dd(p, dirs[i / d], dirs[i % d], v, disk); });
    for (auto& X : dirs)
        t.ds.push_back(calm_ds(X, v, disk));
    t.ss = v == TableVariant::Omega ? p.da : p.dahat;
    return t;
}

OpenWdvvReport verify_open_wdvv_calm(const PointCalM& p, const std::vector<CovectorPair>& frame, TableVariant v,
                                     int disk, Exec ex)
{
    check_calm_variant(p, v, disk);
    const int d = static_cast<int>(frame.size());
    std::vector<TangentCalM> X;
    for (auto& w : frame)
        X.push_back(eta_map(p, w));
    SecondDerivTable t = omega_table(p, X, v, disk, ex);
    const long d2 = static_cast<long>(d) * d, d3 = d2 * d;
    std::vector<TangentCalM> prod(d2);
    for_each_index(ex, d2, [&](long i) { prod[i] = c_operator(p, X[i / d], frame[i % d]); });
    std::vector<RatFunc<Rational>> r1(d3), r2(d2);
    for_each_index(ex, d3, [&](long i) {
        int a = static_cast<int>(i / d2), b = static_cast<int>(i / d % d), c = static_cast<int>(i % d);
        r1[i] = calm_dd(p, prod[a * d + b], X[c], v, disk) + t.at(a, b) * t.ds[c] -
                calm_dd(p, prod[b * d + c], X[a], v, disk) - t.at(b, c) * t.ds[a];
    });
    for_each_index(ex, d2, [&](long i) {
        int a = static_cast<int>(i / d), b = static_cast<int>(i % d);
        r2[i] = calm_ds(prod[i], v, disk) + t.at(a, b) * t.ss - t.ds[a] * t.ds[b];
    });
    OpenWdvvReport rep;
    rep.checked = d3 + d2;
    for (long i = 0; i < d3; ++i)
        if (!r1[i].is_zero())
            rep.failures.push_back(
                {1, static_cast<int>(i / d2), static_cast<int>(i / d % d), static_cast<int>(i % d), r1[i]});
    for (long i = 0; i < d2; ++i)
        if (!r2[i].is_zero())
            rep.failures.push_back({2, static_cast<int>(i / d), static_cast<int>(i % d), -1, r2[i]});
    return rep;
}

std::vector<std::string> OpenSolutionA::names() const
{
    std::vector<std::string> n;
    for (int j = 1; j < spec.n0; ++j)
        n.push_back("h0," + std::to_string(j));
    n.push_back("s");
    return n;
}

namespace {

/* sum over monomials x^e of c x^e / ((deg + 1)(deg + 2)) */
MPoly homotopy_weight(const MPoly& f)
{
    MPoly r;
    for (auto& [e, c] : f.terms()) {
        int deg = 0;
        for (int k : e)
            deg += k;
        r.add_term(e, c / ((deg + 1) * (deg + 2)));
    }
    return r;
}

Poly<Rational> specialize(const MPoly& f, const std::vector<Rational>& h)
{
    const int N = static_cast<int>(h.size());
    std::vector<Rational> coeffs;
    for (auto& [e, c] : f.terms()) {
        Rational v = c;
        for (int i = 0; i < N && !e.empty(); ++i)
            v *= rational_pow(h[i], e[i]);
        int k = e.empty() ? 0 : e[N];
        if (static_cast<int>(coeffs.size()) <= k)
            coeffs.resize(k + 1, Rational(0));
        coeffs[k] += v;
    }
    return Poly<Rational>(std::move(coeffs));
}

}  // namespace

OpenSolutionA fo_closed_form(const ManifoldSpecM& spec)
{
    spec.validate();
    if (spec.m() != 0)
        throw MathError("closed-form F^o is polynomial only for m = 0; use the second-derivative table");
    const int N = spec.n0 - 1;
    std::vector<MPoly> h;
    for (int i = 0; i < N; ++i)
        h.push_back(MPoly::variable(N + 1, i));
    const MPoly s = MPoly::variable(N + 1, N);
    RatFunc<MPoly> ell = superpotential_from_flat(spec, h);
    RatFunc<MPoly> dell = ell.derivative();
    const std::vector<Center> inf{Center::at_infinity()};

    /* d_s F = ell(s), integrated from s = 0 */
    MPoly F = ell.poly.integral().evaluate(s);
    std::vector<RatFunc<MPoly>> T;
    for (int a = 0; a < N; ++a)
        T.push_back(map_coeffs<MPoly>(ell, [a](const MPoly& c) { return c.derivative(a); }));
    std::vector<std::vector<MPoly>> dd(N, std::vector<MPoly>(N));
    for (int a = 0; a < N; ++a)
        for (int b = a; b < N; ++b)
            dd[a][b] = dd[b][a] = split_truncation(inf, T[a] * T[b], dell).poly.evaluate(s);

    MPoly q;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            MPoly D = dd[a][b] - F.derivative(a).derivative(b);
            if (!D.derivative(N).is_zero())
                throw MathError("d_a d_b F^o - d_a d_b (integral of ell) depends on s");
            q += h[a] * h[b] * homotopy_weight(D);
        }
    F += q;
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
            if (!(F.derivative(a).derivative(b) == dd[a][b]))
                throw MathError("second-derivative table of F^o is not closed");
    return {spec, F};
}

SecondDerivTable closed_form_table(const OpenSolutionA& f, const std::vector<Rational>& flat)
{
    const int N = f.spec.n0 - 1;
    if (static_cast<int>(flat.size()) != N)
        throw SchemaError("flat point has the wrong number of coordinates");
    SecondDerivTable t;
    t.dim = N;
    t.dd.resize(static_cast<size_t>(N) * N);
    for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b)
            t.at(a, b) = RatFunc<Rational>(specialize(f.F.derivative(a).derivative(b), flat));
        t.ds.push_back(RatFunc<Rational>(specialize(f.F.derivative(a).derivative(N), flat)));
    }
    t.ss = RatFunc<Rational>(specialize(f.F.derivative(N).derivative(N), flat));
    return t;
}

}  // namespace owdvv
