#include "owdvv/dtype.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

namespace owdvv {

ManifoldSpecM SpecDHat::ambient() const
{
    ManifoldSpecM s;
    s.n0 = 2 * n0p;
    s.n.push_back(2 * n1p);
    for (int v : nkp) {
        s.n.push_back(v);
        s.n.push_back(v);
    }
    return s;
}

int SpecDHat::dim() const
{
    int d = n0p + n1p;
    for (int v : nkp)
        d += v + 1;
    return d;
}

void SpecDHat::validate() const
{
    if (n0p < 1 || n1p < 1)
        throw MathError("even shape needs n0' >= 1 and n1' >= 1");
    for (int v : nkp)
        if (v < 1)
            throw MathError("pole pair orders must be at least 1");
}

std::vector<FlatLabel> reduced_labels(const SpecDHat& spec)
{
    spec.validate();
    std::vector<FlatLabel> out;
    for (int r = 1; r < 2 * spec.n0p; r += 2)
        out.push_back({0, r});
    for (int r = 1; r < 2 * spec.n1p; r += 2)
        out.push_back({1, r});
    for (int k = 2; k <= spec.mp() + 1; ++k)
        for (int r = 0; r <= spec.nkp[k - 2]; ++r)
            out.push_back({2 * k - 2, r});
    return out;
}

std::vector<std::string> reduced_names(const SpecDHat& spec)
{
    std::vector<std::string> out;
    for (auto& l : reduced_labels(spec))
        out.push_back(label_name(l));
    return out;
}

namespace {

/* Partner of a pair label, or k = -1 when the coordinate has none. */
FlatLabel partner(const FlatLabel& l) { return l.k >= 2 ? FlatLabel{l.k + 1, l.r} : FlatLabel{-1, 0}; }

std::vector<std::vector<Rational>> inverse_matrix(std::vector<std::vector<Rational>> a)
{
    int n = static_cast<int>(a.size());
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        inv[i][i] = Rational(1);
    for (int col = 0; col < n; ++col) {
        int piv = col;
        while (piv < n && is_zero(a[piv][col]))
            ++piv;
        if (piv == n)
            throw MathError("reduced metric is degenerate");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rational f = inverse(a[col][col]);
        for (int j = 0; j < n; ++j) {
            a[col][j] *= f;
            inv[col][j] *= f;
        }
        for (int i = 0; i < n; ++i) {
            if (i == col || is_zero(a[i][col]))
                continue;
            Rational g = a[i][col];
            for (int j = 0; j < n; ++j) {
                a[i][j] -= g * a[col][j];
                inv[i][j] -= g * inv[col][j];
            }
        }
    }
    return inv;
}

StructureConstants raise_index(int n, const std::vector<std::vector<Rational>>& metric, const std::vector<Rational>& tri)
{
    auto inv = inverse_matrix(metric);
    StructureConstants c;
    c.dim = n;
    c.c.assign(static_cast<size_t>(n) * n * n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) {
                Rational acc(0);
                for (int e = 0; e < n; ++e)
                    acc += tri[(static_cast<size_t>(a) * n + b) * n + e] * inv[e][d];
                c.at(a, b, d) = acc;
            }
    return c;
}

/* Reduced components of an ambient vector, or nullopt when it leaves the even directions. */
std::optional<std::vector<Rational>> project(const SpecDHat& spec, const TangentM& v)
{
    auto frame = pushforward_frame(spec);
    auto amb = spec.ambient();
    auto labels = reduced_labels(spec);
    std::vector<Rational> out;
    TangentM rebuilt(v.size(), Rational(0));
    for (size_t a = 0; a < labels.size(); ++a) {
        Rational x = v[label_index(amb, labels[a])];
        out.push_back(x);
        for (size_t i = 0; i < v.size(); ++i)
            rebuilt[i] += x * frame[a][i];
    }
    if (rebuilt != v)
        return std::nullopt;
    return out;
}

bool parity_is(const RatFunc<Rational>& f, int sign)
{
    return sign > 0 ? f.reflect() == f : f.reflect() == -f;
}

}  // namespace

template <class T>
std::vector<T> ambient_flat(const SpecDHat& spec, const std::vector<T>& hhat)
{
    auto amb = spec.ambient();
    auto labels = reduced_labels(spec);
    if (hhat.size() != labels.size())
        throw SchemaError("expected " + std::to_string(labels.size()) + " reduced coordinates, got " +
                          std::to_string(hhat.size()));
    std::vector<T> h(amb.dim(), T(Rational(0)));
    for (size_t a = 0; a < labels.size(); ++a) {
        h[label_index(amb, labels[a])] = hhat[a];
        FlatLabel pl = partner(labels[a]);
        if (pl.k >= 0)
            h[label_index(amb, pl)] = -hhat[a];
    }
    return h;
}

template std::vector<Rational> ambient_flat(const SpecDHat&, const std::vector<Rational>&);
template std::vector<Jet> ambient_flat(const SpecDHat&, const std::vector<Jet>&);

std::vector<TangentM> pushforward_frame(const SpecDHat& spec)
{
    auto amb = spec.ambient();
    auto labels = reduced_labels(spec);
    std::vector<TangentM> out;
    for (auto& l : labels) {
        TangentM v(amb.dim(), Rational(0));
        v[label_index(amb, l)] = Rational(1);
        FlatLabel pl = partner(l);
        if (pl.k >= 0)
            v[label_index(amb, pl)] = Rational(-1);
        out.push_back(std::move(v));
    }
    return out;
}

PointM embed(const PointDHat& pd)
{
    auto amb = pd.spec.ambient();
    auto labels = reduced_labels(pd.spec);
    auto h = ambient_flat(pd.spec, pd.hhat);
    std::set<Rational> poles{Rational(0)};
    for (size_t a = 0; a < labels.size(); ++a) {
        const auto& l = labels[a];
        if ((l.k == 1 && l.r == 1) || (l.k >= 2 && l.r == 1))
            if (is_zero(pd.hhat[a]))
                throw MathError("coordinate " + label_name(l) + " must be nonzero");
        if (l.k >= 2 && l.r == 0) {
            Rational phi = pd.hhat[a];
            if (!poles.insert(phi).second || !poles.insert(-phi).second)
                throw MathError("poles must be 0 and distinct pairs +-phi with phi != 0");
        }
    }
    PointM pt = make_point(amb, h);
    if (pt.ell.reflect() != pt.ell)
        throw MathError("superpotential is not even");
    return pt;
}

std::vector<Rational> restrict_flat(const SpecDHat& spec, const std::vector<Rational>& flat)
{
    auto amb = spec.ambient();
    auto labels = reduced_labels(spec);
    if (static_cast<int>(flat.size()) != amb.dim())
        throw SchemaError("expected " + std::to_string(amb.dim()) + " ambient coordinates");
    std::vector<Rational> out;
    for (auto& l : labels)
        out.push_back(flat[label_index(amb, l)]);
    if (ambient_flat(spec, out) != flat)
        throw MathError("point is not on the even submanifold");
    return out;
}

ReducedStructure reduced_intrinsic(const PointDHat& pd)
{
    PointM pt = embed(pd);
    int n = static_cast<int>(pd.hhat.size());
    std::vector<Jet> jh;
    for (int a = 0; a < n; ++a)
        jh.push_back(Jet::variable(n, 1, a, pd.hhat[a]));
    auto ellj = superpotential_from_flat(pt.spec, ambient_flat(pd.spec, jh));
    std::vector<RatFunc<Rational>> dl;
    for (int a = 0; a < n; ++a)
        dl.push_back(map_coeffs<Rational>(ellj, [a](const Jet& x) { return x.grad(a); }));
    auto cs = pt.centers();
    ReducedStructure r;
    r.dim = n;
    r.metric.assign(n, std::vector<Rational>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            r.metric[a][b] = metric_pair_ell(pt, dl[a], dl[b]);
    r.triple.assign(static_cast<size_t>(n) * n * n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d)
                r.triple[(static_cast<size_t>(a) * n + b) * n + d] = residue_form(cs, dl[a] * dl[b] * dl[d], pt.dell);
    r.c = raise_index(n, r.metric, r.triple);
    return r;
}

ReducedStructure reduced_pushforward(const PointDHat& pd, Exec ex)
{
    PointM pt = embed(pd);
    auto frame = pushforward_frame(pd.spec);
    auto eta = metric_matrix(pt);
    auto cst = structure_constants(pt, ex);
    int n = static_cast<int>(frame.size());
    int N = pt.dim();
    auto pair = [&](const TangentM& x, const TangentM& y) {
        Rational acc(0);
        for (int i = 0; i < N; ++i)
            if (!is_zero(x[i]))
                for (int j = 0; j < N; ++j)
                    acc += x[i] * eta[i][j] * y[j];
        return acc;
    };
    ReducedStructure r;
    r.dim = n;
    r.metric.assign(n, std::vector<Rational>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            r.metric[a][b] = pair(frame[a], frame[b]);
    r.triple.assign(static_cast<size_t>(n) * n * n, Rational(0));
    r.c.dim = n;
    r.c.c.assign(static_cast<size_t>(n) * n * n, Rational(0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            TangentM prod = multiply(cst, frame[a], frame[b]);
            for (int d = 0; d < n; ++d)
                r.triple[(static_cast<size_t>(a) * n + b) * n + d] = pair(prod, frame[d]);
            auto comp = project(pd.spec, prod);
            if (!comp)
                throw MathError("product of even directions leaves the submanifold");
            for (int d = 0; d < n; ++d)
                r.c.at(a, b, d) = (*comp)[d];
        }
    return r;
}

DHatReport restrict_structure(const PointDHat& pd, Exec ex)
{
    DHatReport rep;
    ReducedStructure in = reduced_intrinsic(pd);
    ReducedStructure pf;
    try {
        pf = reduced_pushforward(pd, ex);
    } catch (const MathError& e) {
        rep.failures.push_back(e.what());
        return rep;
    }
    auto names = reduced_names(pd.spec);
    int n = in.dim;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            ++rep.checked;
            if (in.metric[a][b] != pf.metric[a][b])
                rep.failures.push_back("metric(" + names[a] + ", " + names[b] + "): " + to_string(in.metric[a][b]) +
                                       " vs " + to_string(pf.metric[a][b]));
            for (int d = 0; d < n; ++d) {
                rep.checked += 2;
                if (in.tri(a, b, d) != pf.tri(a, b, d))
                    rep.failures.push_back("triple(" + names[a] + ", " + names[b] + ", " + names[d] +
                                           "): " + to_string(in.tri(a, b, d)) + " vs " + to_string(pf.tri(a, b, d)));
                if (in.c.at(a, b, d) != pf.c.at(a, b, d))
                    rep.failures.push_back("c(" + names[a] + ", " + names[b] + "; " + names[d] +
                                           "): " + to_string(in.c.at(a, b, d)) + " vs " + to_string(pf.c.at(a, b, d)));
            }
        }
    return rep;
}

SecondDerivTable restricted_fo_table(const PointDHat& pd, Exec ex)
{
    PointM pt = embed(pd);
    auto full = fo_table(pt, ex);
    auto frame = pushforward_frame(pd.spec);
    int n = static_cast<int>(frame.size());
    int N = pt.dim();
    SecondDerivTable t;
    t.variant = TableVariant::Fo;
    t.dim = n;
    t.dd.assign(static_cast<size_t>(n) * n, RatFunc<Rational>());
    t.ds.assign(n, RatFunc<Rational>());
    t.ss = full.ss;
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < N; ++i)
            if (!is_zero(frame[a][i]))
                t.ds[a] += full.ds[i] * frame[a][i];
        for (int b = 0; b < n; ++b)
            for (int i = 0; i < N; ++i)
                if (!is_zero(frame[a][i]))
                    for (int j = 0; j < N; ++j)
                        if (!is_zero(frame[b][j]))
                            t.at(a, b) += full.at(i, j) * (frame[a][i] * frame[b][j]);
    }
    return t;
}

OpenWdvvReport verify_open_wdvv_dhat(const PointDHat& pd, Exec ex)
{
    return verify_open_wdvv(restricted_fo_table(pd, ex), reduced_pushforward(pd, ex).c, ex);
}

DHatReport check_parity(const PointDHat& pd, const TangentM& ux_hat, int p_max, Exec ex)
{
    DHatReport rep;
    PointM pt = embed(pd);
    auto names = reduced_names(pd.spec);
    auto labels = reduced_labels(pd.spec);
    auto frame = pushforward_frame(pd.spec);
    int n = static_cast<int>(frame.size());

    ++rep.checked;
    if (!parity_is(pt.ell, 1))
        rep.failures.push_back("ell is not even");
    for (int a = 0; a < n; ++a) {
        ++rep.checked;
        if (!parity_is(tangent_ell(pt, frame[a]), 1))
            rep.failures.push_back("d ell / d " + names[a] + " is not even");
    }

    auto t = restricted_fo_table(pd, ex);
    for (int a = 0; a < n; ++a) {
        rep.checked += 1 + n;
        if (!parity_is(t.ds[a], 1))
            rep.failures.push_back("d_s d_" + names[a] + " F is not even in s");
        for (int b = 0; b < n; ++b)
            if (!parity_is(t.at(a, b), -1))
                rep.failures.push_back("d_" + names[a] + " d_" + names[b] + " F is not odd in s");
    }
    ++rep.checked;
    if (!parity_is(t.ss, -1))
        rep.failures.push_back("d_s d_s F is not odd in s");

    if (static_cast<int>(ux_hat.size()) != n)
        throw SchemaError("loop tangent has the wrong number of reduced components");
    LoopPointM lp;
    lp.point = pt;
    lp.ux.assign(pt.dim(), Rational(0));
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < pt.dim(); ++i)
            lp.ux[i] += ux_hat[a] * frame[a][i];
    lp.s = Rational(0);
    lp.sx = Rational(0);

    std::vector<std::pair<int, int>> tasks;
    for (int a = 0; a < n; ++a) {
        const auto& l = labels[a];
        if (l.k >= 2 && l.r == pd.spec.nkp[l.k / 2 - 1])
            continue;
        for (int p = 0; p <= p_max; ++p)
            tasks.push_back({a, p});
    }
    std::vector<std::string> errs(tasks.size());
    for_each_index(ex, static_cast<long>(tasks.size()), [&](long i) {
        auto [a, p] = tasks[i];
        std::string tag = "flow " + names[a] + ";" + std::to_string(p);
        try {
            auto flow = closed_flow_rhs(lp, FlowIndex::flat(labels[a], p));
            FlatLabel pl = partner(labels[a]);
            if (pl.k >= 0)
                flow.rational -= closed_flow_rhs(lp, FlowIndex::flat(pl, p)).rational;
            if (flow.has_logs()) {
                errs[i] = tag + " has logarithmic terms";
                return;
            }
            if (!parity_is(flow.rational, 1)) {
                errs[i] = tag + " is not even";
                return;
            }
            auto comp = decompose_tangent(pt, flow.rational);
            if (!comp || !project(pd.spec, *comp))
                errs[i] = tag + " is not tangent to the submanifold";
        } catch (const MathError& e) {
            errs[i] = tag + ": " + e.what();
        }
    });
    rep.checked += static_cast<long>(tasks.size());
    for (auto& e : errs)
        if (!e.empty())
            rep.failures.push_back(e);
    return rep;
}

}  // namespace owdvv
