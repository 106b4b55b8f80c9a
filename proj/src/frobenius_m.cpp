#include "owdvv/frobenius_m.hpp"

#include "owdvv/mpoly.hpp"

#include <set>

namespace owdvv {

int ManifoldSpecM::dim() const
{
    int d = n0 - 1;
    for (int k : n)
        d += k + 1;
    return d;
}

void ManifoldSpecM::validate() const
{
    if (n0 < 1)
        throw MathError("n0 must be at least 1");
    for (int k : n)
        if (k < 1)
            throw MathError("pole orders n_k must be at least 1");
    if (dim() < 1)
        throw MathError("empty manifold (dimension 0)");
}

std::vector<FlatLabel> flat_labels(const ManifoldSpecM& spec)
{
    std::vector<FlatLabel> out;
    for (int r = 1; r <= spec.n0 - 1; ++r)
        out.push_back({0, r});
    for (int k = 1; k <= spec.m(); ++k)
        for (int r = 0; r <= spec.n[k - 1]; ++r)
            out.push_back({k, r});
    return out;
}

std::string label_name(const FlatLabel& l) { return "h" + std::to_string(l.k) + "," + std::to_string(l.r); }

FlatLabel parse_label(const std::string& s)
{
    auto comma = s.find(',');
    if (s.size() < 4 || s[0] != 'h' || comma == std::string::npos)
        throw SchemaError("malformed flat label '" + s + "' (expected hK,R)");
    try {
        return {std::stoi(s.substr(1, comma - 1)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw SchemaError("malformed flat label '" + s + "'");
    }
}

int label_index(const ManifoldSpecM& spec, const FlatLabel& l)
{
    auto labels = flat_labels(spec);
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == l)
            return static_cast<int>(i);
    throw SchemaError("flat label " + label_name(l) + " does not exist for this spec");
}

int dual_index(const ManifoldSpecM& spec, int alpha)
{
    auto labels = flat_labels(spec);
    FlatLabel l = labels.at(alpha);
    int nn = l.k == 0 ? spec.n0 : spec.n[l.k - 1];
    return label_index(spec, {l.k, nn - l.r});
}

int metric_constant(const ManifoldSpecM& spec, int alpha)
{
    FlatLabel l = flat_labels(spec).at(alpha);
    return l.k == 0 ? spec.n0 : spec.n[l.k - 1];
}

std::vector<Center> PointM::centers() const
{
    std::vector<Center> c{Center::at_infinity()};
    for (auto& p : phi)
        c.push_back(Center::at(p));
    return c;
}

template <class T>
RatFunc<T> superpotential_from_flat(const ManifoldSpecM& spec, const std::vector<T>& h)
{
    spec.validate();
    if (static_cast<int>(h.size()) != spec.dim())
        throw SchemaError("expected " + std::to_string(spec.dim()) + " flat coordinates, got " +
                          std::to_string(h.size()));
    const int n0 = spec.n0;
    const Center aux = Center::at(Rational(0));
    const T one = T(Rational(1));

    /* z sigma = 1 - sum_j h_{0,j} sigma^{j+1} + O(sigma^{n0+1}),  sigma = 1/w, w^n0 = ell */
    std::vector<T> zc(n0 + 1, T(Rational(0)));
    zc[0] = one;
    for (int j = 1; j <= n0 - 1; ++j)
        zc[j + 1] = -h[j - 1];
    Series<T> Z = Series<T>::make(aux, 1, 0, zc, n0 + 1);
    Series<T> t_of_sigma = Series<T>::monomial(aux, 1, 1, one) * inverse(Z);
    Series<T> sigma = revert(t_of_sigma);
    Series<T> ellinf = pow(sigma, Rational(-n0));
    ellinf.center = Center::at_infinity();
    RatFunc<T> ell = truncate_infinity_nonneg(ellinf);

    int off = n0 - 1;
    for (int k = 1; k <= spec.m(); ++k) {
        const int n = spec.n[k - 1];
        const T& phi = h[off];
        if (base_is_zero(h[off + 1]))
            throw MathError("h_{" + std::to_string(k) + ",1} vanishes: degenerate pole at phi_" + std::to_string(k));
        /* z - phi = sum_r h_{k,r} w^r + O(w^{n+1}),  w^{-n} = ell */
        std::vector<T> tc(n);
        for (int r = 1; r <= n; ++r)
            tc[r - 1] = h[off + r];
        Series<T> W = Series<T>::make(aux, 1, 1, tc, n + 1);
        Series<T> w = revert(W);
        Series<T> lp = pow(w, Rational(-n));
        Rational base = base_value(phi);
        if (ell.parts.count(base))
            throw MathError("poles phi_k collide at " + to_string(base));
        T c = phi - T(base);
        const int D = nilpotency(phi);
        std::vector<T> pp(n + D, T(Rational(0)));
        std::vector<T> cpow(D + 1, one);
        for (int m = 1; m <= D; ++m)
            cpow[m] = cpow[m - 1] * c;
        /* (t - c)^(-i) = sum_m binom(i+m-1, m) c^m t^(-i-m) at the base location */
        for (int i = 1; i <= n; ++i) {
            T b = lp.coeff(-i);
            for (int m = 0; m <= D; ++m)
                pp[i + m - 1] += b * cpow[m] * T(binom(Rational(i + m - 1), m));
        }
        ell.parts[base] = pp;
        off += n + 1;
    }
    ell.canonicalize();
    return ell;
}

template RatFunc<Rational> superpotential_from_flat(const ManifoldSpecM&, const std::vector<Rational>&);
template RatFunc<Jet> superpotential_from_flat(const ManifoldSpecM&, const std::vector<Jet>&);
template RatFunc<MPoly> superpotential_from_flat(const ManifoldSpecM&, const std::vector<MPoly>&);

PointM make_point(const ManifoldSpecM& spec, std::vector<Rational> flat)
{
    PointM p;
    p.spec = spec;
    p.ell = superpotential_from_flat(spec, flat);
    p.flat = std::move(flat);
    p.dell = p.ell.derivative();
    int off = spec.n0 - 1;
    std::set<Rational> seen;
    for (int k = 1; k <= spec.m(); ++k) {
        p.phi.push_back(p.flat[off]);
        p.beta.push_back(p.flat[off + 1]);
        off += spec.n[k - 1] + 1;
    }
    p.tangents = tangent_table(p);
    return p;
}

std::vector<Rational> flat_from_superpotential(const ManifoldSpecM& spec, const RatFunc<Rational>& ell,
                                               const std::vector<Rational>& pole_order,
                                               const std::vector<std::optional<Rational>>& branches)
{
    spec.validate();
    const int n0 = spec.n0;
    const auto& pc = ell.poly;
    if (pc.degree() != n0 || pc.coeff(n0) != 1)
        throw MathError("superpotential must be monic of degree n0 = " + std::to_string(n0));
    if (n0 >= 2 && sgn(pc.coeff(n0 - 1)) != 0)
        throw MathError("coefficient of z^(n0-1) must vanish");
    if (n0 == 1 && sgn(pc.coeff(0)) != 0)
        throw MathError("for n0 = 1 the polynomial part must be exactly z");
    if (static_cast<int>(ell.parts.size()) != spec.m())
        throw MathError("superpotential has " + std::to_string(ell.parts.size()) + " poles, spec expects " +
                        std::to_string(spec.m()));
    std::vector<Rational> poles;
    if (pole_order.empty()) {
        for (auto& [phi, v] : ell.parts)
            poles.push_back(phi);
    } else {
        if (static_cast<int>(pole_order.size()) != spec.m())
            throw SchemaError("pole_order must list every pole once");
        poles = pole_order;
        for (auto& phi : poles)
            if (!ell.parts.count(phi))
                throw SchemaError("pole_order lists " + to_string(phi) + ", which is not a pole");
        if (std::set<Rational>(poles.begin(), poles.end()).size() != poles.size())
            throw SchemaError("pole_order repeats a pole");
    }
    if (!branches.empty() && static_cast<int>(branches.size()) != spec.m())
        throw SchemaError("branches must have one entry per pole");

    std::vector<Rational> h;
    {
        /* sigma = ell^(-1/n0) in t = 1/z; invert to z(sigma) */
        Center inf = Center::at_infinity();
        Series<Rational> S = expand(ell, inf, n0 + 6);
        Series<Rational> sigma = inverse(nth_root(S, n0));
        Series<Rational> t_of_sigma = revert(sigma);
        Series<Rational> z = inverse(t_of_sigma);
        if (z.hi < n0)
            throw WindowError("window too small for the polynomial block");
        for (int j = 1; j <= n0 - 1; ++j)
            h.push_back(-z.coeff(j));
    }
    for (int k = 1; k <= spec.m(); ++k) {
        const Rational& phi = poles[k - 1];
        const int n = spec.n[k - 1];
        if (ell.pole_order(phi) != n)
            throw MathError("pole at " + to_string(phi) + " has order " + std::to_string(ell.pole_order(phi)) +
                            ", spec expects " + std::to_string(n));
        Center c = Center::at(phi);
        Series<Rational> S = expand(ell, c, n + 4);
        Rational top = S.coeff(-n);
        Rational beta;
        if (!branches.empty() && branches[k - 1]) {
            beta = *branches[k - 1];
            if (rational_pow(beta, n) != top)
                throw MathError("branch " + to_string(beta) + " is not an n_k-th root of " + to_string(top));
        } else {
            auto r = rational_root(top, n);
            if (!r)
                throw MathError("top coefficient " + to_string(top) + " at " + to_string(phi) +
                                " has no rational root of order " + std::to_string(n));
            beta = *r;
        }
        /* w = ell^(-1/n) near phi; (z - phi)(w) = sum_r h_{k,r} w^r */
        Series<Rational> w = pow(S, frac(-1, n), Branch{beta, n});
        Series<Rational> t_of_w = revert(w);
        if (t_of_w.hi <= n)
            throw WindowError("window too small at pole " + to_string(phi));
        h.push_back(phi);
        for (int r = 1; r <= n; ++r)
            h.push_back(t_of_w.coeff(r));
    }
    return h;
}

std::vector<RatFunc<Rational>> tangent_table(const PointM& p)
{
    const auto& spec = p.spec;
    std::vector<RatFunc<Rational>> out;
    for (auto& l : flat_labels(spec)) {
        if (l.k == 0) {
            out.push_back(with_window(spec.n0 + 4, [&](int P) {
                Center inf = Center::at_infinity();
                Series<Rational> s = expand(p.dell, inf, P) * pow(expand(p.ell, inf, P), frac(-l.r, spec.n0));
                return truncate_infinity_nonneg(s);
            }));
        } else {
            const int n = spec.n[l.k - 1];
            Center c = Center::at(p.phi[l.k - 1]);
            Branch br{p.beta[l.k - 1], n};
            out.push_back(with_window(n + 4, [&](int P) {
                Series<Rational> s = expand(p.dell, c, P) * pow(expand(p.ell, c, P), frac(-l.r, n), br);
                return -truncate_pole_neg(s);
            }));
        }
    }
    return out;
}

std::vector<Jet> jet_point(const std::vector<Rational>& flat, int order)
{
    std::vector<Jet> h;
    const int n = static_cast<int>(flat.size());
    for (int i = 0; i < n; ++i)
        h.push_back(Jet::variable(n, order, i, flat[i]));
    return h;
}

std::vector<Jet> jet_point_along(const std::vector<Rational>& flat, const std::vector<Rational>& dir, int order)
{
    if (dir.size() != flat.size())
        throw SchemaError("direction has the wrong number of components");
    std::vector<Jet> h;
    for (size_t i = 0; i < flat.size(); ++i)
        h.push_back(Jet::constant(1, order, flat[i]) + Jet::variable(1, order, 0, Rational(0)) * Jet(dir[i]));
    return h;
}

std::vector<RatFunc<Rational>> tangent_table_jets(const ManifoldSpecM& spec, const std::vector<Rational>& flat)
{
    RatFunc<Jet> lj = superpotential_from_flat(spec, jet_point(flat, 1));
    std::vector<RatFunc<Rational>> out;
    for (int a = 0; a < spec.dim(); ++a)
        out.push_back(map_coeffs<Rational>(lj, [a](const Jet& j) { return j.grad(a); }));
    return out;
}

RatFunc<Rational> tangent_ell(const PointM& p, const TangentM& X)
{
    if (static_cast<int>(X.size()) != p.dim())
        throw SchemaError("tangent vector has the wrong number of components");
    RatFunc<Rational> r;
    for (int a = 0; a < p.dim(); ++a)
        if (sgn(X[a]))
            r += p.tangents[a] * X[a];
    return r;
}

template <class T>
static int valuation_at(const RatFunc<T>& f, Center c)
{
    return c.infinity ? f.valuation_infinity() : -f.pole_order(c.point);
}

template <class T>
Series<T> quotient_series(const RatFunc<T>& num, const RatFunc<T>& den, Center c, int need)
{
    int extra = 2 * (std::abs(valuation_at(num, c)) + std::abs(valuation_at(den, c))) + 6;
    for (int attempt = 0;; ++attempt) {
        try {
            int P = need + extra;
            Series<T> q = expand(num, c, P) * inverse(expand(den, c, P));
            if (q.hi >= need)
                return q;
        } catch (const WindowError&) {
            if (attempt >= 6)
                throw;
        }
        if (attempt >= 6)
            throw WindowError("quotient window could not be established at " + c.str());
        extra = 2 * extra + 4;
    }
}

template <class T>
T residue_form(const std::vector<Center>& centers, const RatFunc<T>& num, const RatFunc<T>& den)
{
    T acc = T(Rational(0));
    if (num.is_zero())
        return acc;
    for (auto& c : centers) {
        if (c.infinity) {
            /* -Res_inf = coefficient of t^1 = 1/z */
            acc += quotient_series(num, den, c, 2).coeff(1);
        } else {
            acc -= quotient_series(num, den, c, 0).coeff(-1);
        }
    }
    return acc;
}

template <class T>
RatFunc<T> split_truncation(const std::vector<Center>& centers, const RatFunc<T>& num, const RatFunc<T>& den)
{
    RatFunc<T> r;
    if (num.is_zero())
        return r;
    for (auto& c : centers) {
        if (c.infinity)
            r += truncate_infinity_nonneg(quotient_series(num, den, c, 1));
        else
            r += truncate_pole_neg(quotient_series(num, den, c, 0));
    }
    return r;
}

template Series<Rational> quotient_series(const RatFunc<Rational>&, const RatFunc<Rational>&, Center, int);
template Series<Jet> quotient_series(const RatFunc<Jet>&, const RatFunc<Jet>&, Center, int);
template Series<MPoly> quotient_series(const RatFunc<MPoly>&, const RatFunc<MPoly>&, Center, int);
template Rational residue_form(const std::vector<Center>&, const RatFunc<Rational>&, const RatFunc<Rational>&);
template Jet residue_form(const std::vector<Center>&, const RatFunc<Jet>&, const RatFunc<Jet>&);
template RatFunc<Rational> split_truncation(const std::vector<Center>&, const RatFunc<Rational>&,
                                            const RatFunc<Rational>&);
template RatFunc<Jet> split_truncation(const std::vector<Center>&, const RatFunc<Jet>&, const RatFunc<Jet>&);
template RatFunc<MPoly> split_truncation(const std::vector<Center>&, const RatFunc<MPoly>&, const RatFunc<MPoly>&);

Rational metric_pair_ell(const PointM& p, const RatFunc<Rational>& dX, const RatFunc<Rational>& dY)
{
    return residue_form(p.centers(), dX * dY, p.dell);
}

Rational metric_pair(const PointM& p, const TangentM& X, const TangentM& Y)
{
    return metric_pair_ell(p, tangent_ell(p, X), tangent_ell(p, Y));
}

std::vector<std::vector<Rational>> metric_matrix(const PointM& p)
{
    const int d = p.dim();
    std::vector<std::vector<Rational>> g(d, std::vector<Rational>(d));
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            g[a][b] = g[b][a] = metric_pair_ell(p, p.tangents[a], p.tangents[b]);
    return g;
}

Rational triple_c(const PointM& p, const TangentM& X, const TangentM& Y, const TangentM& Z)
{
    return residue_form(p.centers(), tangent_ell(p, X) * tangent_ell(p, Y) * tangent_ell(p, Z), p.dell);
}

StructureConstants structure_constants(const PointM& p, Exec ex)
{
    const int d = p.dim();
    std::vector<std::array<int, 3>> triples;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            for (int c = b; c < d; ++c)
                triples.push_back({a, b, c});
    std::vector<Rational> val(triples.size());
    auto centers = p.centers();
    for_each_index(ex, static_cast<long>(triples.size()), [&](long i) {
        auto [a, b, c] = triples[i];
        val[i] = residue_form(centers, p.tangents[a] * p.tangents[b] * p.tangents[c], p.dell);
    });
    std::vector<Rational> c3(static_cast<size_t>(d) * d * d);
    for (size_t i = 0; i < triples.size(); ++i) {
        auto [a, b, c] = triples[i];
        int idx[3] = {a, b, c};
        std::sort(idx, idx + 3);
        do {
            c3[(static_cast<size_t>(idx[0]) * d + idx[1]) * d + idx[2]] = val[i];
        } while (std::next_permutation(idx, idx + 3));
    }
    StructureConstants sc;
    sc.dim = d;
    sc.c.assign(static_cast<size_t>(d) * d * d, Rational(0));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int e = 0; e < d; ++e) {
                int g = dual_index(p.spec, e);
                sc.at(a, b, e) = c3[(static_cast<size_t>(a) * d + b) * d + g] / metric_constant(p.spec, e);
            }
    return sc;
}

TangentM multiply(const StructureConstants& c, const TangentM& X, const TangentM& Y)
{
    TangentM r(c.dim, Rational(0));
    for (int a = 0; a < c.dim; ++a) {
        if (sgn(X[a]) == 0)
            continue;
        for (int b = 0; b < c.dim; ++b) {
            if (sgn(Y[b]) == 0)
                continue;
            Rational xy = X[a] * Y[b];
            for (int e = 0; e < c.dim; ++e)
                r[e] += xy * c.at(a, b, e);
        }
    }
    return r;
}

TangentM multiply(const PointM& p, const TangentM& X, const TangentM& Y)
{
    return multiply(structure_constants(p), X, Y);
}

TangentM basis_vector(int dim, int alpha)
{
    TangentM v(dim, Rational(0));
    v.at(alpha) = 1;
    return v;
}

TangentM unit(const ManifoldSpecM& spec)
{
    TangentM e(spec.dim(), Rational(0));
    if (spec.n0 >= 2) {
        e[label_index(spec, {0, spec.n0 - 1})] = frac(1, spec.n0);
    } else {
        for (int k = 1; k <= spec.m(); ++k)
            e[label_index(spec, {k, 0})] = 1;
    }
    return e;
}

std::optional<TangentM> decompose_tangent(const PointM& p, const RatFunc<Rational>& dl)
{
    const int d = p.dim();
    TangentM th(d);
    for (int a = 0; a < d; ++a)
        th[a] = metric_pair_ell(p, p.tangents[dual_index(p.spec, a)], dl) / metric_constant(p.spec, a);
    if (tangent_ell(p, th) != dl)
        return std::nullopt;
    return th;
}

FlatnessReport check_flat_connection(const PointM& p, Exec ex)
{
    const int d = p.dim();
    RatFunc<Jet> l2 = superpotential_from_flat(p.spec, jet_point(p.flat, 2));
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b)
            pairs.push_back({a, b});
    std::vector<RatFunc<Rational>> res(pairs.size());
    auto centers = p.centers();
    for_each_index(ex, static_cast<long>(pairs.size()), [&](long i) {
        auto [a, b] = pairs[i];
        RatFunc<Rational> lhs = map_coeffs<Rational>(l2, [a = a, b = b](const Jet& j) { return j.second(a, b); });
        RatFunc<Rational> rhs = split_truncation(centers, p.tangents[a] * p.tangents[b], p.dell).derivative();
        res[i] = lhs - rhs;
    });
    FlatnessReport rep;
    rep.pairs_checked = static_cast<int>(pairs.size());
    for (size_t i = 0; i < pairs.size(); ++i)
        if (!res[i].is_zero())
            rep.failures.push_back({pairs[i].first, pairs[i].second, res[i]});
    return rep;
}

AxiomReport check_metric_constants(const PointM& p)
{
    AxiomReport rep;
    auto eta = metric_matrix(p);
    auto labels = flat_labels(p.spec);
    for (int a = 0; a < p.dim(); ++a)
        for (int b = 0; b < p.dim(); ++b) {
            ++rep.checked;
            Rational want = b == dual_index(p.spec, a) ? Rational(metric_constant(p.spec, a)) : Rational(0);
            if (eta[a][b] != want)
                rep.failures.push_back("eta(" + label_name(labels[a]) + ", " + label_name(labels[b]) +
                                       ") = " + to_string(eta[a][b]) + ", expected " + to_string(want));
        }
    return rep;
}

AxiomReport check_algebra(const PointM& p, const StructureConstants& c, Exec ex)
{
    AxiomReport rep;
    const int d = p.dim();
    auto labels = flat_labels(p.spec);
    auto eta = metric_matrix(p);
    auto pair = [&](const TangentM& x, const TangentM& y) {
        Rational acc(0);
        for (int i = 0; i < d; ++i)
            if (!is_zero(x[i]))
                for (int j = 0; j < d; ++j)
                    acc += x[i] * eta[i][j] * y[j];
        return acc;
    };
    auto name = [&](int a) { return label_name(labels[a]); };
    TangentM e = unit(p.spec);
    for (int a = 0; a < d; ++a) {
        rep.checked += 1 + d;
        auto A = basis_vector(d, a);
        if (multiply(c, e, A) != A)
            rep.failures.push_back("unit: e o " + name(a) + " != " + name(a));
        for (int b = 0; b < d; ++b)
            if (multiply(c, A, basis_vector(d, b)) != multiply(c, basis_vector(d, b), A))
                rep.failures.push_back("commutativity: (" + name(a) + ", " + name(b) + ")");
    }
    std::vector<std::string> errs(static_cast<size_t>(d) * d);
    for_each_index(ex, static_cast<long>(d) * d, [&](long i) {
        int a = static_cast<int>(i / d), b = static_cast<int>(i % d);
        auto A = basis_vector(d, a), B = basis_vector(d, b);
        auto AB = multiply(c, A, B);
        for (int k = 0; k < d; ++k) {
            auto C = basis_vector(d, k);
            auto BC = multiply(c, B, C);
            if (multiply(c, AB, C) != multiply(c, A, BC))
                errs[i] += "associativity: (" + name(a) + ", " + name(b) + ", " + name(k) + "); ";
            if (pair(AB, C) != pair(A, BC))
                errs[i] += "invariance: (" + name(a) + ", " + name(b) + ", " + name(k) + "); ";
        }
    });
    rep.checked += 2L * d * d * d;
    for (auto& s : errs)
        if (!s.empty())
            rep.failures.push_back(s.substr(0, s.size() - 2));
    return rep;
}

}  // namespace owdvv
