#include "owdvv/hierarchy.hpp"

#include "owdvv/mpoly.hpp"

#include <sstream>

namespace owdvv {

std::string FlowIndex::name() const
{
    return (s_family ? std::string("s") : u.name()) + ";" + std::to_string(p);
}

FlowIndex parse_flow_index(const std::string& u, int p)
{
    if (u == "s")
        return FlowIndex::s(p);
    return {false, parse_calm_tag(u), p};
}

std::string variant_name(Variant v) { return v == Variant::Ext ? "ext" : "int"; }

Variant parse_variant(const std::string& s)
{
    if (s == "ext")
        return Variant::Ext;
    if (s == "int")
        return Variant::Int;
    throw SchemaError("variant must be ext or int, got '" + s + "'");
}

std::string Piece::str() const
{
    std::ostringstream os;
    os << to_string(coef) << "*";
    switch (kind) {
    case PieceKind::EllPow:
        os << "ell^" << p;
        break;
    case PieceKind::PowInf:
        os << "a^(" << to_string(q) << ")";
        break;
    case PieceKind::PowPhi:
        os << "ahat^(" << to_string(q) << ")@phi" << k + 1;
        break;
    case PieceKind::LogRatioInf:
        os << "a^" << p << "*log(a^(1/n0)/(z-phi" << k + 1 << "))";
        break;
    case PieceKind::LogProdPhi:
        os << "ahat^" << p << "*log(ahat^(1/n" << k + 1 << ")*(z-phi" << k + 1 << "))";
        break;
    case PieceKind::LogLin:
        os << "ell^" << p << "*log(z-phi" << k + 1 << ")";
        break;
    case PieceKind::ZetaPow:
        os << "zeta^" << l << "*(a^" << p << "-ahat^" << p << ")";
        break;
    }
    if (mask >= 0)
        os << "*1_" << mask + 1;
    return os.str();
}

namespace {

/* 1 / prod_{i=0}^{p} (1 + i - x); 1 for p = -1 */
Rational gamma_ratio(int p, const Rational& x)
{
    Rational r(1);
    for (int i = 0; i <= p; ++i)
        r /= Rational(1 + i) - x;
    return r;
}

Piece piece(PieceKind kind, const Rational& coef, int mask = -1)
{
    Piece pc;
    pc.kind = kind;
    pc.coef = coef;
    pc.mask = mask;
    return pc;
}

bool is_log_flow(const std::vector<int>& n, const FlowIndex& idx)
{
    return !idx.s_family && !idx.u.is_t && idx.u.h.k >= 1 && idx.u.h.k <= static_cast<int>(n.size()) &&
           idx.u.h.r == n[idx.u.h.k - 1];
}

}  // namespace

GeneratorQ q_generator(int n0, const std::vector<int>& n, const FlowIndex& idx)
{
    GeneratorQ g;
    g.idx = idx;
    const int p = idx.p;
    if (p < -1)
        throw SchemaError("flow index p must be >= -1 for the generator ledger");
    if (idx.s_family)
        return g;
    const int m = static_cast<int>(n.size());
    if (idx.u.is_t) {
        const int i = idx.u.i, l = idx.u.s;
        if (i < 1 || i > m)
            throw SchemaError("t-flow disk index out of range");
        if (l < 0)
            throw MathError("t_{i,l} flows with l < 0 are available in audit mode only");
        if (p >= 0) {
            Piece pc = piece(PieceKind::ZetaPow, 1 / (Rational(l + 1) * factorial(p + 1)), i - 1);
            pc.l = l;
            pc.p = p + 1;
            g.q.push_back(pc);
        }
        return g;
    }
    const int k = idx.u.h.k, r = idx.u.h.r;
    if (k == 0) {
        if (r < 1 || r > n0 - 1)
            throw SchemaError("h_{0,j} needs 1 <= j <= n0 - 1");
        Rational x = frac(r, n0);
        Piece pc = piece(PieceKind::PowInf, gamma_ratio(p, x));
        pc.q = Rational(1 + p) - x;
        g.q.push_back(pc);
        g.qext.push_back(pc);
        return g;
    }
    if (k > m || r < 0 || r > n[k - 1])
        throw SchemaError("flat label " + label_name(idx.u.h) + " does not exist for this spec");
    const int nk = n[k - 1], kk = k - 1;
    if (r != nk) {
        Rational x = frac(r, nk);
        Piece pc = piece(PieceKind::PowPhi, gamma_ratio(p, x), kk);
        pc.q = Rational(1 + p) - x;
        pc.k = kk;
        g.q.push_back(pc);
        Piece neg = pc;
        neg.coef = -neg.coef;
        g.qint.push_back(neg);
        return g;
    }
    if (p == -1) {
        Piece ph = piece(PieceKind::PowPhi, Rational(1), kk);
        ph.q = -1;
        ph.k = kk;
        Piece pi = piece(PieceKind::PowInf, frac(nk, n0));
        pi.q = -1;
        g.q = {ph, pi};
        g.qext = {pi};
        ph.coef = -1;
        g.qint = {ph};
        return g;
    }
    const Rational c = Rational(nk) / factorial(p), cp = harmonic(p);
    auto mk = [&](PieceKind kind, const Rational& coef, int mask) {
        Piece pc = piece(kind, coef, mask);
        pc.p = p;
        pc.k = kk;
        return pc;
    };
    g.q.push_back(mk(PieceKind::LogProdPhi, c, kk));
    g.q.push_back(mk(PieceKind::EllPow, -c * cp / nk, kk));
    g.q.push_back(mk(PieceKind::LogRatioInf, c, -1));
    g.q.push_back(mk(PieceKind::EllPow, -c * cp / n0, -1));
    for (int j = 0; j < m; ++j)
        if (j != kk)
            g.q.push_back(mk(PieceKind::LogLin, c, j));
    g.qext = {mk(PieceKind::LogRatioInf, c, -1), mk(PieceKind::LogLin, c, -1), mk(PieceKind::EllPow, -c * cp / n0, -1)};
    g.qint = {mk(PieceKind::LogProdPhi, -c, kk), mk(PieceKind::LogLin, c, kk), mk(PieceKind::EllPow, c * cp / nk, kk)};
    return g;
}

namespace {

/*
 * Evaluation data: a and one ahat germ per pole, the poles (possibly moving
 * with jets) and their base values.  cfg == nullptr means the point of M,
 * where every masked projection is the principal part at the marked pole.
 */
template <class T>
struct Ctx {
    int n0 = 1;
    std::vector<int> n;
    RatFunc<T> A;
    std::vector<RatFunc<T>> Ahat;
    std::vector<T> phi;
    std::vector<Rational> phi0, beta0;
    const DiskConfig* cfg = nullptr;

    const RatFunc<T>& ahat(int d) const { return Ahat.empty() ? A : Ahat.at(d); }
    const RatFunc<T>& base_fn(int mask) const { return mask < 0 ? A : ahat(mask); }
    Branch branch(int k) const { return Branch{beta0.at(k), n.at(k)}; }

    int owner(const Rational& x) const
    {
        if (cfg)
            return cfg->locate(x);
        for (size_t k = 0; k < phi0.size(); ++k)
            if (phi0[k] == x)
                return static_cast<int>(k);
        return -1;
    }
    RatFunc<T> minus(const RatFunc<T>& f, int mask) const
    {
        RatFunc<T> r;
        for (auto& [x, v] : f.parts) {
            int j = owner(x);
            if (j >= 0 && (mask < 0 || j == mask))
                r += f.principal_part(x);
        }
        return r;
    }
};

template <class T>
struct Val {
    LogRatFunc<T> f;
    std::map<std::string, Rational> sym;

    void add(const Val& o, const Rational& c)
    {
        f += o.f * T(c);
        for (auto& [k, v] : o.sym) {
            Rational& s = sym[k];
            s += v * c;
            if (sgn(s) == 0)
                sym.erase(k);
        }
    }
};

std::string sym_key(const Piece& pc)
{
    Piece k = pc;
    k.coef = 1;
    k.mask = -1;
    return k.str();
}

template <class T>
Series<T> linear_series(const Ctx<T>& x, int k, Center c, int H)
{
    return expand(RatFunc<T>::linear(x.phi.at(k)), c, H);
}

template <class T>
LogSeries<T> piece_series(const Ctx<T>& x, const Piece& pc, Center c, int H)
{
    const RatFunc<T>& F = x.base_fn(pc.mask);
    switch (pc.kind) {
    case PieceKind::EllPow:
        return LogSeries<T>::from(expand(pow(F, pc.p), c, H));
    case PieceKind::PowInf:
        return LogSeries<T>::from(pow(expand(x.A, c, H), pc.q));
    case PieceKind::PowPhi:
        return LogSeries<T>::from(pow(expand(x.ahat(pc.k), c, H), pc.q, x.branch(pc.k)));
    case PieceKind::LogRatioInf: {
        Series<T> arg = pow(expand(x.A, c, H), frac(1, x.n0)) * inverse(linear_series(x, pc.k, c, H));
        return log(arg) * expand(pow(x.A, pc.p), c, H);
    }
    case PieceKind::LogProdPhi: {
        const RatFunc<T>& Ah = x.ahat(pc.k);
        Series<T> arg = pow(expand(Ah, c, H), frac(1, x.n.at(pc.k)), x.branch(pc.k)) * linear_series(x, pc.k, c, H);
        return log(arg) * expand(pow(Ah, pc.p), c, H);
    }
    case PieceKind::LogLin:
        return log(linear_series(x, pc.k, c, H)) * expand(pow(F, pc.p), c, H);
    case PieceKind::ZetaPow:
        break;
    }
    throw MathError("piece has no series form");
}

template <class T>
Center anchor(const Ctx<T>& x, const Piece& pc)
{
    switch (pc.kind) {
    case PieceKind::PowInf:
    case PieceKind::LogRatioInf:
        return Center::at_infinity();
    case PieceKind::PowPhi:
    case PieceKind::LogProdPhi:
        return Center::at(x.phi0.at(pc.k));
    default:
        if (pc.mask < 0)
            throw MathError("unmasked rational piece has no single anchor");
        return Center::at(x.phi0.at(pc.mask));
    }
}

template <class T>
LogRatFunc<T> trunc_at(const Ctx<T>& x, const Piece& pc, Center c)
{
    return with_window(12, [&](int H) { return truncate(piece_series(x, pc, c, H)); });
}

template <class T>
RatFunc<T> zeta_pow(const Ctx<T>& x, const Piece& pc)
{
    const RatFunc<T>& Ah = x.ahat(pc.mask);
    return pow(x.A - Ah, pc.l) * (pow(x.A, pc.p) - pow(Ah, pc.p));
}

/* F log(z - phi_k) with a moving phi_k expanded about its base value. */
template <class T>
LogRatFunc<T> loglin_full(const Ctx<T>& x, const Piece& pc)
{
    RatFunc<T> F = pow(x.base_fn(pc.mask), pc.p);
    const Rational& b = x.phi0.at(pc.k);
    LogRatFunc<T> r;
    r.slog[b] = F;
    T delta = x.phi.at(pc.k) - T(b), dp = T(Rational(1));
    for (int i = 1; i <= nilpotency(x.phi.at(pc.k)); ++i) {
        dp = dp * delta;
        r.rational += F * RatFunc<T>::pole(b, i, dp * T(frac(-1, i)));
    }
    r.canonicalize();
    return r;
}

template <class T>
Val<T> full(const Ctx<T>& x, const Piece& pc, int d)
{
    Val<T> v;
    if (pc.mask >= 0 && pc.mask != d)
        return v;
    switch (pc.kind) {
    case PieceKind::EllPow:
        v.f = LogRatFunc<T>(pow(x.base_fn(pc.mask), pc.p));
        break;
    case PieceKind::LogLin:
        v.f = loglin_full(x, pc);
        break;
    case PieceKind::ZetaPow:
        v.f = LogRatFunc<T>(zeta_pow(x, pc));
        break;
    default:
        v.sym[sym_key(pc)] = 1;
    }
    return v;
}

template <class T>
Val<T> minus(const Ctx<T>& x, const Piece& pc)
{
    Val<T> v;
    switch (pc.kind) {
    case PieceKind::EllPow:
        v.f = LogRatFunc<T>(x.minus(pow(x.base_fn(pc.mask), pc.p), pc.mask));
        break;
    case PieceKind::ZetaPow:
        v.f = LogRatFunc<T>(x.minus(zeta_pow(x, pc), pc.mask));
        break;
    case PieceKind::LogLin:
        if (pc.mask < 0)
            throw MathError("projection of an unmasked log(z - phi) term");
        v.f = trunc_at(x, pc, anchor(x, pc));
        break;
    case PieceKind::PowInf:
    case PieceKind::LogRatioInf:
        v.sym[sym_key(pc)] = 1;
        v.f = -trunc_at(x, pc, anchor(x, pc));
        break;
    case PieceKind::PowPhi:
    case PieceKind::LogProdPhi:
        v.f = trunc_at(x, pc, anchor(x, pc));
        break;
    }
    return v;
}

template <class T>
Val<T> plus(const Ctx<T>& x, const Piece& pc, int d)
{
    if (pc.kind == PieceKind::PowInf || pc.kind == PieceKind::LogRatioInf)
        return Val<T>{trunc_at(x, pc, anchor(x, pc)), {}};
    Val<T> v = full(x, pc, d);
    v.add(minus(x, pc), Rational(-1));
    return v;
}

template <class T>
LogRatFunc<T> generator(const Ctx<T>& x, const FlowIndex& idx, Variant var, int d)
{
    if (var == Variant::Int && !x.phi0.empty() && (d < 0 || d >= static_cast<int>(x.phi0.size())))
        throw SchemaError("disk index out of range for the int variant");
    if (idx.s_family) {
        if (idx.p < -1)
            throw SchemaError("s-family index must be >= -1");
        const RatFunc<T>& F = var == Variant::Ext ? x.A : x.ahat(d);
        return LogRatFunc<T>(pow(F, idx.p + 1) * T(1 / factorial(idx.p + 1)));
    }
    GeneratorQ g = q_generator(x.n0, x.n, idx);
    Val<T> G;
    if (var == Variant::Ext) {
        for (auto& pc : g.q)
            G.add(minus(x, pc), -pc.coef);
        for (auto& pc : g.qext)
            G.add(full(x, pc, -1), pc.coef);
    } else {
        for (auto& pc : g.q)
            G.add(plus(x, pc, d), pc.coef);
        for (auto& pc : g.qint)
            G.add(full(x, pc, d), pc.coef);
    }
    if (!G.sym.empty()) {
        std::string s;
        for (auto& [k, v] : G.sym)
            s += " " + to_string(v) + "*[" + k + "]";
        throw MathError("non-rational channel survives in the generator of " + idx.name() + ":" + s);
    }
    return G.f;
}

Ctx<Rational> ctx_m(const PointM& pt)
{
    Ctx<Rational> x;
    x.n0 = pt.spec.n0;
    x.n = pt.spec.n;
    x.A = pt.ell;
    x.phi = pt.phi;
    x.phi0 = pt.phi;
    x.beta0 = pt.beta;
    return x;
}

Ctx<Jet> ctx_m_jet(const PointM& pt, const std::vector<Jet>& h)
{
    Ctx<Jet> x;
    x.n0 = pt.spec.n0;
    x.n = pt.spec.n;
    x.A = superpotential_from_flat(pt.spec, h);
    int off = pt.spec.n0 - 1;
    for (int k = 0; k < pt.spec.m(); ++k) {
        x.phi.push_back(h[off]);
        off += pt.spec.n[k] + 1;
    }
    x.phi0 = pt.phi;
    x.beta0 = pt.beta;
    return x;
}

LogRatFunc<Rational> jet_base(const LogRatFunc<Jet>& f)
{
    return map_coeffs<Rational>(f, [](const Jet& j) { return j.base(); });
}

LogRatFunc<Rational> jet_grad(const LogRatFunc<Jet>& f, int i)
{
    return map_coeffs<Rational>(f, [i](const Jet& j) { return j.grad(i); });
}

LogRatFunc<Rational> scale(const LogScalar& c, const RatFunc<Rational>& f)
{
    LogRatFunc<Rational> r(f * c.value);
    for (auto& [arg, v] : c.logs)
        r.clog[arg] += f * v;
    r.canonicalize();
    return r;
}

/* Flat components of an ell-representative, decomposed channel by channel. */
std::vector<LogScalar> decompose_channels(const PointM& pt, const LogRatFunc<Rational>& L, const std::string& what)
{
    if (!L.slog.empty())
        throw MathError(what + ": log(z - phi) survives in the ell-representative");
    auto dec = [&](const RatFunc<Rational>& f) {
        auto t = decompose_tangent(pt, f);
        if (!t)
            throw MathError(what + ": ell-representative is not a tangent of M");
        return *t;
    };
    TangentM v = dec(L.rational);
    std::vector<LogScalar> out(v.begin(), v.end());
    for (auto& [c, f] : L.clog) {
        TangentM w = dec(f);
        for (size_t i = 0; i < w.size(); ++i)
            out[i].add_log(c, w[i]);
    }
    return out;
}

std::vector<LogScalar> theta_from(const PointM& pt, const LogRatFunc<Rational>& Gp, const LogRatFunc<Rational>& Gm,
                                  const std::string& what)
{
    return decompose_channels(pt, Gp.derivative() - Gm * pt.dell, what);
}

void check_disk(const PointM& pt, Variant v, int disk)
{
    if (v == Variant::Int && pt.spec.m() > 0 && (disk < 0 || disk >= pt.spec.m()))
        throw SchemaError("disk index out of range for the int variant");
}

void check_flat_index(const ManifoldSpecM& spec, const FlowIndex& idx)
{
    if (idx.p < 0)
        throw SchemaError("flow index p must be >= 0");
    if (!idx.s_family && idx.u.is_t)
        throw SchemaError("t-flows live on the loop space, not on M");
    if (!idx.s_family)
        label_index(spec, idx.u.h);
}

}  // namespace

LogRatFunc<Rational> theta_s(const PointM& pt, const FlowIndex& idx, Variant v, int disk)
{
    check_flat_index(pt.spec, idx);
    check_disk(pt, v, disk);
    return generator(ctx_m(pt), idx.with_p(idx.p - 1), v, disk);
}

std::vector<LogScalar> theta_flat(const PointM& pt, const FlowIndex& idx, Variant v, int disk)
{
    check_flat_index(pt.spec, idx);
    check_disk(pt, v, disk);
    auto x = ctx_m(pt);
    auto Gp = generator(x, idx, v, disk), Gm = generator(x, idx.with_p(idx.p - 1), v, disk);
    return theta_from(pt, Gp, Gm, idx.name());
}

LogRatFunc<Rational> closed_flow_rhs(const LoopPointM& lp, const FlowIndex& idx)
{
    const PointM& pt = lp.point;
    check_flat_index(pt.spec, idx);
    if (idx.s_family)
        return {};
    auto x = ctx_m_jet(pt, jet_point_along(pt.flat, lp.ux, 1));
    LogRatFunc<Jet> G = generator(x, idx, Variant::Ext, 0);
    return jet_base(G).derivative() * tangent_ell(pt, lp.ux) - jet_grad(G, 0) * pt.dell;
}

LogRatFunc<Rational> closed_flow_product(const LoopPointM& lp, const FlowIndex& idx)
{
    const PointM& pt = lp.point;
    check_flat_index(pt.spec, idx);
    if (idx.s_family)
        return {};
    auto th = theta_flat(pt, idx, Variant::Ext, 0);
    auto c = structure_constants(pt, Exec::Serial);
    const int d = pt.dim();
    LogRatFunc<Rational> r;
    for (int e = 0; e < d; ++e) {
        LogScalar comp;
        for (int b = 0; b < d; ++b)
            for (int g = 0; g < d; ++g)
                if (sgn(c.at(b, g, e)) && sgn(lp.ux[g]))
                    comp += th[b] * (c.at(b, g, e) * lp.ux[g]);
        r += scale(comp, pt.tangents[e]);
    }
    return r;
}

OpenFlowM open_flow_rhs(const LoopPointM& lp, const FlowIndex& idx, Variant v, int disk)
{
    const PointM& pt = lp.point;
    check_flat_index(pt.spec, idx);
    check_disk(pt, v, disk);
    OpenFlowM out;
    out.base = closed_flow_rhs(lp, idx);
    auto x = ctx_m_jet(pt, jet_point_along(pt.flat, lp.ux, 1));
    LogRatFunc<Jet> G = generator(x, idx, v, disk);
    out.s = evaluate(jet_grad(G, 0), lp.s) + evaluate(jet_base(G).derivative(), lp.s) * lp.sx;
    return out;
}

LogScalar open_flow_s_product(const LoopPointM& lp, const FlowIndex& idx, Variant v, int disk)
{
    const PointM& pt = lp.point;
    auto th = theta_flat(pt, idx, v, disk);
    LogScalar Gm = evaluate(theta_s(pt, idx, v, disk), lp.s);
    SecondDerivTable t = fo_table(pt, Exec::Serial);
    const int d = pt.dim();
    LogScalar r;
    for (int a = 0; a < d; ++a) {
        if (!sgn(lp.ux[a]))
            continue;
        LogScalar row = Gm * t.ds[a].evaluate(lp.s);
        for (int b = 0; b < d; ++b)
            row += th[b] * t.at(a, b).evaluate(lp.s);
        r += row * lp.ux[a];
    }
    LogScalar col = Gm * t.ss.evaluate(lp.s);
    for (int a = 0; a < d; ++a)
        col += th[a] * t.ds[a].evaluate(lp.s);
    return r + col * lp.sx;
}

RecursionReport verify_recursion(const PointM& pt, Variant v, int p_max, Exec ex, std::vector<FlowIndex> us)
{
    if (p_max < 0)
        throw SchemaError("p_max must be >= 0");
    const int dim = pt.dim();
    const auto labels = flat_labels(pt.spec);
    if (us.empty()) {
        for (auto& l : labels)
            us.push_back(FlowIndex::flat(l, 0));
        us.push_back(FlowIndex::s(0));
    }
    for (auto& u : us)
        check_flat_index(pt.spec, u.with_p(0));
    const int ndisk = v == Variant::Int && pt.spec.m() > 0 ? pt.spec.m() : 1;
    const long ntask = static_cast<long>(us.size()) * ndisk;
    SecondDerivTable t = fo_table(pt, ex);
    const auto xj = ctx_m_jet(pt, jet_point(pt.flat, 1));
    std::vector<RecursionReport> part(ntask);

    for_each_index(ex, ntask, [&](long task) {
        const FlowIndex& u = us[task / ndisk];
        const int disk = static_cast<int>(task % ndisk);
        RecursionReport& rep = part[task];
        std::string uname = u.s_family ? "s" : u.u.name();
        if (ndisk > 1)
            uname += "@disk" + std::to_string(disk + 1);
        auto fail = [&](int p, const std::string& X, const std::string& detail) {
            rep.failures.push_back({uname, p, X, detail});
        };
        std::vector<LogRatFunc<Jet>> GJ;
        std::vector<LogRatFunc<Rational>> G;
        /* G[q + 1] = G_{u,q} = Theta_{u,q+1;s} */
        std::vector<std::vector<LogScalar>> th;
        try {
            for (int q = -1; q <= p_max; ++q) {
                GJ.push_back(generator(xj, u.with_p(q), v, disk));
                G.push_back(jet_base(GJ.back()));
            }
            for (int q = 0; q <= p_max; ++q)
                th.push_back(theta_from(pt, G[q + 1], G[q], uname));
        } catch (const MathError& e) {
            ++rep.checked;
            fail(static_cast<int>(th.size()), "-", e.what());
            return;
        }

        ++rep.checked;
        LogRatFunc<Rational> seed = u.s_family ? LogRatFunc<Rational>(RatFunc<Rational>(Rational(1))) : LogRatFunc<Rational>();
        if (!(G[0] == seed))
            fail(0, "s", "Theta_{u,0;s} differs from the initial condition");
        ++rep.checked;
        for (int a = 0; a < dim; ++a) {
            bool hit = !u.s_family && labels[a] == u.u.h;
            if (!(th[0][a] == LogScalar(Rational(hit ? 1 : 0))))
                fail(0, label_name(labels[a]), "Theta_{u,0} is not the coordinate field: " + th[0][a].str());
        }
        for (int q = 0; q <= p_max; ++q) {
            const auto& T = th[q];
            const auto& Gm = G[q];
            for (int a = 0; a < dim; ++a) {
                LogRatFunc<Rational> rhs = Gm * t.ds[a];
                for (int b = 0; b < dim; ++b)
                    rhs += scale(T[b], t.at(a, b));
                ++rep.checked;
                if (!(jet_grad(GJ[q + 1], a) == rhs))
                    fail(q, label_name(labels[a]), "s-component recursion residual is nonzero");
            }
            LogRatFunc<Rational> rhs = Gm * t.ss;
            for (int a = 0; a < dim; ++a)
                rhs += scale(T[a], t.ds[a]);
            ++rep.checked;
            if (!(G[q + 1].derivative() == rhs))
                fail(q, "s", "s-component recursion residual is nonzero");
        }
    });
    RecursionReport out;
    for (auto& r : part) {
        out.checked += r.checked;
        out.failures.insert(out.failures.end(), r.failures.begin(), r.failures.end());
    }
    return out;
}

namespace {

/* Terms of a list grouped by the center where they are expanded. */
template <class T>
LogSeries<T> group_series(const Ctx<T>& x, const std::vector<Piece>& list, Center c, int H)
{
    LogSeries<T> s = LogSeries<T>::from(Series<T>::zero(c, 1, H));
    for (auto& pc : list) {
        bool here;
        if (c.infinity)
            here = pc.mask < 0;
        else
            here = pc.mask >= 0 && x.phi0.at(pc.mask) == c.point;
        if (here)
            s = s + piece_series(x, pc, c, H) * T(pc.coef);
    }
    return s;
}

/* Explicit z-dependence of the log terms: d/dz at fixed ell. */
template <class T>
Series<T> group_explicit_dz(const Ctx<T>& x, const std::vector<Piece>& list, Center c, int H)
{
    Series<T> s = Series<T>::zero(c, 1, H);
    for (auto& pc : list) {
        bool here = c.infinity ? pc.mask < 0 : pc.mask >= 0 && x.phi0.at(pc.mask) == c.point;
        if (!here)
            continue;
        Rational sign;
        if (pc.kind == PieceKind::LogRatioInf)
            sign = -1;
        else if (pc.kind == PieceKind::LogProdPhi || pc.kind == PieceKind::LogLin)
            sign = 1;
        else
            continue;
        RatFunc<T> f = pow(x.base_fn(pc.mask), pc.p);
        s = s + expand(f, c, H) * inverse(linear_series(x, pc.k, c, H)) * T(sign * pc.coef);
    }
    return s;
}

template <class T>
bool series_vanishes(const LogSeries<T>& s)
{
    if (!s.reg.c.empty() || !s.logt.c.empty())
        return false;
    for (auto& [k, v] : s.clog)
        if (!v.c.empty())
            return false;
    return true;
}

}  // namespace

LedgerReport check_qrec(const PointM& pt, const FlowIndex& u, int p_max)
{
    check_flat_index(pt.spec, u.with_p(0));
    LedgerReport rep;
    if (u.s_family)
        return rep;
    auto x = ctx_m(pt);
    std::vector<Center> centers = pt.centers();
    for (int p = 0; p <= p_max; ++p) {
        GeneratorQ gp = q_generator(x.n0, x.n, u.with_p(p)), gm = q_generator(x.n0, x.n, u.with_p(p - 1));
        const std::pair<const std::vector<Piece>*, const std::vector<Piece>*> lists[] = {
            {&gp.q, &gm.q}, {&gp.qext, &gm.qext}, {&gp.qint, &gm.qint}};
        const char* names[] = {"Q", "Qtilde-ext", "Qtilde-int"};
        for (int li = 0; li < 3; ++li)
            for (auto& c : centers) {
                ++rep.checked;
                const int H = 16 + 4 * (p + 2) * (pt.spec.n0 + 4);
                LogSeries<Rational> sp = group_series(x, *lists[li].first, c, H);
                LogSeries<Rational> sm = group_series(x, *lists[li].second, c, H);
                LogSeries<Rational> r = d_dz(sp) - sm * expand(pt.dell, c, H) -
                                        LogSeries<Rational>::from(group_explicit_dz(x, *lists[li].first, c, H));
                int known = std::min(r.reg.hi, r.logt.hi);
                if (!series_vanishes(r) || known < 4)
                    rep.failures.push_back(std::string(names[li]) + " " + u.with_p(p).name() + " at " + c.str());
            }
    }
    return rep;
}

LedgerReport check_qrec_t(int l, int p_max)
{
    LedgerReport rep;
    const MPoly a = MPoly::variable(2, 0), ah = MPoly::variable(2, 1);
    auto mpow = [](const MPoly& b, int e) {
        MPoly r(1);
        for (int i = 0; i < e; ++i)
            r = r * b;
        return r;
    };
    auto q_of = [&](int p) {
        GeneratorQ g = q_generator(1, {1}, FlowIndex::t(1, l, p));
        MPoly r;
        for (auto& pc : g.q)
            r += mpow(a - ah, pc.l) * (mpow(a, pc.p) - mpow(ah, pc.p)) * MPoly(pc.coef);
        return r;
    };
    for (int p = 0; p <= p_max; ++p) {
        ++rep.checked;
        MPoly Qp = q_of(p);
        if (!(Qp.derivative(0) + Qp.derivative(1) == q_of(p - 1)))
            rep.failures.push_back("Q " + FlowIndex::t(1, l, p).name());
    }
    return rep;
}

namespace {

bool calm_log_flow(const PointCalM& pt, const FlowIndex& idx)
{
    return is_log_flow(pt.base.spec.n, idx);
}

void check_calm_index(const PointCalM& pt, const FlowIndex& idx)
{
    if (idx.s_family)
        return;
    if (idx.u.is_t) {
        if (idx.u.i < 1 || idx.u.i > pt.m())
            throw SchemaError("t-flow disk index out of range");
        if (pt.cfg.disks[idx.u.i - 1].d != 1)
            throw MathError("exact t-flows need winding number d_i = 1; use the audit mode");
        if (idx.u.s < 0)
            throw MathError("t_{i,l} flows with l < 0 are available in audit mode only");
        return;
    }
    label_index(pt.base.spec, idx.u.h);
}

Ctx<Rational> ctx_calm(const PointCalM& pt)
{
    Ctx<Rational> x;
    x.n0 = pt.base.spec.n0;
    x.n = pt.base.spec.n;
    x.A = pt.a;
    x.Ahat.assign(pt.m(), pt.ahat);
    x.phi = pt.base.phi;
    x.phi0 = pt.base.phi;
    x.beta0 = pt.base.beta;
    x.cfg = &pt.cfg;
    return x;
}

Ctx<Jet> ctx_calm_jet(const PointCalM& pt, const TangentCalM& X)
{
    const Jet eps = Jet::variable(1, 1, 0, Rational(0));
    Ctx<Jet> x;
    x.n0 = pt.base.spec.n0;
    x.n = pt.base.spec.n;
    x.A = lift<Jet>(pt.a) + lift<Jet>(X.xi) * eps;
    for (int k = 0; k < pt.m(); ++k)
        x.Ahat.push_back(lift<Jet>(pt.ahat) + lift<Jet>(X.xihat.germ.at(k)) * eps);
    for (auto& f : pt.base.phi)
        x.phi.push_back(Jet(f));
    x.phi0 = pt.base.phi;
    x.beta0 = pt.base.beta;
    x.cfg = &pt.cfg;
    return x;
}

/* (d_a Q_p, d_ahat Q_p) for a t-flow. */
CovectorPair t_covector(const PointCalM& pt, const FlowIndex& idx)
{
    GeneratorQ g = q_generator(pt.base.spec.n0, pt.base.spec.n, idx);
    CovectorPair w = CovectorPair::zero(pt.m());
    for (auto& pc : g.q) {
        const RatFunc<Rational>& z = pt.zeta;
        RatFunc<Rational> diff = pow(pt.a, pc.p) - pow(pt.ahat, pc.p);
        RatFunc<Rational> wa = pow(z, pc.l) * pow(pt.a, pc.p - 1) * Rational(pc.p);
        RatFunc<Rational> wh = pow(z, pc.l) * pow(pt.ahat, pc.p - 1) * Rational(-pc.p);
        if (pc.l > 0) {
            RatFunc<Rational> e = pow(z, pc.l - 1) * diff * Rational(pc.l);
            wa += e;
            wh -= e;
        }
        w.omega += ContourFunc<Rational>::masked(wa * pc.coef, pc.mask, pt.m());
        w.omegahat += ContourFunc<Rational>::masked(wh * pc.coef, pc.mask, pt.m());
    }
    return w;
}

TangentM m_tangent(const PointCalM& pt, const TangentCalM& X)
{
    auto t = decompose_tangent(pt.base, X.dell(pt.cfg));
    if (!t)
        throw MathError("u_x is not tangent to the zeta = 0 slice");
    return *t;
}

}  // namespace

LogRatFunc<Rational> theta_s(const PointCalM& pt, const FlowIndex& idx, Variant v, int disk)
{
    check_calm_index(pt, idx);
    if (idx.p < 0)
        throw SchemaError("flow index p must be >= 0");
    if (calm_log_flow(pt, idx)) {
        if (!pt.zeta_vanishes())
            throw MathError("logarithmic flows on the loop space are exact only at zeta = 0");
        return theta_s(pt.base, idx, v, disk);
    }
    return generator(ctx_calm(pt), idx.with_p(idx.p - 1), v, disk);
}

OpenFlowCalM open_flow_rhs(const LoopPointCalM& lp, const FlowIndex& idx, Variant v, int disk)
{
    const PointCalM& pt = lp.point;
    check_calm_index(pt, idx);
    if (idx.p < 0)
        throw SchemaError("flow index p must be >= 0");
    OpenFlowCalM out;
    if (calm_log_flow(pt, idx)) {
        if (!pt.zeta_vanishes())
            throw MathError("logarithmic flows on the loop space are exact only at zeta = 0");
        OpenFlowM f = open_flow_rhs(LoopPointM{pt.base, m_tangent(pt, lp.ux), lp.s, lp.sx}, idx, v, disk);
        out.xi = f.base;
        out.xihat.assign(pt.m(), f.base);
        out.s = f.s;
        return out;
    }
    auto x = ctx_calm_jet(pt, lp.ux);
    LogRatFunc<Jet> G = generator(x, idx, v, disk);
    out.s = evaluate(jet_grad(G, 0), lp.s) + evaluate(jet_base(G).derivative(), lp.s) * lp.sx;
    out.xihat.assign(pt.m(), LogRatFunc<Rational>());
    if (idx.s_family)
        return out;
    if (idx.u.is_t) {
        TangentCalM C = c_operator(pt, lp.ux, t_covector(pt, idx));
        out.xi = C.xi;
        for (int k = 0; k < pt.m(); ++k)
            out.xihat[k] = C.xihat.germ[k];
        return out;
    }
    LogRatFunc<Jet> Ge = v == Variant::Ext ? G : generator(x, idx, Variant::Ext, 0);
    if (Ge.has_logs())
        throw MathError("bracket generator carries logarithms");
    RatFunc<Rational> Gz = jet_base(Ge).rational.derivative(), Gx = jet_grad(Ge, 0).rational;
    out.xi = Gz * lp.ux.xi - pt.da * Gx;
    for (int k = 0; k < pt.m(); ++k)
        out.xihat[k] = Gz * lp.ux.xihat.germ[k] - pt.dahat * Gx;
    return out;
}

LogScalar open_flow_s_product(const LoopPointCalM& lp, const FlowIndex& idx, Variant v, int disk)
{
    const PointCalM& pt = lp.point;
    check_calm_index(pt, idx);
    if (idx.s_family || !idx.u.is_t)
        throw MathError("the table form of the s-flow is implemented for t-flows");
    if (v == Variant::Int && (disk < 0 || disk >= pt.m()))
        throw SchemaError("disk index out of range for the int variant");
    TangentCalM Th = eta_map(pt, t_covector(pt, idx));
    LogScalar Gm = evaluate(theta_s(pt, idx, v, disk), lp.s);
    auto dd = [&](const TangentCalM& X, const TangentCalM& Y) {
        return v == Variant::Ext ? omega_dd(pt, X, Y) : omegahat_dd(pt, X, Y, disk);
    };
    auto ds = [&](const TangentCalM& X) { return v == Variant::Ext ? X.xi : X.xihat.germ.at(disk); };
    const RatFunc<Rational>& ss = v == Variant::Ext ? pt.da : pt.dahat;
    LogScalar r = LogScalar(dd(lp.ux, Th).evaluate(lp.s)) + Gm * ds(lp.ux).evaluate(lp.s);
    LogScalar c = LogScalar(ds(Th).evaluate(lp.s)) + Gm * ss.evaluate(lp.s);
    return r + c * lp.sx;
}

}  // namespace owdvv
