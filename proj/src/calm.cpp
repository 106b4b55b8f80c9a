#include "owdvv/calm.hpp"

#include <cmath>
#include <numbers>

namespace owdvv {

namespace {

using RF = RatFunc<Rational>;
using CF = ContourFunc<Rational>;

RF plus_germ(const CF& f, const DiskConfig& cfg, int d)
{
    return f.germ.at(d) - minus_part(f, cfg);
}

CF plus_part(const CF& f, const DiskConfig& cfg)
{
    return f - minus_part(f, cfg);
}

std::vector<Center> phi_centers(const PointCalM& p)
{
    std::vector<Center> c;
    for (auto& x : p.base.phi)
        c.push_back(Center::at(x));
    return c;
}

const std::vector<Center> kInf{Center::at_infinity()};

}  // namespace

RatFunc<Rational> FactoredZeta::power(int s) const
{
    Poly<Rational> num = Poly<Rational>::constant(rational_pow(c, s));
    std::vector<PoleFactor> den;
    for (auto& [r, e] : roots) {
        long k = static_cast<long>(e) * s;
        if (k > 0)
            for (long i = 0; i < k; ++i)
                num = num * Poly<Rational>({-r, 1});
        else if (k < 0)
            den.push_back({r, static_cast<int>(-k)});
    }
    return from_factored(num, den);
}

RatFunc<Rational> FactoredZeta::value() const
{
    return power(1);
}

RatFunc<Rational> FactoredZeta::power_times_derivative(int s) const
{
    if (s == -1) {
        RF r;
        for (auto& [root, e] : roots)
            r += RF::pole(root, 1, Rational(e));
        return r;
    }
    return power(s + 1).derivative() * Rational(frac(1, s + 1));
}

PointCalM make_calm_point(const RatFunc<Rational>& a, const RatFunc<Rational>& ahat, const DiskConfig& cfg,
                          const std::vector<std::optional<Rational>>& branches, std::optional<FactoredZeta> factored)
{
    cfg.validate();
    const int m = cfg.size();
    if (m < 1)
        throw MathError("a loop-space point needs at least one disk");
    for (auto& [phi, v] : a.parts)
        if (cfg.locate(phi) < 0)
            throw MathError("pole " + to_string(phi) + " of a lies outside every disk");
    std::vector<int> n(m, 0);
    for (auto& [phi, v] : ahat.parts) {
        int j = cfg.locate(phi);
        if (j < 0)
            continue;
        if (phi != cfg.disks[j].phi)
            throw MathError("ahat has a pole at " + to_string(phi) + " inside disk " + std::to_string(j + 1) +
                            " other than the marked pole");
        n[j] = ahat.pole_order(phi);
    }
    for (int j = 0; j < m; ++j)
        if (n[j] < 1)
            throw MathError("ahat has no pole at the marked point of disk " + std::to_string(j + 1));
    const int n0 = a.poly.degree();
    if (n0 < 1)
        throw MathError("a must have a pole at infinity");

    PointCalM p;
    p.a = a;
    p.ahat = ahat;
    p.cfg = cfg;
    p.zeta = a - ahat;
    p.ell = a.polynomial_part();
    for (auto& d : cfg.disks)
        p.ell += ahat.principal_part(d.phi);
    p.da = a.derivative();
    p.dahat = ahat.derivative();
    p.dzeta = p.zeta.derivative();

    ManifoldSpecM spec{n0, n};
    std::vector<Rational> order;
    for (auto& d : cfg.disks)
        order.push_back(d.phi);
    p.base = make_point(spec, flat_from_superpotential(spec, p.ell, order, branches));

    if (factored) {
        if (!(factored->value() == p.zeta))
            throw MathError("factored zeta does not equal a - ahat");
        p.factored = std::move(factored);
    }
    if (!p.zeta.is_zero()) {
        auto w = winding_check(p.zeta, cfg);
        if (!w.ok)
            throw MathError("winding numbers of zeta do not match the disks: " + w.message);
    }
    return p;
}

PointCalM calm_point_from_flat(const ManifoldSpecM& spec, const std::vector<Rational>& h, const FactoredZeta& zeta,
                               const std::vector<Disk>& disks)
{
    DiskConfig cfg{disks};
    RF ell = superpotential_from_flat(spec, h);
    RF z = zeta.value();
    RF zm = minus_part(CF::uniform(z, cfg.size()), cfg);
    std::vector<std::optional<Rational>> br;
    int off = spec.n0 - 1;
    for (int k = 0; k < spec.m(); ++k) {
        br.push_back(h[off + 1]);
        off += spec.n[k] + 1;
    }
    return make_calm_point(ell + zm, ell - (z - zm), cfg, br, zeta);
}

PointCalM calm_point_from_flat(const ManifoldSpecM& spec, const std::vector<Rational>& h, const std::vector<Disk>& disks)
{
    RF ell = superpotential_from_flat(spec, h);
    std::vector<std::optional<Rational>> br;
    int off = spec.n0 - 1;
    for (int k = 0; k < spec.m(); ++k) {
        br.push_back(h[off + 1]);
        off += spec.n[k] + 1;
    }
    return make_calm_point(ell, ell, DiskConfig{disks}, br);
}

CovectorPair CovectorPair::uniform(const RatFunc<Rational>& w, const RatFunc<Rational>& wh, int m)
{
    return {CF::uniform(w, m), CF::uniform(wh, m)};
}

CovectorPair CovectorPair::zero(int m)
{
    return uniform(RF(), RF(), m);
}

CovectorPair& CovectorPair::operator+=(const CovectorPair& o)
{
    omega += o.omega;
    omegahat += o.omegahat;
    return *this;
}

RatFunc<Rational> TangentCalM::dell(const DiskConfig& cfg) const
{
    return xi - minus_part(CF::uniform(xi, cfg.size()), cfg) + minus_part(xihat, cfg);
}

ContourFunc<Rational> TangentCalM::dzeta() const
{
    return xi - xihat;
}

TangentCalM eta_map(const PointCalM& p, const CovectorPair& w)
{
    const auto& cfg = p.cfg;
    CF F = w.omega + w.omegahat;
    RF Fm = minus_part(F, cfg);
    CF Fp = F - Fm;
    CF P = w.omega * p.da + w.omegahat * p.dahat;
    RF Pm = minus_part(P, cfg);
    TangentCalM X;
    X.xi = p.da * Fm - Pm;
    X.xihat = (-p.dahat) * Fp + (P - Pm);
    X.g = -(plus_part(w.omega, cfg) - minus_part(w.omegahat, cfg));
    X.pre = w;
    return X;
}

Rational pairing(const PointCalM& p, const CovectorPair& w, const TangentCalM& X)
{
    return contour_integral(w.omega * X.xi + w.omegahat * X.xihat, p.cfg);
}

Rational metric_eta(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y)
{
    if (!Y.g)
        throw MathError("metric: the second tangent carries no preimage data");
    Rational zeta_term = -contour_integral(X.dzeta() * *Y.g, p.cfg);
    return zeta_term + residue_form(p.base.centers(), X.dell(p.cfg) * Y.dell(p.cfg), p.base.dell);
}

TangentCalM c_operator(const PointCalM& p, const TangentCalM& X, const CovectorPair& w)
{
    const auto& cfg = p.cfg;
    CF P1 = w.omega * X.xi + w.omegahat * X.xihat;
    CF P2 = w.omega * p.da + w.omegahat * p.dahat;
    RF P1m = minus_part(P1, cfg), P2m = minus_part(P2, cfg);
    TangentCalM C;
    C.xi = p.da * P1m - X.xi * P2m;
    C.xihat = (-p.dahat) * (P1 - P1m) + X.xihat * (P2 - P2m);
    return C;
}

std::string CalMTag::name() const
{
    return is_t ? "t" + std::to_string(i) + "," + std::to_string(s) : label_name(h);
}

CalMTag parse_calm_tag(const std::string& s)
{
    if (!s.empty() && s[0] == 't') {
        auto c = s.find(',');
        if (c == std::string::npos)
            throw SchemaError("bad coordinate tag '" + s + "'");
        try {
            return CalMTag::t(std::stoi(s.substr(1, c - 1)), std::stoi(s.substr(c + 1)));
        } catch (const std::logic_error&) {
            throw SchemaError("bad coordinate tag '" + s + "'");
        }
    }
    FlatLabel l = parse_label(s);
    return CalMTag::hl(l.k, l.r);
}

TangentCalM flat_tangent(const PointCalM& p, const CalMTag& tag)
{
    const int m = p.m();
    TangentCalM X;
    if (!tag.is_t) {
        int a = label_index(p.base.spec, tag.h);
        X.xi = p.base.tangents[a];
        X.xihat = CF::uniform(X.xi, m);
        X.g = CF::uniform(RF(), m);
        return X;
    }
    if (tag.i < 1 || tag.i > m)
        throw SchemaError("disk index of " + tag.name() + " out of range");
    const int i = tag.i - 1;
    if (p.cfg.disks[i].d != 1)
        throw MathError(tag.name() + ": exact mode needs d_i = 1; use the audit mode");
    if (p.zeta_vanishes())
        throw MathError(tag.name() + ": zeta vanishes at this point");
    RF zs, G;
    if (tag.s >= 0) {
        zs = pow(p.zeta, tag.s);
        G = zs * p.dzeta;
    } else if (p.factored) {
        zs = p.factored->power(tag.s);
        G = p.factored->power_times_derivative(tag.s);
    } else {
        throw MathError(tag.name() + ": negative s needs a factored zeta; use the audit mode");
    }
    auto sp = mask_project(G, i, p.cfg);
    X.xi = -sp.minus;
    X.xihat = sp.plus;
    X.g = -CF::masked(zs, i, m);
    X.pre = CovectorPair{CF::masked(zs, i, m), -CF::masked(zs, i, m)};
    return X;
}

TangentCalM unit_tangent(const PointCalM& p)
{
    const auto& spec = p.base.spec;
    const int m = p.m();
    if (spec.n0 >= 2) {
        TangentCalM X = flat_tangent(p, CalMTag::hl(0, spec.n0 - 1));
        X.xi = X.xi * Rational(frac(1, spec.n0));
        X.xihat = X.xihat * RF(Rational(frac(1, spec.n0)));
        return X;
    }
    TangentCalM X{RF(), CF::uniform(RF(), m), CF::uniform(RF(), m), std::nullopt};
    for (int i = 1; i <= m; ++i)
        for (auto tag : {CalMTag::t(i, 0), CalMTag::hl(i, 0)}) {
            TangentCalM Y = flat_tangent(p, tag);
            X.xi += Y.xi;
            X.xihat += Y.xihat;
            *X.g += *Y.g;
        }
    return X;
}

std::vector<CovectorPair> kernel_covectors(const PointCalM& p, int count)
{
    const int m = p.m();
    const int n0 = p.base.spec.n0;
    std::vector<CovectorPair> r;
    RF vanish(Rational(1));
    for (int j = 0; j < m; ++j)
        vanish = vanish * pow(RF(Poly<Rational>({-p.cfg.disks[j].phi, 1})), p.base.spec.n[j] + 1);
    for (int k = 0; static_cast<int>(r.size()) < count; ++k) {
        if (k % 2 == 0) {
            const Disk& D = p.cfg.disks[(k / 2) % m];
            r.push_back(CovectorPair::uniform(RF::pole(D.center, n0 + 1 + k / 2, Rational(1)), RF(), m));
        } else {
            r.push_back(CovectorPair::uniform(RF(), vanish * RF::monomial(k / 2, Rational(1)), m));
        }
    }
    return r;
}

RatFunc<Rational> omega_dd(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y)
{
    if (!Y.g)
        throw MathError("second-derivative table: the second tangent carries no preimage data");
    RF zeta_term = minus_part(X.dzeta() * *Y.g, p.cfg);
    return zeta_term + split_truncation(p.base.centers(), X.dell(p.cfg) * Y.dell(p.cfg), p.base.dell);
}

RatFunc<Rational> omegahat_dd(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y, int disk)
{
    if (!Y.g)
        throw MathError("second-derivative table: the second tangent carries no preimage data");
    RF zeta_term = plus_germ(X.dzeta() * *Y.g, p.cfg, disk);
    return -zeta_term + split_truncation(p.base.centers(), X.dell(p.cfg) * Y.dell(p.cfg), p.base.dell);
}

IdentityReport verify_identities(const PointCalM& p, const CovectorPair& w1, const CovectorPair& w2)
{
    const auto& cfg = p.cfg;
    const int m = p.m();
    IdentityReport rep;
    auto check = [&](bool ok, const std::string& tag, const std::string& detail = "") {
        ++rep.checked;
        if (!ok)
            rep.failures.push_back({tag, detail});
    };
    TangentCalM X1 = eta_map(p, w1), X2 = eta_map(p, w2);
    const CovectorPair* ws[2] = {&w1, &w2};
    const TangentCalM* Xs[2] = {&X1, &X2};

    for (int nu = 0; nu < 2; ++nu) {
        const CovectorPair& w = *ws[nu];
        const TangentCalM& X = *Xs[nu];
        /* xi - xihat = -zeta' (omega_+ - omegahat_-) */
        CF rhs = -(plus_part(w.omega, cfg) - minus_part(w.omegahat, cfg)) * p.dzeta;
        check(X.dzeta() == rhs, "eta-dzeta", "nu=" + std::to_string(nu + 1));

        RF Fm = minus_part(w.omega + w.omegahat, cfg);
        CF Fp = (w.omega + w.omegahat) - Fm;
        const int n0 = p.base.spec.n0;
        /* (xi / a')_{inf, >= -n0+1} = ((omega + omegahat)_-)_{inf, >= -n0+1}: t-exponents up to n0 - 1 */
        auto lhs = quotient_series(X.xi, p.da, Center::at_infinity(), n0);
        auto ref = expand(Fm, Center::at_infinity(), n0);
        bool ok = true;
        for (int e = std::min(lhs.lo, ref.lo); e <= n0 - 1; ++e)
            ok = ok && lhs.coeff(e) == ref.coeff(e);
        check(ok, "eta-infinity", "nu=" + std::to_string(nu + 1));
        /* (xihat / ahat')_{phi_j, <= n_j} = -((omega + omegahat)_+)_{phi_j, <= n_j} */
        for (int j = 0; j < m; ++j) {
            const int nj = p.base.spec.n[j];
            Center c = Center::at(cfg.disks[j].phi);
            auto l = quotient_series(X.xihat.germ[j], p.dahat, c, nj + 1);
            auto r = expand(-Fp.germ[j], c, nj + 1);
            bool okj = true;
            for (int e = std::min(l.lo, r.lo); e <= nj; ++e)
                okj = okj && l.coeff(e) == r.coeff(e);
            check(okj, "eta-poles", "nu=" + std::to_string(nu + 1) + " disk=" + std::to_string(j + 1));
        }
    }

    auto centers = p.base.centers();
    auto phis = phi_centers(p);
    auto rhs_terms = [&](const TangentCalM& A, const TangentCalM& B) {
        /* zeta-term, ell-term at infinity, ell-terms at the poles */
        CF z = A.dzeta() * -(plus_part(B.pre->omega, cfg) - minus_part(B.pre->omegahat, cfg));
        RF lt = A.dell(cfg) * B.dell(cfg);
        return std::tuple{z, split_truncation(kInf, lt, p.base.dell), split_truncation(phis, lt, p.base.dell)};
    };
    auto [z12, inf12, phi12] = rhs_terms(X1, X2);
    auto [z21, inf21, phi21] = rhs_terms(X2, X1);

    /* substitution forms of the ell-terms */
    {
        CF F2 = w2.omega + w2.omegahat;
        RF F2m = minus_part(F2, cfg);
        RF R = F2m * X1.xi;
        check(R - minus_part(CF::uniform(R, m), cfg) == inf12, "subst-inf");
        check(-minus_part((F2 - F2m) * X1.xihat, cfg) == phi12, "subst-phi");
    }

    TangentCalM prod = c_operator(p, X1, w2);
    /* product on a: xi_1 xi_2 - (X1 o X2) a = a' [ (zeta-term)_- + ell-terms ] */
    RF om = minus_part(z12, cfg) + inf12 + phi12;
    check(X1.xi * X2.xi - prod.xi == p.da * om, "product-a");
    /* product on ahat, each disk, with -(zeta-term)_+ */
    for (int j = 0; j < m; ++j) {
        RF oh = -plus_germ(z12, cfg, j) + inf12 + phi12;
        check(X1.xihat.germ[j] * X2.xihat.germ[j] - prod.xihat.germ[j] == p.dahat * oh, "product-ahat",
              "disk=" + std::to_string(j + 1));
    }
    check(minus_part(z12, cfg) + inf12 + phi12 == minus_part(z21, cfg) + inf21 + phi21, "symmetry");
    TangentCalM prod21 = c_operator(p, X2, w1);
    check(prod == prod21, "commutativity");
    return rep;
}

namespace {

int iota_disk(const DiskConfig& cfg, int j)
{
    const Disk& D = cfg.disks[j];
    for (int k = 0; k < cfg.size(); ++k)
        if (cfg.disks[k].center == -D.center && cfg.disks[k].radius == D.radius && cfg.disks[k].phi == -D.phi)
            return k;
    return -1;
}

}  // namespace

bool is_iota_symmetric(const PointCalM& p)
{
    for (int j = 0; j < p.m(); ++j)
        if (iota_disk(p.cfg, j) < 0)
            return false;
    return p.a.reflect() == p.a && p.ahat.reflect() == p.ahat;
}

bool is_odd(const CovectorPair& w, const DiskConfig& cfg)
{
    for (int j = 0; j < cfg.size(); ++j) {
        int k = iota_disk(cfg, j);
        if (k < 0)
            return false;
        if (!(w.omega.germ[k].reflect() == -w.omega.germ[j]) || !(w.omegahat.germ[k].reflect() == -w.omegahat.germ[j]))
            return false;
    }
    return true;
}

bool is_even(const TangentCalM& X, const DiskConfig& cfg)
{
    if (!(X.xi.reflect() == X.xi))
        return false;
    for (int j = 0; j < cfg.size(); ++j) {
        int k = iota_disk(cfg, j);
        if (k < 0 || !(X.xihat.germ[k].reflect() == X.xihat.germ[j]))
            return false;
    }
    return true;
}

namespace {

Complex to_c(const Rational& x)
{
    return Complex(static_cast<long double>(to_double(x)));
}

}  // namespace

AuditResult audit_t_metric(const PointCalM& p, int i, int s, int s2, int samples)
{
    if (i < 1 || i > p.m())
        throw SchemaError("disk index out of range");
    const Disk& D = p.cfg.disks[i - 1];
    const int d = D.d;
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    const long double c = to_double(D.center), r = to_double(D.radius);
    Complex acc = 0;
    long double arg0 = 0, prev = 0, unwrapped = 0;
    for (int k = 0; k <= samples; ++k) {
        long double th = two_pi * k / samples;
        Complex e(std::cos(th), std::sin(th));
        Complex z = c + r * e;
        Complex zv = eval_complex(p.zeta, z);
        long double a = std::arg(zv);
        if (k == 0) {
            arg0 = prev = unwrapped = a;
        } else {
            long double da = a - prev;
            while (da > std::numbers::pi_v<long double>)
                da -= two_pi;
            while (da < -std::numbers::pi_v<long double>)
                da += two_pi;
            unwrapped += da;
            prev = a;
        }
        if (k == samples)
            break;
        /* zeta^{1/d} on the continuous branch */
        Complex root = std::polar(std::pow(std::abs(zv), 1.0L / d), unwrapped / d);
        Complex pw = 1;
        int q = s + s2;
        for (int t = 0; t < std::abs(q); ++t)
            pw *= root;
        if (q < 0)
            pw = Complex(1) / pw;
        acc += pw * eval_complex(p.dzeta, z) * r * e;
    }
    long double turns = (unwrapped - arg0) / two_pi;
    if (std::fabs(turns - d) > 1e-6)
        throw MathError("zeta winds " + std::to_string(static_cast<double>(turns)) + " times around contour " +
                        std::to_string(i) + ", declared " + std::to_string(d));
    AuditResult res;
    res.value = -(acc / static_cast<long double>(samples)).real();
    res.expected = (s + s2 == -d) ? -d : 0;
    res.residual = std::abs(-(acc / static_cast<long double>(samples)) - Complex(res.expected));
    return res;
}

AuditResult audit_zeta_term(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y, const Rational& z,
                            int samples)
{
    if (p.cfg.locate(z) >= 0)
        throw MathError("audit point must lie outside the disks");
    const long double two_pi = 2 * std::numbers::pi_v<long double>;
    const Complex zc = to_c(z);
    Complex acc = 0;
    for (int j = 0; j < p.m(); ++j) {
        const Disk& D = p.cfg.disks[j];
        const long double c = to_double(D.center), r = to_double(D.radius);
        for (int k = 0; k < samples; ++k) {
            long double th = two_pi * k / samples;
            Complex e(std::cos(th), std::sin(th));
            Complex w = c + r * e;
            Complex dx = eval_complex(X.xi, w) - eval_complex(X.xihat.germ[j], w);
            Complex dy = eval_complex(Y.xi, w) - eval_complex(Y.xihat.germ[j], w);
            Complex f = dx * dy / eval_complex(p.dzeta, w);
            acc -= f / (w - zc) * r * e / static_cast<long double>(samples);
        }
    }
    AuditResult res;
    res.value = acc.real();
    RF exact = minus_part(X.dzeta() * *Y.g, p.cfg);
    Complex ex = eval_complex(exact, zc);
    res.expected = ex.real();
    res.residual = std::abs(acc - ex);
    return res;
}

}  // namespace owdvv
