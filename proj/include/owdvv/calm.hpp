#pragma once

#include "owdvv/contour.hpp"
#include "owdvv/frobenius_m.hpp"

#include <optional>
#include <string>
#include <vector>

namespace owdvv {

/* zeta = c prod (z - root)^mult with rational roots; negative mult marks a pole. */
struct FactoredZeta {
    Rational c;
    std::vector<std::pair<Rational, int>> roots;

    RatFunc<Rational> value() const;
    /* zeta^s zeta' for any integer s. */
    RatFunc<Rational> power_times_derivative(int s) const;
    /* zeta^s for any integer s. */
    RatFunc<Rational> power(int s) const;
};

/*
 * Rational representative (a, ahat) of a point of the loop-space manifold.
 * zeta = a - ahat, ell = polynomial part of a + principal parts of ahat at
 * the marked poles.  base is the point of M with superpotential ell.
 */
struct PointCalM {
    RatFunc<Rational> a, ahat;
    DiskConfig cfg;
    RatFunc<Rational> zeta, ell, da, dahat, dzeta;
    std::optional<FactoredZeta> factored;
    PointM base;

    int m() const { return cfg.size(); }
    bool zeta_vanishes() const { return zeta.is_zero(); }
};

/*
 * Validates the shape of (a, ahat) against the disks and, unless zeta = 0,
 * the declared winding numbers.  branches[k] fixes h_{k,1} when n_k >= 2.
 */
PointCalM make_calm_point(const RatFunc<Rational>& a, const RatFunc<Rational>& ahat, const DiskConfig& cfg,
                          const std::vector<std::optional<Rational>>& branches = {},
                          std::optional<FactoredZeta> factored = std::nullopt);

/* a = ell + zeta_-, ahat = ell - zeta_+ for the superpotential of flat point h. */
PointCalM calm_point_from_flat(const ManifoldSpecM& spec, const std::vector<Rational>& h, const FactoredZeta& zeta,
                               const std::vector<Disk>& disks);
/* The zeta = 0 point a = ahat = ell. */
PointCalM calm_point_from_flat(const ManifoldSpecM& spec, const std::vector<Rational>& h, const std::vector<Disk>& disks);

/* Covector (omega, omegahat), one germ per contour. */
struct CovectorPair {
    ContourFunc<Rational> omega, omegahat;

    static CovectorPair uniform(const RatFunc<Rational>& w, const RatFunc<Rational>& wh, int m);
    static CovectorPair zero(int m);
    CovectorPair& operator+=(const CovectorPair& o);
    friend CovectorPair operator+(CovectorPair a, const CovectorPair& b) { return a += b; }
};

/*
 * (d a, d ahat) with d ahat one germ per disk.  g = d zeta / zeta' on the
 * contours; it is known for eta-images and flat frames and is required in
 * the second slot of the metric and the second-derivative tables.
 */
struct TangentCalM {
    RatFunc<Rational> xi;
    ContourFunc<Rational> xihat;
    std::optional<ContourFunc<Rational>> g;
    std::optional<CovectorPair> pre;

    /* d ell = (xi)_+ + (xihat)_- */
    RatFunc<Rational> dell(const DiskConfig& cfg) const;
    /* d zeta on the contours */
    ContourFunc<Rational> dzeta() const;
    bool operator==(const TangentCalM& o) const { return xi == o.xi && xihat == o.xihat; }
};

TangentCalM eta_map(const PointCalM& p, const CovectorPair& w);
Rational pairing(const PointCalM& p, const CovectorPair& w, const TangentCalM& X);
Rational metric_eta(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y);
TangentCalM c_operator(const PointCalM& p, const TangentCalM& X, const CovectorPair& w);

/* Flat coordinate tag: t_{i,s} (disk i, 1-based) or an h label. */
struct CalMTag {
    bool is_t = false;
    int i = 0;
    int s = 0;
    FlatLabel h;

    static CalMTag t(int i, int s) { return {true, i, s, {}}; }
    static CalMTag hl(int k, int r) { return {false, 0, 0, {k, r}}; }
    std::string name() const;
};

CalMTag parse_calm_tag(const std::string& s);

/*
 * Exact flat tangent.  t_{i,s} needs d_i = 1 and either s >= 0 or a factored
 * zeta; other cases belong to the audit mode.
 */
TangentCalM flat_tangent(const PointCalM& p, const CalMTag& tag);

/* Unit vector field: (1/n0) d/dh_{0,n0-1}, or sum_i (d/dt_{i,0} + d/dh_{i,0}) when n0 = 1. */
TangentCalM unit_tangent(const PointCalM& p);

/* Two known families in ker eta: (z - c)^{-N} with c inside a disk, N > n0; and a polynomial vanishing to order n_j + 1 at every phi_j. */
std::vector<CovectorPair> kernel_covectors(const PointCalM& p, int count);

/* d_1 d_2 Omega (or Omegahat on disk d) for tangents X (first slot) and Y (second slot, needs g). */
RatFunc<Rational> omega_dd(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y);
RatFunc<Rational> omegahat_dd(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y, int disk);

struct IdentityFailure {
    std::string tag;
    std::string detail;
};

struct IdentityReport {
    int checked = 0;
    std::vector<IdentityFailure> failures;
    bool ok() const { return failures.empty(); }
};

/*
 * For a covector pair: eta on zeta, at infinity and at the poles, the product
 * on a and ahat, the substitution forms, symmetry and commutativity.
 */
IdentityReport verify_identities(const PointCalM& p, const CovectorPair& w1, const CovectorPair& w2);

/* Involution z -> -z. */
bool is_iota_symmetric(const PointCalM& p);
bool is_odd(const CovectorPair& w, const DiskConfig& cfg);
bool is_even(const TangentCalM& X, const DiskConfig& cfg);

/* Audit (floating) mode. */
struct AuditResult {
    long double value = 0;
    long double expected = 0;
    long double residual = 0;
};

/*
 * <d/dt_{i,s}, d/dt_{i,s'}> = -(1/2 pi i) oint zeta^{(s+s')/d} dzeta on gamma_i,
 * with the continuous branch of zeta^{1/d} along the contour.
 */
AuditResult audit_t_metric(const PointCalM& p, int i, int s, int s2, int samples = 4096);
/* The zeta-term of d_1 d_2 Omega by Cauchy quadrature of (d_1 zeta d_2 zeta / zeta')_- at z, against the exact table. */
AuditResult audit_zeta_term(const PointCalM& p, const TangentCalM& X, const TangentCalM& Y, const Rational& z,
                            int samples = 4096);

}  // namespace owdvv
