#pragma once

#include "owdvv/calm.hpp"
#include "owdvv/frobenius_m.hpp"
#include "owdvv/logfunc.hpp"
#include "owdvv/open_wdvv.hpp"

#include <string>
#include <vector>

namespace owdvv {

/* T^{u,p}: u a flat label of M, a t_{i,l} coordinate of the loop space, or the tag s. */
struct FlowIndex {
    bool s_family = false;
    CalMTag u;
    int p = 0;

    static FlowIndex flat(const FlatLabel& l, int p) { return {false, CalMTag::hl(l.k, l.r), p}; }
    static FlowIndex t(int i, int l, int p) { return {false, CalMTag::t(i, l), p}; }
    static FlowIndex s(int p) { return {true, {}, p}; }
    FlowIndex with_p(int q) const { return {s_family, u, q}; }
    std::string name() const;
};

/* "h0,1", "t1,2" or "s" */
FlowIndex parse_flow_index(const std::string& u, int p);

/* ext: -(Q)_- + Qtilde(a); int: (Q)_+ + Qtilde(ahat) on a chosen disk. */
enum class Variant { Ext, Int };

std::string variant_name(Variant v);
Variant parse_variant(const std::string& s);

/*
 * One term of a generator, anchored where its projections are computed.
 *   EllPow       ell^p                                   rational
 *   PowInf       a^q                                     series at infinity
 *   PowPhi       ahat^q at phi_k                         series at phi_k
 *   LogRatioInf  a^p log(a^{1/n0} / (z - phi_k))         series at infinity
 *   LogProdPhi   ahat^p log(ahat^{1/n_k} (z - phi_k))    series at phi_k
 *   LogLin       ell^p log(z - phi_k)                    rational times log
 *   ZetaPow      zeta^l (a^P - ahat^P)                   rational
 * mask = j restricts the term to the contour around pole j (0-based), -1 = none.
 */
enum class PieceKind { EllPow, PowInf, PowPhi, LogRatioInf, LogProdPhi, LogLin, ZetaPow };

struct Piece {
    PieceKind kind = PieceKind::EllPow;
    Rational coef;
    Rational q;
    int p = 0;
    int k = 0;
    int l = 0;
    int mask = -1;

    std::string str() const;
};

struct GeneratorQ {
    FlowIndex idx;
    std::vector<Piece> q, qext, qint;
};

/*
 * Q_{u,p}, Qtilde_{u,p} for p >= -1 (p = -1 is the derived seed).  n are the
 * pole orders; t_{i,l} needs l >= 0 and i <= n.size().
 */
GeneratorQ q_generator(int n0, const std::vector<int>& n, const FlowIndex& idx);

struct LedgerReport {
    int checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/*
 * dQ_p/d ell = Q_{p-1} and the same for both Qtilde lists, anchor by anchor,
 * on series windows; d/d ell is d/dz minus the explicit z-dependence, over ell'.
 */
LedgerReport check_qrec(const PointM& pt, const FlowIndex& u, int p_max);
/* d_a Q_p + d_ahat Q_p = Q_{p-1} for the t-generators as polynomials in (a, ahat). */
LedgerReport check_qrec_t(int l, int p_max);

/* Theta_{u,p;s} = G_{u,p-1}(s). */
LogRatFunc<Rational> theta_s(const PointM& pt, const FlowIndex& idx, Variant v, int disk = 0);
/* Flat components of Theta_{u,p}, one channel per log constant. */
std::vector<LogScalar> theta_flat(const PointM& pt, const FlowIndex& idx, Variant v, int disk = 0);

struct LoopPointM {
    PointM point;
    TangentM ux;
    Rational s;
    Rational sx;
};

/* {G, ell} = G_z ell_x - ell_z G_x with G the ext generator. */
LogRatFunc<Rational> closed_flow_rhs(const LoopPointM& lp, const FlowIndex& idx);
/* Theta_{u,p} o u_x through the structure constants. */
LogRatFunc<Rational> closed_flow_product(const LoopPointM& lp, const FlowIndex& idx);

struct OpenFlowM {
    LogRatFunc<Rational> base;
    LogScalar s;
};

/* Base flow and s-flow d_x G_{u,p}(s). */
OpenFlowM open_flow_rhs(const LoopPointM& lp, const FlowIndex& idx, Variant v, int disk = 0);
/* s-component of Theta_{u,p} o (u_x, s_x) on the open manifold. */
LogScalar open_flow_s_product(const LoopPointM& lp, const FlowIndex& idx, Variant v, int disk = 0);

struct RecursionFailure {
    std::string u;
    int p;
    std::string x;
    std::string detail;
};

struct RecursionReport {
    long checked = 0;
    std::vector<RecursionFailure> failures;
    bool ok() const { return failures.empty(); }
};

/*
 * d_X Theta_{u,p+1;s} = (Theta_{u,p} o X)_s for X in the flat frame and d/ds,
 * 0 <= p <= p_max, together with Theta_{u,0} = d_u.  Empty us means every flat
 * label and the s-family.  The int variant runs on every disk.
 */
RecursionReport verify_recursion(const PointM& pt, Variant v, int p_max, Exec ex = Exec::Parallel,
                                 std::vector<FlowIndex> us = {});

/* Loop-space flows: t_{i,l} (d_i = 1), h_{0,j} and h_{k,r} with r != n_k. */
struct LoopPointCalM {
    PointCalM point;
    TangentCalM ux;
    Rational s;
    Rational sx;
};

struct OpenFlowCalM {
    LogRatFunc<Rational> xi;
    std::vector<LogRatFunc<Rational>> xihat;
    LogScalar s;
};

/* Theta_{u,p;s}; logarithmic u is accepted only at zeta = 0. */
LogRatFunc<Rational> theta_s(const PointCalM& pt, const FlowIndex& idx, Variant v, int disk = 0);
OpenFlowCalM open_flow_rhs(const LoopPointCalM& lp, const FlowIndex& idx, Variant v, int disk = 0);
/* s-component of Theta_{t,p} o (u_x, s_x) from the Omega (ext) or Omegahat (int) tables. */
LogScalar open_flow_s_product(const LoopPointCalM& lp, const FlowIndex& idx, Variant v, int disk = 0);

}  // namespace owdvv
