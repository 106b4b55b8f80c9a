#pragma once

#include "owdvv/calm.hpp"
#include "owdvv/frobenius_m.hpp"
#include "owdvv/mpoly.hpp"

#include <string>
#include <vector>

namespace owdvv {

enum class TableVariant { Fo, Omega, OmegaHat };

std::string variant_name(TableVariant v);

/* Second derivatives of an open-WDVV solution as rational functions of s. */
struct SecondDerivTable {
    TableVariant variant = TableVariant::Fo;
    int dim = 0;
    std::vector<RatFunc<Rational>> dd; /* dd[a * dim + b] = d_a d_b */
    std::vector<RatFunc<Rational>> ds; /* d_a d_s */
    RatFunc<Rational> ss;              /* d_s d_s */

    const RatFunc<Rational>& at(int a, int b) const { return dd[static_cast<size_t>(a) * dim + b]; }
    RatFunc<Rational>& at(int a, int b) { return dd[static_cast<size_t>(a) * dim + b]; }
};

SecondDerivTable fo_table(const PointM& p, Exec ex = Exec::Parallel);

struct OpenWdvvFailure {
    int equation = 1; /* 1: (a,b,c) equation, 2: (a,b) equation */
    int a = 0, b = 0, c = 0;
    RatFunc<Rational> residual;
};

struct OpenWdvvReport {
    long checked = 0;
    std::vector<OpenWdvvFailure> failures;
    bool ok() const { return failures.empty(); }
};

/*
 * c_ab^d dd[d,c] + dd[a,b] ds[c] - c_bc^d dd[d,a] - dd[b,c] ds[a] = 0,
 * c_ab^d ds[d] + dd[a,b] ss - ds[a] ds[b] = 0.
 */
OpenWdvvReport verify_open_wdvv(const SecondDerivTable& t, const StructureConstants& c, Exec ex = Exec::Parallel);

/*
 * Tables of Omega (s outside the disks) or Omegahat (s in disk `disk`) along
 * the given tangents; every tangent needs its g data.
 */
SecondDerivTable omega_table(const PointCalM& p, const std::vector<TangentCalM>& dirs, TableVariant v, int disk = 0,
                             Exec ex = Exec::Parallel);

/*
 * Both open WDVV equations for Omega or Omegahat along the eta-images of a
 * covector frame, with X o Y = C_X(omega_Y):
 *   dd(X o Y, Z) + dd(X, Y) ds(Z) - dd(Y o Z, X) - dd(Y, Z) ds(X) = 0,
 *   ds(X o Y) + dd(X, Y) ss - ds(X) ds(Y) = 0.
 */
OpenWdvvReport verify_open_wdvv_calm(const PointCalM& p, const std::vector<CovectorPair>& frame, TableVariant v,
                                     int disk = 0, Exec ex = Exec::Parallel);

/*
 * Polynomial F^o(h, s) for m = 0 in the variables (h_{0,1}, ..., h_{0,n0-1}, s).
 * Gauge: no constant term and no term linear in h alone.
 */
struct OpenSolutionA {
    ManifoldSpecM spec;
    MPoly F;
    std::vector<std::string> names() const;
};

OpenSolutionA fo_closed_form(const ManifoldSpecM& spec);
/* d_a d_b F, d_a d_s F and d_s^2 F of the closed form at a flat point, as functions of s. */
SecondDerivTable closed_form_table(const OpenSolutionA& f, const std::vector<Rational>& flat);

}  // namespace owdvv
