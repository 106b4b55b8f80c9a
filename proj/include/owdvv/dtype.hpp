#pragma once

#include "owdvv/frobenius_m.hpp"
#include "owdvv/hierarchy.hpp"
#include "owdvv/open_wdvv.hpp"

#include <string>
#include <vector>

namespace owdvv {

/*
 * Even submanifold: ambient shape n0 = 2 n0', one pole of order 2 n1' at 0
 * and pole pairs at +-phi_k of order n_k' (k = 2..m'+1), so m = 2m' + 1.
 */
struct SpecDHat {
    int n0p = 1;
    int n1p = 1;
    std::vector<int> nkp;

    int mp() const { return static_cast<int>(nkp.size()); }
    ManifoldSpecM ambient() const;
    int dim() const;
    void validate() const;
};

/*
 * Reduced coordinates as ambient labels: h_{0,odd}, h_{1,odd}, and h_{2k-2,r}
 * for each pair (its partner h_{2k-1,r} equals -h_{2k-2,r}).
 */
std::vector<FlatLabel> reduced_labels(const SpecDHat& spec);
std::vector<std::string> reduced_names(const SpecDHat& spec);

template <class T>
std::vector<T> ambient_flat(const SpecDHat& spec, const std::vector<T>& hhat);

/* Ambient components of each reduced coordinate field (one column per reduced index). */
std::vector<TangentM> pushforward_frame(const SpecDHat& spec);

struct PointDHat {
    SpecDHat spec;
    std::vector<Rational> hhat;
};

/* Ambient point; rejects a superpotential that is not even. */
PointM embed(const PointDHat& pd);
/* Reduced coordinates of an ambient point; rejects a point off the even submanifold. */
std::vector<Rational> restrict_flat(const SpecDHat& spec, const std::vector<Rational>& flat);

struct ReducedStructure {
    int dim = 0;
    std::vector<std::vector<Rational>> metric;
    std::vector<Rational> triple;
    StructureConstants c;

    const Rational& tri(int a, int b, int d) const { return triple[(static_cast<size_t>(a) * dim + b) * dim + d]; }
};

/* From jets of hhat -> ell and residues on the even superpotential. */
ReducedStructure reduced_intrinsic(const PointDHat& pd);
/* From the ambient tables contracted with the push-forward frame. */
ReducedStructure reduced_pushforward(const PointDHat& pd, Exec ex = Exec::Parallel);

struct DHatReport {
    long checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/* Intrinsic and push-forward metric, triples and structure constants agree, and the product closes on even tangents. */
DHatReport restrict_structure(const PointDHat& pd, Exec ex = Exec::Parallel);

/* Ambient F^o table restricted to the even directions. */
SecondDerivTable restricted_fo_table(const PointDHat& pd, Exec ex = Exec::Parallel);
OpenWdvvReport verify_open_wdvv_dhat(const PointDHat& pd, Exec ex = Exec::Parallel);

/*
 * Parity: ell, the frame tangents and the restricted second derivatives have
 * the parities forced by z -> -z, and the reduced flow combinations at an even
 * loop point are even and tangent to the submanifold (logarithmic flows excluded).
 */
DHatReport check_parity(const PointDHat& pd, const TangentM& ux_hat, int p_max, Exec ex = Exec::Parallel);

}  // namespace owdvv
