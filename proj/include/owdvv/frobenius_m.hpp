#pragma once

#include "owdvv/jet.hpp"
#include "owdvv/kernels.hpp"
#include "owdvv/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace owdvv {

/* Shape of M: polynomial degree n0 and pole orders n_1..n_m. */
struct ManifoldSpecM {
    int n0 = 1;
    std::vector<int> n;

    int m() const { return static_cast<int>(n.size()); }
    int dim() const;
    void validate() const;
    friend bool operator==(const ManifoldSpecM&, const ManifoldSpecM&) = default;
};

/* Flat coordinate h_{k,r}; k = 0 is the polynomial block (1 <= r <= n0 - 1). */
struct FlatLabel {
    int k = 0;
    int r = 0;
    friend bool operator==(const FlatLabel&, const FlatLabel&) = default;
};

std::vector<FlatLabel> flat_labels(const ManifoldSpecM& spec);
std::string label_name(const FlatLabel& l);
FlatLabel parse_label(const std::string& s);
int label_index(const ManifoldSpecM& spec, const FlatLabel& l);
/* Index of the metric partner of alpha and the constant n0 or n_k of that pairing. */
int dual_index(const ManifoldSpecM& spec, int alpha);
int metric_constant(const ManifoldSpecM& spec, int alpha);

using TangentM = std::vector<Rational>;

/* Point of M in flat coordinates, with the superpotential and its tangent table cached. */
struct PointM {
    ManifoldSpecM spec;
    std::vector<Rational> flat;
    RatFunc<Rational> ell;
    RatFunc<Rational> dell;
    std::vector<Rational> phi;
    std::vector<Rational> beta;
    std::vector<RatFunc<Rational>> tangents;

    int dim() const { return spec.dim(); }
    std::vector<Center> centers() const;
};

PointM make_point(const ManifoldSpecM& spec, std::vector<Rational> flat);

template <class T>
RatFunc<T> superpotential_from_flat(const ManifoldSpecM& spec, const std::vector<T>& h);

/*
 * Flat coordinates of a superpotential of the given shape.  Poles are matched
 * to the pole orders in increasing order unless pole_order lists them; branches[k]
 * fixes h_{k,1} as an n_k-th root of the top coefficient at phi_k.
 */
std::vector<Rational> flat_from_superpotential(const ManifoldSpecM& spec, const RatFunc<Rational>& ell,
                                               const std::vector<Rational>& pole_order = {},
                                               const std::vector<std::optional<Rational>>& branches = {});

/* d ell / d h_alpha from the truncation formulas. */
std::vector<RatFunc<Rational>> tangent_table(const PointM& p);
/* The same, from first-order jets of superpotential_from_flat. */
std::vector<RatFunc<Rational>> tangent_table_jets(const ManifoldSpecM& spec, const std::vector<Rational>& flat);

/* Flat point with jets h + e_i in every direction (order 1 or 2). */
std::vector<Jet> jet_point(const std::vector<Rational>& flat, int order);
std::vector<Jet> jet_point_along(const std::vector<Rational>& flat, const std::vector<Rational>& dir, int order);

RatFunc<Rational> tangent_ell(const PointM& p, const TangentM& X);

/*
 * Series of num/den at a center, known at least below exponent need; the
 * working window is enlarged until that holds.
 */
template <class T>
Series<T> quotient_series(const RatFunc<T>& num, const RatFunc<T>& den, Center c, int need);

/* -(Res_inf + sum_k Res_{phi_k}) num/den dz over the given centers. */
template <class T>
T residue_form(const std::vector<Center>& centers, const RatFunc<T>& num, const RatFunc<T>& den);

/* (num/den)_{inf, >= 0} + sum_k (num/den)_{phi_k, <= -1} */
template <class T>
RatFunc<T> split_truncation(const std::vector<Center>& centers, const RatFunc<T>& num, const RatFunc<T>& den);

Rational metric_pair(const PointM& p, const TangentM& X, const TangentM& Y);
Rational metric_pair_ell(const PointM& p, const RatFunc<Rational>& dX, const RatFunc<Rational>& dY);
std::vector<std::vector<Rational>> metric_matrix(const PointM& p);
Rational triple_c(const PointM& p, const TangentM& X, const TangentM& Y, const TangentM& Z);

/* c[(a * dim + b) * dim + d] = c_{ab}^d in the flat frame. */
struct StructureConstants {
    int dim = 0;
    std::vector<Rational> c;

    const Rational& at(int a, int b, int d) const { return c[(static_cast<size_t>(a) * dim + b) * dim + d]; }
    Rational& at(int a, int b, int d) { return c[(static_cast<size_t>(a) * dim + b) * dim + d]; }
};

StructureConstants structure_constants(const PointM& p, Exec ex = Exec::Parallel);
TangentM multiply(const StructureConstants& c, const TangentM& X, const TangentM& Y);
TangentM multiply(const PointM& p, const TangentM& X, const TangentM& Y);
TangentM unit(const ManifoldSpecM& spec);
TangentM basis_vector(int dim, int alpha);

/* Flat decomposition of an ell-representative; nullopt when it is not in the tangent span. */
std::optional<TangentM> decompose_tangent(const PointM& p, const RatFunc<Rational>& dl);

struct FlatnessFailure {
    int alpha;
    int beta;
    RatFunc<Rational> residual;
};

struct FlatnessReport {
    int pairs_checked = 0;
    std::vector<FlatnessFailure> failures;
    bool ok() const { return failures.empty(); }
};

/* d_a d_b ell == d/dz of the split truncation of d_a ell d_b ell / ell'. */
FlatnessReport check_flat_connection(const PointM& p, Exec ex = Exec::Parallel);

struct AxiomReport {
    long checked = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/* eta(d_a, d_b) = n0 or n_k on the dual pairs and 0 elsewhere. */
AxiomReport check_metric_constants(const PointM& p);
/* Commutativity, associativity and the unit over all basis triples, plus eta(X o Y, Z) = eta(X, Y o Z). */
AxiomReport check_algebra(const PointM& p, const StructureConstants& c, Exec ex = Exec::Parallel);

}  // namespace owdvv
