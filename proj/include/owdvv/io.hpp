#pragma once

#include "owdvv/calm.hpp"
#include "owdvv/dtype.hpp"
#include "owdvv/logfunc.hpp"
#include "owdvv/mpoly.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace owdvv {

/* Objects keep sorted keys, so dumps are canonical. */
using Json = nlohmann::json;

/* Rationals are strings "p/q" (or "p"); integers are accepted on input. */
Json to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& where);
std::vector<Rational> rationals_from_json(const Json& j, const std::string& where);

/* {"poly": [c0, c1, ...], "parts": [{"phi": ..., "coeffs": [c_{-1}, c_{-2}, ...]}]} */
Json to_json(const RatFunc<Rational>& f);
RatFunc<Rational> ratfunc_from_json(const Json& j, const std::string& where);

Json to_json(const LogScalar& x);
Json to_json(const LogRatFunc<Rational>& f);
Json to_json(const MPoly& f, const std::vector<std::string>& names);
Json to_json(const ManifoldSpecM& spec);
Json to_json(const SpecDHat& spec);

enum class PointKind { M, Even, CalM };

std::string kind_name(PointKind k);

/* Loop data: u_x in flat (or reduced) components, s and s_x. */
struct LoopInput {
    std::vector<Rational> ux;
    Rational s;
    Rational sx;
};

/*
 * One point file:
 *   {"spec": {"n0": 2, "n": [1]}, "flat": [...]}                          point of M
 *   {"spec": {"even": true, "n0p": 1, "n1p": 1, "nkp": []}, "hhat": [...]} even point
 *   {"spec": ..., "flat": [...], "disks": [{"center", "radius", "d"}],
 *    "zeta": {"c": ..., "roots": [[root, mult], ...]} or absent for zeta = 0}  loop-space point
 * with an optional "loop": {"ux": [...], "s": ..., "sx": ...}.
 */
struct PointInput {
    std::string name;
    PointKind kind = PointKind::M;
    ManifoldSpecM spec;
    SpecDHat even;
    std::vector<Rational> coords;
    std::optional<FactoredZeta> zeta;
    std::vector<Disk> disks;
    std::optional<LoopInput> loop;
};

PointInput point_from_json(const Json& j, const std::string& name);
Json to_json(const PointInput& p);

PointM point_m(const PointInput& p);
PointDHat point_dhat(const PointInput& p);
PointCalM point_calm(const PointInput& p);

/*
 * Deterministic grid from {"spec": ..., "points": N, "seed": S, "calm": bool, "zeta": bool}:
 * phi_k near 3k, nonzero h_{k,1}, disks of radius 1 around 3k + 1/2.
 */
std::vector<PointInput> grid_from_json(const Json& j, const std::string& name);

Json read_json_file(const std::string& path);
/* Two-space indented dump with a trailing newline. */
std::string canonical(const Json& j);
/* Writes through a temporary file in the same directory and renames it over path. */
void write_atomic(const std::string& path, const std::string& content);

}  // namespace owdvv
