#include "owdvv/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

namespace owdvv {

Json to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j, const std::string& where)
{
    if (j.is_number_integer())
        return Rational(j.get<long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const std::exception&) {
        }
    }
    throw SchemaError(where + ": expected a rational \"p/q\" or an integer, got " + j.dump());
}

std::vector<Rational> rationals_from_json(const Json& j, const std::string& where)
{
    if (!j.is_array())
        throw SchemaError(where + ": expected an array");
    std::vector<Rational> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Json to_json(const RatFunc<Rational>& f)
{
    Json poly = Json::array();
    for (auto& c : f.poly.coeffs())
        poly.push_back(to_json(c));
    Json parts = Json::array();
    for (auto& [phi, v] : f.parts) {
        Json cs = Json::array();
        for (auto& c : v)
            cs.push_back(to_json(c));
        parts.push_back({{"phi", to_json(phi)}, {"coeffs", cs}});
    }
    return {{"poly", poly}, {"parts", parts}};
}

RatFunc<Rational> ratfunc_from_json(const Json& j, const std::string& where)
{
    if (!j.is_object() || !j.contains("poly"))
        throw SchemaError(where + ": expected {\"poly\": [...], \"parts\": [...]}");
    RatFunc<Rational> f{Poly<Rational>(rationals_from_json(j["poly"], where + ".poly"))};
    if (j.contains("parts")) {
        const Json& parts = j["parts"];
        if (!parts.is_array())
            throw SchemaError(where + ".parts: expected an array");
        for (size_t i = 0; i < parts.size(); ++i) {
            std::string w = where + ".parts[" + std::to_string(i) + "]";
            if (!parts[i].is_object() || !parts[i].contains("phi") || !parts[i].contains("coeffs"))
                throw SchemaError(w + ": expected {\"phi\", \"coeffs\"}");
            Rational phi = rational_from_json(parts[i]["phi"], w + ".phi");
            auto cs = rationals_from_json(parts[i]["coeffs"], w + ".coeffs");
            for (size_t k = 0; k < cs.size(); ++k)
                f += RatFunc<Rational>::pole(phi, static_cast<int>(k + 1), cs[k]);
        }
    }
    return f;
}

Json to_json(const LogScalar& x)
{
    Json logs = Json::array();
    for (auto& [arg, c] : x.logs)
        logs.push_back({{"arg", to_json(arg)}, {"coef", to_json(c)}});
    return {{"value", to_json(x.value)}, {"logs", logs}};
}

Json to_json(const LogRatFunc<Rational>& f)
{
    Json clog = Json::array(), slog = Json::array();
    for (auto& [arg, c] : f.clog)
        if (!c.is_zero())
            clog.push_back({{"arg", to_json(arg)}, {"coef", to_json(c)}});
    for (auto& [phi, c] : f.slog)
        if (!c.is_zero())
            slog.push_back({{"phi", to_json(phi)}, {"coef", to_json(c)}});
    return {{"rational", to_json(f.rational)}, {"clog", clog}, {"slog", slog}};
}

Json to_json(const MPoly& f, const std::vector<std::string>& names)
{
    Json terms = Json::array();
    for (auto& [e, c] : f.terms()) {
        Json ex = Json::array();
        for (int i = 0; i < static_cast<int>(names.size()); ++i)
            ex.push_back(i < static_cast<int>(e.size()) ? e[i] : 0);
        terms.push_back({{"coef", to_json(c)}, {"exponents", ex}});
    }
    return {{"vars", names}, {"terms", terms}, {"text", f.str(names)}};
}

Json to_json(const ManifoldSpecM& spec) { return {{"n0", spec.n0}, {"n", spec.n}}; }

Json to_json(const SpecDHat& spec)
{
    return {{"even", true}, {"n0p", spec.n0p}, {"n1p", spec.n1p}, {"nkp", spec.nkp}};
}

std::string kind_name(PointKind k)
{
    switch (k) {
    case PointKind::M:
        return "M";
    case PointKind::Even:
        return "even";
    case PointKind::CalM:
        return "loop";
    }
    return "?";
}

namespace {

int int_field(const Json& j, const char* key, const std::string& where)
{
    if (!j.contains(key) || !j[key].is_number_integer())
        throw SchemaError(where + "." + key + ": expected an integer");
    return j[key].get<int>();
}

std::vector<int> int_list(const Json& j, const char* key, const std::string& where)
{
    if (!j.contains(key))
        return {};
    if (!j[key].is_array())
        throw SchemaError(where + "." + key + ": expected an array of integers");
    std::vector<int> out;
    for (auto& v : j[key]) {
        if (!v.is_number_integer())
            throw SchemaError(where + "." + key + ": expected an array of integers");
        out.push_back(v.get<int>());
    }
    return out;
}

void read_spec(const Json& j, PointInput& p, const std::string& where)
{
    if (!j.is_object())
        throw SchemaError(where + ": expected an object");
    if (j.value("even", false)) {
        p.kind = PointKind::Even;
        p.even = {int_field(j, "n0p", where), int_field(j, "n1p", where), int_list(j, "nkp", where)};
        if (p.even.n0p < 1 || p.even.n1p < 1)
            throw SchemaError(where + ": n0p and n1p must be positive");
        for (int v : p.even.nkp)
            if (v < 1)
                throw SchemaError(where + ".nkp: orders must be positive");
        p.spec = p.even.ambient();
    } else {
        p.spec = {int_field(j, "n0", where), int_list(j, "n", where)};
        if (p.spec.n0 < 1)
            throw SchemaError(where + ".n0: must be positive");
        for (int v : p.spec.n)
            if (v < 1)
                throw SchemaError(where + ".n: pole orders must be positive");
        if (p.spec.dim() < 1)
            throw SchemaError(where + ": empty manifold");
    }
}

/* Disk k gets phi = h_{k,0}. */
void fill_disk_poles(PointInput& p)
{
    int off = p.spec.n0 - 1;
    for (int k = 1; k <= p.spec.m(); ++k) {
        p.disks[k - 1].phi = p.coords[off];
        off += p.spec.n[k - 1] + 1;
    }
}

}  // namespace

PointInput point_from_json(const Json& j, const std::string& name)
{
    if (!j.is_object())
        throw SchemaError(name + ": expected a JSON object");
    if (!j.contains("spec"))
        throw SchemaError(name + ": missing \"spec\"");
    PointInput p;
    p.name = name;
    read_spec(j["spec"], p, name + ".spec");
    if (p.kind == PointKind::Even) {
        if (!j.contains("hhat"))
            throw SchemaError(name + ": an even point needs \"hhat\"");
        p.coords = rationals_from_json(j["hhat"], name + ".hhat");
        if (static_cast<int>(p.coords.size()) != p.even.dim())
            throw SchemaError(name + ".hhat: expected " + std::to_string(p.even.dim()) + " entries");
    } else {
        if (!j.contains("flat"))
            throw SchemaError(name + ": missing \"flat\"");
        p.coords = rationals_from_json(j["flat"], name + ".flat");
        if (static_cast<int>(p.coords.size()) != p.spec.dim())
            throw SchemaError(name + ".flat: expected " + std::to_string(p.spec.dim()) + " entries");
    }
    if (j.contains("disks")) {
        if (p.kind == PointKind::Even)
            throw SchemaError(name + ": disks are not supported for even points");
        p.kind = PointKind::CalM;
        const Json& dj = j["disks"];
        if (!dj.is_array() || static_cast<int>(dj.size()) != p.spec.m())
            throw SchemaError(name + ".disks: expected one disk per pole");
        for (size_t k = 0; k < dj.size(); ++k) {
            std::string w = name + ".disks[" + std::to_string(k) + "]";
            if (!dj[k].is_object() || !dj[k].contains("center") || !dj[k].contains("radius"))
                throw SchemaError(w + ": expected {\"center\", \"radius\", \"d\"}");
            Disk d;
            d.center = rational_from_json(dj[k]["center"], w + ".center");
            d.radius = rational_from_json(dj[k]["radius"], w + ".radius");
            d.d = dj[k].contains("d") ? int_field(dj[k], "d", w) : 1;
            p.disks.push_back(d);
        }
        fill_disk_poles(p);
        if (j.contains("zeta") && !j["zeta"].is_null()) {
            const Json& zj = j["zeta"];
            std::string w = name + ".zeta";
            if (!zj.is_object() || !zj.contains("c") || !zj.contains("roots") || !zj["roots"].is_array())
                throw SchemaError(w + ": expected {\"c\", \"roots\": [[root, mult], ...]}");
            FactoredZeta z{rational_from_json(zj["c"], w + ".c"), {}};
            for (auto& r : zj["roots"]) {
                if (!r.is_array() || r.size() != 2 || !r[1].is_number_integer())
                    throw SchemaError(w + ".roots: expected [root, multiplicity] pairs");
                z.roots.push_back({rational_from_json(r[0], w + ".roots"), r[1].get<int>()});
            }
            p.zeta = z;
        }
    } else if (j.contains("zeta")) {
        throw SchemaError(name + ": \"zeta\" needs \"disks\"");
    }
    if (j.contains("loop")) {
        const Json& lj = j["loop"];
        std::string w = name + ".loop";
        if (!lj.is_object() || !lj.contains("ux"))
            throw SchemaError(w + ": expected {\"ux\", \"s\", \"sx\"}");
        LoopInput l;
        l.ux = rationals_from_json(lj["ux"], w + ".ux");
        size_t want = p.kind == PointKind::Even ? p.even.dim() : p.spec.dim();
        if (l.ux.size() != want)
            throw SchemaError(w + ".ux: expected " + std::to_string(want) + " entries");
        l.s = lj.contains("s") ? rational_from_json(lj["s"], w + ".s") : Rational(0);
        l.sx = lj.contains("sx") ? rational_from_json(lj["sx"], w + ".sx") : Rational(0);
        p.loop = l;
    }
    return p;
}

Json to_json(const PointInput& p)
{
    Json j;
    if (p.kind == PointKind::Even) {
        j["spec"] = to_json(p.even);
        j["hhat"] = Json::array();
        for (auto& x : p.coords)
            j["hhat"].push_back(to_json(x));
    } else {
        j["spec"] = to_json(p.spec);
        j["flat"] = Json::array();
        for (auto& x : p.coords)
            j["flat"].push_back(to_json(x));
    }
    if (p.kind == PointKind::CalM) {
        j["disks"] = Json::array();
        for (auto& d : p.disks)
            j["disks"].push_back({{"center", to_json(d.center)}, {"radius", to_json(d.radius)}, {"d", d.d}});
        if (p.zeta) {
            Json roots = Json::array();
            for (auto& [r, m] : p.zeta->roots)
                roots.push_back({to_json(r), m});
            j["zeta"] = {{"c", to_json(p.zeta->c)}, {"roots", roots}};
        }
    }
    if (p.loop) {
        Json ux = Json::array();
        for (auto& x : p.loop->ux)
            ux.push_back(to_json(x));
        j["loop"] = {{"ux", ux}, {"s", to_json(p.loop->s)}, {"sx", to_json(p.loop->sx)}};
    }
    return j;
}

PointM point_m(const PointInput& p)
{
    if (p.kind == PointKind::Even)
        return embed(point_dhat(p));
    return make_point(p.spec, p.coords);
}

PointDHat point_dhat(const PointInput& p)
{
    if (p.kind != PointKind::Even)
        throw SchemaError(p.name + ": not an even point");
    return {p.even, p.coords};
}

PointCalM point_calm(const PointInput& p)
{
    if (p.kind != PointKind::CalM)
        throw SchemaError(p.name + ": not a loop-space point");
    if (p.zeta)
        return calm_point_from_flat(p.spec, p.coords, *p.zeta, p.disks);
    return calm_point_from_flat(p.spec, p.coords, p.disks);
}

namespace {

/* Draws use raw engine output only, so grids are identical across standard libraries. */
struct Draw {
    std::mt19937_64 g;
    int uniform(int lo, int hi) { return lo + static_cast<int>(g() % static_cast<uint64_t>(hi - lo + 1)); }
    Rational rnd() { return frac(uniform(-4, 4), uniform(1, 3)); }
    Rational nonzero()
    {
        Rational b;
        do
            b = rnd();
        while (is_zero(b));
        return b;
    }
};

}  // namespace

std::vector<PointInput> grid_from_json(const Json& j, const std::string& name)
{
    if (!j.is_object() || !j.contains("spec"))
        throw SchemaError(name + ": a grid needs \"spec\"");
    PointInput proto;
    read_spec(j["spec"], proto, name + ".spec");
    int count = j.contains("points") ? int_field(j, "points", name) : 1;
    int seed = j.contains("seed") ? int_field(j, "seed", name) : 1;
    bool calm = j.value("calm", false);
    bool with_zeta = j.value("zeta", true);
    if (count < 0 || count > 1000)
        throw SchemaError(name + ".points: expected 0..1000");
    if (calm && proto.kind == PointKind::Even)
        throw SchemaError(name + ": loop-space grids need an ambient spec");
    Draw dr{std::mt19937_64(static_cast<uint64_t>(seed))};
    std::vector<PointInput> out;
    for (int i = 0; i < count; ++i) {
        PointInput p = proto;
        p.name = name + "#" + std::to_string(i);
        p.coords.clear();
        if (p.kind == PointKind::Even) {
            for (auto& l : reduced_labels(p.even)) {
                if (l.k >= 2 && l.r == 0)
                    p.coords.push_back(Rational(2 * l.k) + frac(dr.uniform(0, 2), 2));
                else if (l.k >= 1 && l.r == 1)
                    p.coords.push_back(dr.nonzero());
                else
                    p.coords.push_back(dr.rnd());
            }
        } else {
            for (int r = 1; r < p.spec.n0; ++r)
                p.coords.push_back(dr.rnd());
            for (int k = 1; k <= p.spec.m(); ++k) {
                p.coords.push_back(Rational(3 * k) + frac(dr.uniform(0, 2), 2));
                p.coords.push_back(dr.nonzero());
                for (int r = 2; r <= p.spec.n[k - 1]; ++r)
                    p.coords.push_back(dr.rnd());
            }
        }
        if (calm) {
            p.kind = PointKind::CalM;
            const Rational off[] = {frac(1, 4), frac(1, 3), frac(2, 5)};
            FactoredZeta z{frac(dr.uniform(1, 3), 1), {}};
            for (int k = 1; k <= p.spec.m(); ++k) {
                Rational c = Rational(3 * k) + frac(1, 2);
                p.disks.push_back({c, Rational(1), Rational(0), 1});
                z.roots.push_back({c + off[dr.uniform(0, 2)], 1});
                z.roots.push_back({c - off[dr.uniform(0, 2)], 1});
                z.roots.push_back({c + frac(1, 10), -1});
            }
            z.roots.push_back({Rational(-5), -1});
            fill_disk_poles(p);
            if (with_zeta)
                p.zeta = z;
        }
        LoopInput l;
        int n = p.kind == PointKind::Even ? p.even.dim() : p.spec.dim();
        for (int a = 0; a < n; ++a)
            l.ux.push_back(dr.rnd());
        l.s = frac(-7, 3);
        l.sx = dr.rnd();
        p.loop = l;
        out.push_back(std::move(p));
    }
    return out;
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw SchemaError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return Json::parse(ss.str());
    } catch (const Json::parse_error& e) {
        throw SchemaError(path + ": invalid JSON (" + e.what() + ")");
    }
}

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path dir = target.has_parent_path() ? target.parent_path() : fs::path(".");
    std::error_code ec;
    fs::create_directories(dir, ec);
    fs::path tmp = dir / ("." + target.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw SchemaError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            throw SchemaError("short write to " + tmp.string());
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw SchemaError("cannot replace " + path);
    }
}

}  // namespace owdvv
