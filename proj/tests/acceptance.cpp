/* One line per acceptance criterion; exit status 1 if any fails. */

#include "owdvv/dtype.hpp"
#include "owdvv/hierarchy.hpp"
#include "owdvv/io.hpp"
#include "owdvv/open_wdvv.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace owdvv;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::vector<ManifoldSpecM> kSpecs = {{2, {}}, {3, {}}, {4, {}}, {1, {1}}, {1, {2}}, {2, {1}}, {2, {1, 1}}};

std::string spec_str(const ManifoldSpecM& s)
{
    std::string r = "(" + std::to_string(s.n0) + "," + std::to_string(s.m());
    for (size_t k = 0; k < s.n.size(); ++k)
        r += (k ? "," : ";") + std::to_string(s.n[k]);
    return r + ")";
}

std::vector<PointInput> points(const ManifoldSpecM& s, int count, int seed, bool calm = false, bool zeta = true)
{
    Json g = {{"spec", to_json(s)}, {"points", count}, {"seed", seed}, {"calm", calm}, {"zeta", zeta}};
    return grid_from_json(g, spec_str(s));
}

std::string first(const std::vector<std::string>& f) { return f.empty() ? "" : "; first: " + f[0]; }

Outcome open_wdvv_m()
{
    long eqs = 0, pts = 0;
    for (size_t i = 0; i < kSpecs.size(); ++i)
        for (auto& in : points(kSpecs[i], 5, 100 + static_cast<int>(i))) {
            PointM p = point_m(in);
            auto rep = verify_open_wdvv(fo_table(p), structure_constants(p));
            eqs += rep.checked;
            ++pts;
            if (!rep.ok())
                return {false, in.name + ": " + std::to_string(rep.failures.size()) + " nonzero residuals"};
        }
    return {true, std::to_string(pts) + " points, " + std::to_string(eqs) + " equations, all residuals zero"};
}

Outcome closed_form_a()
{
    ManifoldSpecM s{2, {}};
    auto f = fo_closed_form(s);
    MPoly h = MPoly::variable(2, 0), x = MPoly::variable(2, 1);
    MPoly want = MPoly(frac(1, 3)) * x * x * x + MPoly(Rational(2)) * h * x;
    if (!(f.F == want))
        return {false, "F^o = " + f.F.str(f.names())};
    for (auto& in : points(s, 5, 200)) {
        PointM p = point_m(in);
        auto a = closed_form_table(f, p.flat);
        auto b = fo_table(p);
        if (a.dd != b.dd || a.ds != b.ds || !(a.ss == b.ss))
            return {false, "second derivatives differ from the residue table at " + in.name};
    }
    return {true, "F^o = " + f.F.str(f.names()) + ", second derivatives equal the residue table at 5 points"};
}

Outcome metric_constants()
{
    long n = 0;
    for (size_t i = 0; i < kSpecs.size(); ++i)
        for (auto& in : points(kSpecs[i], 5, 100 + static_cast<int>(i))) {
            auto rep = check_metric_constants(point_m(in));
            n += rep.checked;
            if (!rep.ok())
                return {false, in.name + first(rep.failures)};
        }
    return {true, std::to_string(n) + " metric entries equal n0 or n_k on dual pairs and 0 elsewhere"};
}

Outcome algebra_axioms()
{
    long n = 0;
    for (size_t i = 0; i < kSpecs.size(); ++i)
        for (auto& in : points(kSpecs[i], 10, 300 + static_cast<int>(i))) {
            PointM p = point_m(in);
            auto rep = check_algebra(p, structure_constants(p));
            n += rep.checked;
            if (!rep.ok())
                return {false, in.name + first(rep.failures)};
        }
    return {true, std::to_string(n) + " unit, commutativity, associativity and invariance checks at 70 points"};
}

Outcome flatness()
{
    long n = 0;
    for (size_t i = 0; i < kSpecs.size(); ++i)
        for (auto& in : points(kSpecs[i], 3, 400 + static_cast<int>(i))) {
            auto rep = check_flat_connection(point_m(in));
            n += rep.pairs_checked;
            if (!rep.ok())
                return {false, in.name + ": " + std::to_string(rep.failures.size()) + " nonzero pairs"};
        }
    return {true, std::to_string(n) + " index pairs with zero residual (jets)"};
}

Outcome recursion()
{
    long n = 0;
    for (ManifoldSpecM s : {ManifoldSpecM{2, {}}, ManifoldSpecM{3, {}}, ManifoldSpecM{2, {1}}})
        for (auto& in : points(s, 1, 500 + s.n0)) {
            PointM p = point_m(in);
            for (Variant v : {Variant::Ext, Variant::Int}) {
                auto rep = verify_recursion(p, v, 3);
                n += rep.checked;
                if (!rep.ok()) {
                    auto& f = rep.failures[0];
                    return {false, in.name + " " + variant_name(v) + " " + f.u + ";" + std::to_string(f.p) + " along " +
                                       f.x + ": " + f.detail};
                }
            }
        }
    return {true, std::to_string(n) + " recursion identities (ext and int, p <= 3) with zero residual"};
}

std::vector<CovectorPair> covectors(int m)
{
    using RF = RatFunc<Rational>;
    RF z = RF::monomial(1, Rational(1)), z2 = RF::monomial(2, Rational(1));
    return {CovectorPair::uniform(RF(Rational(1)) + z, z2 * frac(1, 2), m),
            CovectorPair::uniform(z2 - RF(Rational(2)), RF(Rational(1)) - z * frac(2, 3), m),
            CovectorPair::uniform(z * Rational(3), z2 + z, m)};
}

Outcome calm_identities()
{
    long ids = 0, metric = 0;
    const std::vector<std::pair<ManifoldSpecM, int>> cases = {
        {{2, {1}}, 600}, {{1, {2}}, 601}, {{3, {1}}, 602}, {{1, {1, 1}}, 603}, {{2, {1, 1}}, 604}};
    for (auto& [s, seed] : cases)
        for (auto& in : points(s, 1, seed, true)) {
            PointCalM p = point_calm(in);
            auto ws = covectors(p.m());
            for (auto& w1 : ws)
                for (auto& w2 : ws) {
                    auto rep = verify_identities(p, w1, w2);
                    ids += rep.checked;
                    if (!rep.ok())
                        return {false, in.name + ": " + rep.failures[0].tag + " " + rep.failures[0].detail};
                }
            std::vector<CalMTag> tags;
            for (auto& l : flat_labels(s))
                tags.push_back(CalMTag::hl(l.k, l.r));
            for (int i = 1; i <= p.m(); ++i)
                for (int q = -2; q <= 2; ++q)
                    tags.push_back(CalMTag::t(i, q));
            std::vector<TangentCalM> T;
            for (auto& t : tags)
                T.push_back(flat_tangent(p, t));
            for (size_t a = 0; a < T.size(); ++a)
                for (size_t b = 0; b < T.size(); ++b) {
                    Rational want(0);
                    const auto &ta = tags[a], &tb = tags[b];
                    if (ta.is_t && tb.is_t && ta.i == tb.i && ta.s + tb.s == -1)
                        want = Rational(-1);
                    if (!ta.is_t && !tb.is_t) {
                        int ia = label_index(s, ta.h), ib = label_index(s, tb.h);
                        if (ib == dual_index(s, ia))
                            want = Rational(metric_constant(s, ia));
                    }
                    ++metric;
                    if (metric_eta(p, T[a], T[b]) != want)
                        return {false, in.name + ": eta(" + ta.name() + ", " + tb.name() + ") != " + to_string(want)};
                }
        }
    return {true, std::to_string(ids) + " identity residuals and " + std::to_string(metric) +
                      " metric constants exact at 5 loop-space points"};
}

Outcome reduction()
{
    long n = 0;
    for (ManifoldSpecM s : {ManifoldSpecM{2, {1}}, ManifoldSpecM{1, {2}}, ManifoldSpecM{2, {1, 1}}})
        for (auto& in : points(s, 1, 700 + s.n0 + static_cast<int>(s.n.size()), true, false)) {
            PointCalM p = point_calm(in);
            auto fo = fo_table(p.base);
            std::vector<TangentCalM> dirs;
            for (auto& l : flat_labels(s))
                dirs.push_back(flat_tangent(p, CalMTag::hl(l.k, l.r)));
            auto om = omega_table(p, dirs, TableVariant::Omega);
            n += fo.dim * fo.dim;
            if (om.dd != fo.dd)
                return {false, in.name + ": dd(Omega) != dd(F^o)"};
            for (int d = 0; d < p.m(); ++d) {
                n += fo.dim * fo.dim;
                if (omega_table(p, dirs, TableVariant::OmegaHat, d).dd != fo.dd)
                    return {false, in.name + ": dd(Omegahat) != dd(F^o) on disk " + std::to_string(d)};
            }
            auto dl = tangent_ell(p.base, in.loop->ux);
            TangentCalM X{dl, ContourFunc<Rational>::uniform(dl, p.m()), std::nullopt, std::nullopt};
            LoopPointCalM lp{p, X, in.loop->s, in.loop->sx};
            LoopPointM lm{p.base, in.loop->ux, in.loop->s, in.loop->sx};
            for (int q = 0; q <= 2; ++q) {
                std::vector<FlowIndex> us;
                for (auto& l : flat_labels(s))
                    us.push_back(FlowIndex::flat(l, q));
                us.push_back(FlowIndex::s(q));
                for (auto& u : us) {
                    auto fm = open_flow_rhs(lm, u, Variant::Ext);
                    auto fe = open_flow_rhs(lp, u, Variant::Ext);
                    ++n;
                    if (!(fe.s == fm.s) || !(fe.xi == fm.base))
                        return {false, in.name + ": ext flow " + u.name() + " differs from M"};
                    for (int d = 0; d < p.m(); ++d) {
                        auto fi = open_flow_rhs(lp, u, Variant::Int, d);
                        ++n;
                        if (!(fi.s == fe.s) || !(fi.xihat[d] == fe.xihat[d]))
                            return {false, in.name + ": int flow " + u.name() + " differs from ext"};
                    }
                }
            }
        }
    return {true, std::to_string(n) + " table entries and flow values coincide at zeta = 0"};
}

Outcome dtype()
{
    PointDHat minimal{{1, 1, {}}, {frac(1, 3), Rational(2)}};
    auto t = restricted_fo_table(minimal);
    auto in = reduced_intrinsic(minimal);
    Rational s = frac(5, 2);
    if (in.metric != std::vector<std::vector<Rational>>{{Rational(2), Rational(0)}, {Rational(0), Rational(2)}} ||
        in.tri(0, 0, 0) != Rational(4) || in.tri(0, 1, 1) != Rational(4) || in.tri(1, 1, 1) != Rational(0) ||
        t.at(1, 1).evaluate(s) != frac(-4, 5) || t.ds[1].evaluate(s) != frac(16, 25))
        return {false, "minimal even case differs from the frozen oracle tables"};
    long n = 0;
    int parity_points = 0;
    for (SpecDHat spec : {SpecDHat{1, 1, {}}, SpecDHat{2, 1, {}}}) {
        Json g = {{"spec", to_json(spec)}, {"points", 5}, {"seed", 800 + spec.n0p}};
        for (auto& p : grid_from_json(g, "even")) {
            PointDHat pd = point_dhat(p);
            auto a = restrict_structure(pd);
            auto b = verify_open_wdvv_dhat(pd);
            auto c = check_parity(pd, p.loop->ux, 2);
            n += a.checked + b.checked + c.checked;
            ++parity_points;
            if (!a.ok())
                return {false, "intrinsic vs ambient" + first(a.failures)};
            if (!b.ok())
                return {false, "restricted open WDVV: " + std::to_string(b.failures.size()) + " nonzero residuals"};
            if (!c.ok())
                return {false, "parity" + first(c.failures)};
        }
    }
    return {true, std::to_string(n) + " checks; intrinsic = ambient, restricted open WDVV zero, parity closed at " +
                      std::to_string(parity_points) + " even points"};
}

struct Proc {
    int code;
    std::string out;
};

Proc shell(const std::string& cmd)
{
    Proc r{-1, ""};
    FILE* f = popen((cmd + " 2>&1").c_str(), "r");
    if (!f)
        return r;
    std::array<char, 4096> buf;
    size_t k;
    while ((k = fread(buf.data(), 1, buf.size(), f)) > 0)
        r.out.append(buf.data(), k);
    int st = pclose(f);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism()
{
    const std::string bin = OWDVV_BIN, golden = OWDVV_GOLDEN;
    for (int run = 0; run < 2; ++run) {
        auto g = shell("'" + bin + "' golden --dir '" + golden + "'");
        if (g.code != 0)
            return {false, "golden run " + std::to_string(run + 1) + " exited " + std::to_string(g.code) + ": " + g.out};
    }
    fs::path dir = fs::temp_directory_path() / "owdvv_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::string specs;
    for (size_t i = 0; i < kSpecs.size(); ++i) {
        fs::path p = dir / ("grid" + std::to_string(i) + ".json");
        std::ofstream(p) << canonical({{"spec", to_json(kSpecs[i])}, {"points", 5}, {"seed", 100 + static_cast<int>(i)}});
        specs += " --spec '" + p.string() + "'";
    }
    for (int run = 0; run < 2; ++run) {
        auto c = shell("'" + bin + "' compute --what flat,ell,metric,structure,fo-table" + specs + " --out '" +
                       (dir / ("grid_run" + std::to_string(run) + ".json")).string() + "'");
        if (c.code != 0)
            return {false, "grid compute exited " + std::to_string(c.code)};
    }
    if (slurp(dir / "grid_run0.json") != slurp(dir / "grid_run1.json"))
        return {false, "two runs on the grid are not byte-identical"};
    fs::path pt = dir / "m21.json";
    std::ofstream(pt) << R"({"spec": {"n0": 2, "n": [1]}, "flat": ["1/2", "3", "2"]})";
    auto bad = shell("'" + bin + "' verify --point '" + pt.string() +
                     "' --what open-wdvv --corrupt c:h0,1:h1,0:h1,1 --format text");
    if (bad.code != 1)
        return {false, "fault injection exited " + std::to_string(bad.code) + " instead of 1"};
    if (bad.out.find("FAIL m21 open-wdvv") == std::string::npos ||
        bad.out.find("equation 1 at (h0,1, h1,0, h1,0)") == std::string::npos)
        return {false, "fault injection diagnostics do not name the failing triple"};
    return {true, "golden files match twice, 35-point grid byte-identical across runs, fault injection exits 1 "
                  "naming (h0,1, h1,0, h1,0)"};
}

}  // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        double limit;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> all = {
        {1, "open WDVV on M", 60, open_wdvv_m},
        {2, "A-type closed form", 1, closed_form_a},
        {3, "metric constants", 5, metric_constants},
        {4, "algebra axioms", 30, algebra_axioms},
        {5, "flatness identity", 60, flatness},
        {6, "calibration recursion", 120, recursion},
        {7, "loop-space identities and metric", 60, calm_identities},
        {8, "zeta = 0 reduction", 10, reduction},
        {9, "even (D-type) restriction", 60, dtype},
        {10, "CLI determinism and fault injection", 30, cli_determinism},
    };
    int failed = 0;
    for (auto& c : all) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (o.pass && secs > c.limit) {
            o.pass = false;
            o.detail += "; over the time limit";
        }
        char head[128];
        std::snprintf(head, sizeof head, "criterion %2d %s %-36s (%.2fs / %.0fs) ", c.id, o.pass ? "PASS" : "FAIL", c.name,
                      secs, c.limit);
        std::cout << head << o.detail << std::endl;
        failed += !o.pass;
    }
    std::cout << (all.size() - failed) << "/" << all.size() << " criteria pass" << std::endl;
    return failed ? 1 : 0;
}
