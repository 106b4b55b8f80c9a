#include "owdvv/cli.hpp"

#include "owdvv/hierarchy.hpp"
#include "owdvv/io.hpp"
#include "owdvv/open_wdvv.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace owdvv {

namespace {

namespace fs = std::filesystem;

struct RunConfig {
    std::string command;
    std::vector<std::string> points;
    std::vector<std::string> specs;
    std::vector<std::string> what;
    int pmax = -1;
    int window = 0;
    std::string mode = "exact";
    double tolerance = 1e-10;
    int samples = 4096;
    std::string out;
    std::string format = "json";
    std::string corrupt;
    std::string dir = "tests/golden";
    bool regenerate = false;
};

struct Corruption {
    bool active = false;
    FlatLabel a, b, d;
};

Corruption parse_corrupt(const std::string& s)
{
    Corruption c;
    if (s.empty())
        return c;
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':'))
        parts.push_back(item);
    if (parts.size() != 4 || parts[0] != "c")
        throw SchemaError("--corrupt expects c:<label>:<label>:<label>, e.g. c:h0,1:h0,1:h0,1");
    c.active = true;
    c.a = parse_label(parts[1]);
    c.b = parse_label(parts[2]);
    c.d = parse_label(parts[3]);
    return c;
}

std::vector<std::string> split_what(const std::vector<std::string>& in)
{
    std::vector<std::string> out;
    for (auto& w : in) {
        std::stringstream ss(w);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty())
                out.push_back(item);
    }
    return out;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::vector<PointInput> load_inputs(const RunConfig& cfg)
{
    std::vector<PointInput> out;
    for (auto& p : cfg.points)
        out.push_back(point_from_json(read_json_file(p), stem_of(p)));
    for (auto& s : cfg.specs)
        for (auto& p : grid_from_json(read_json_file(s), stem_of(s)))
            out.push_back(std::move(p));
    return out;
}

Json matrix_json(const std::vector<std::vector<Rational>>& m)
{
    Json rows = Json::array();
    for (auto& r : m) {
        Json row = Json::array();
        for (auto& x : r)
            row.push_back(to_json(x));
        rows.push_back(row);
    }
    return rows;
}

Json constants_json(const StructureConstants& c)
{
    Json out = Json::array();
    for (int a = 0; a < c.dim; ++a) {
        Json ra = Json::array();
        for (int b = 0; b < c.dim; ++b) {
            Json rb = Json::array();
            for (int d = 0; d < c.dim; ++d)
                rb.push_back(to_json(c.at(a, b, d)));
            ra.push_back(rb);
        }
        out.push_back(ra);
    }
    return out;
}

Json table_json(const SecondDerivTable& t)
{
    Json dd = Json::array();
    for (int a = 0; a < t.dim; ++a) {
        Json row = Json::array();
        for (int b = 0; b < t.dim; ++b)
            row.push_back(to_json(t.at(a, b)));
        dd.push_back(row);
    }
    Json ds = Json::array();
    for (auto& f : t.ds)
        ds.push_back(to_json(f));
    return {{"variant", variant_name(t.variant)}, {"dd", dd}, {"ds", ds}, {"ss", to_json(t.ss)}};
}

std::vector<std::string> label_names(const ManifoldSpecM& spec)
{
    std::vector<std::string> out;
    for (auto& l : flat_labels(spec))
        out.push_back(label_name(l));
    return out;
}

std::vector<FlowIndex> all_flows(const ManifoldSpecM& spec, int p)
{
    std::vector<FlowIndex> out;
    for (auto& l : flat_labels(spec))
        out.push_back(FlowIndex::flat(l, p));
    out.push_back(FlowIndex::s(p));
    return out;
}

LoopInput loop_or_default(const PointInput& in, int dim)
{
    if (in.loop)
        return *in.loop;
    return {std::vector<Rational>(dim, Rational(1)), frac(-7, 3), Rational(1)};
}

std::vector<TangentCalM> h_tangents(const PointCalM& p)
{
    std::vector<TangentCalM> out;
    for (auto& l : flat_labels(p.base.spec))
        out.push_back(flat_tangent(p, CalMTag::hl(l.k, l.r)));
    return out;
}

/* Flat tags of the loop space used for tables: every h label and t_{i,s}, |s| <= 2, on disks with d = 1. */
std::vector<CalMTag> calm_tags(const PointCalM& p, bool with_t)
{
    std::vector<CalMTag> out;
    for (auto& l : flat_labels(p.base.spec))
        out.push_back(CalMTag::hl(l.k, l.r));
    if (with_t && !p.zeta_vanishes())
        for (int i = 1; i <= p.m(); ++i)
            if (p.cfg.disks[i - 1].d == 1)
                for (int s = -2; s <= 2; ++s)
                    out.push_back(CalMTag::t(i, s));
    return out;
}

std::vector<CovectorPair> test_covectors(int m)
{
    using RF = RatFunc<Rational>;
    RF z = RF::monomial(1, Rational(1));
    RF z2 = RF::monomial(2, Rational(1));
    return {CovectorPair::uniform(RF(Rational(1)) + z, z2 * frac(1, 2), m),
            CovectorPair::uniform(z2 - RF(Rational(2)), RF(Rational(1)) - z, m),
            CovectorPair::uniform(z * Rational(3), z2 + z, m)};
}

/* ---- compute ---- */

Json compute_point(const PointInput& in, const std::vector<std::string>& what, const RunConfig& cfg)
{
    Json r;
    r["input"] = in.name;
    r["kind"] = kind_name(in.kind);
    int pmax = cfg.pmax < 0 ? 2 : cfg.pmax;
    auto unknown = [&](const std::string& w) {
        return SchemaError("unknown --what item '" + w + "' for a point of kind " + kind_name(in.kind));
    };
    if (in.kind == PointKind::M) {
        PointM pt = point_m(in);
        auto names = label_names(pt.spec);
        for (auto& w : what) {
            if (w == "flat") {
                Json f;
                for (int a = 0; a < pt.dim(); ++a)
                    f[names[a]] = to_json(pt.flat[a]);
                r[w] = f;
            } else if (w == "ell") {
                r[w] = to_json(pt.ell);
            } else if (w == "metric") {
                r[w] = {{"labels", names}, {"eta", matrix_json(metric_matrix(pt))}};
            } else if (w == "structure") {
                r[w] = {{"labels", names}, {"c", constants_json(structure_constants(pt))}};
            } else if (w == "tangents") {
                Json t;
                for (int a = 0; a < pt.dim(); ++a)
                    t[names[a]] = to_json(pt.tangents[a]);
                r[w] = t;
            } else if (w == "fo-table") {
                r[w] = table_json(fo_table(pt));
            } else if (w == "fo-closed") {
                if (pt.spec.m() != 0)
                    throw MathError("the closed form of F^o needs m = 0");
                auto f = fo_closed_form(pt.spec);
                r[w] = to_json(f.F, f.names());
            } else if (w == "flows") {
                auto loop = loop_or_default(in, pt.dim());
                LoopPointM lp{pt, loop.ux, loop.s, loop.sx};
                Json fl = Json::object();
                for (int p = 0; p <= pmax; ++p)
                    for (auto& u : all_flows(pt.spec, p)) {
                        auto e = open_flow_rhs(lp, u, Variant::Ext);
                        Json ints = Json::array();
                        for (int d = 0; d < pt.spec.m(); ++d) {
                            auto f = open_flow_rhs(lp, u, Variant::Int, d);
                            ints.push_back({{"disk", d}, {"base", to_json(f.base)}, {"s", to_json(f.s)}});
                        }
                        fl[u.name()] = {{"ext", {{"base", to_json(e.base)}, {"s", to_json(e.s)}}}, {"int", ints}};
                    }
                r[w] = fl;
            } else {
                throw unknown(w);
            }
        }
    } else if (in.kind == PointKind::Even) {
        PointDHat pd = point_dhat(in);
        auto names = reduced_names(pd.spec);
        for (auto& w : what) {
            if (w == "flat") {
                PointM pt = embed(pd);
                auto an = label_names(pt.spec);
                Json red, amb;
                for (size_t a = 0; a < names.size(); ++a)
                    red[names[a]] = to_json(pd.hhat[a]);
                for (size_t a = 0; a < an.size(); ++a)
                    amb[an[a]] = to_json(pt.flat[a]);
                r[w] = {{"reduced", red}, {"ambient", amb}};
            } else if (w == "ell") {
                r[w] = to_json(embed(pd).ell);
            } else if (w == "metric") {
                r[w] = {{"labels", names}, {"eta", matrix_json(reduced_intrinsic(pd).metric)}};
            } else if (w == "structure") {
                r[w] = {{"labels", names}, {"c", constants_json(reduced_pushforward(pd).c)}};
            } else if (w == "triples") {
                auto s = reduced_intrinsic(pd);
                Json t = Json::array();
                for (int a = 0; a < s.dim; ++a) {
                    Json ra = Json::array();
                    for (int b = 0; b < s.dim; ++b) {
                        Json rb = Json::array();
                        for (int d = 0; d < s.dim; ++d)
                            rb.push_back(to_json(s.tri(a, b, d)));
                        ra.push_back(rb);
                    }
                    t.push_back(ra);
                }
                r[w] = {{"labels", names}, {"c3", t}};
            } else if (w == "fo-table") {
                r[w] = table_json(restricted_fo_table(pd));
            } else {
                throw unknown(w);
            }
        }
    } else {
        PointCalM p = point_calm(in);
        for (auto& w : what) {
            if (w == "ell") {
                r[w] = to_json(p.ell);
            } else if (w == "zeta") {
                r[w] = to_json(p.zeta);
            } else if (w == "metric") {
                auto tags = calm_tags(p, true);
                std::vector<TangentCalM> T;
                Json names = Json::array();
                for (auto& t : tags) {
                    T.push_back(flat_tangent(p, t));
                    names.push_back(t.name());
                }
                std::vector<std::vector<Rational>> m(T.size(), std::vector<Rational>(T.size()));
                for (size_t a = 0; a < T.size(); ++a)
                    for (size_t b = 0; b < T.size(); ++b)
                        m[a][b] = metric_eta(p, T[a], T[b]);
                r[w] = {{"labels", names}, {"eta", matrix_json(m)}};
            } else if (w == "omega-table") {
                auto dirs = h_tangents(p);
                Json hat = Json::array();
                for (int d = 0; d < p.m(); ++d)
                    hat.push_back(table_json(omega_table(p, dirs, TableVariant::OmegaHat, d)));
                r[w] = {{"labels", label_names(p.base.spec)},
                        {"omega", table_json(omega_table(p, dirs, TableVariant::Omega))},
                        {"omegahat", hat}};
            } else {
                throw unknown(w);
            }
        }
    }
    return r;
}

Json compute_artifact(const std::vector<PointInput>& inputs, const RunConfig& cfg)
{
    auto what = split_what(cfg.what);
    if (what.empty())
        return Json::object();
    Json results = Json::array();
    for (auto& in : inputs)
        results.push_back(compute_point(in, what, cfg));
    return {{"command", "compute"}, {"mode", cfg.mode}, {"results", results}};
}

/* ---- verify ---- */

struct Check {
    std::string name;
    std::string anchor;
    long checked = 0;
    std::vector<std::string> failures;
    bool audit = false;
    double max_residual = 0;

    Json json(double tol) const
    {
        Json f = Json::array();
        for (size_t i = 0; i < failures.size() && i < 20; ++i)
            f.push_back(failures[i]);
        Json j = {{"check", name},       {"anchor", anchor},
                  {"checked", checked},  {"ok", failures.empty()},
                  {"failures", f},       {"failure_count", failures.size()}};
        if (audit) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3e", max_residual);
            j["audit"] = true;
            j["max_residual"] = buf;
            std::snprintf(buf, sizeof buf, "%.1e", tol);
            j["tolerance"] = buf;
        }
        return j;
    }
};

std::string triple_name(const std::vector<std::string>& names, int a, int b, int c)
{
    return "(" + names[a] + ", " + names[b] + ", " + names[c] + ")";
}

std::vector<std::string> default_checks(const PointInput& in, const PointCalM* p, bool audit)
{
    switch (in.kind) {
    case PointKind::M:
        return {"open-wdvv", "metric-constants", "algebra", "flatness", "recursion"};
    case PointKind::Even:
        return {"dhat-structure", "dhat-open-wdvv", "dhat-parity"};
    case PointKind::CalM:
        if (audit)
            return {"audit"};
        if (p && p->zeta_vanishes())
            return {"identities", "calm-metric", "reduction"};
        return {"identities", "calm-metric", "calm-open-wdvv"};
    }
    return {};
}

Check verify_m(const PointInput& in, const std::string& w, const RunConfig& cfg, const Corruption& corrupt)
{
    PointM pt = point_m(in);
    auto names = label_names(pt.spec);
    auto constants = [&] {
        auto sc = structure_constants(pt);
        if (corrupt.active)
            sc.at(label_index(pt.spec, corrupt.a), label_index(pt.spec, corrupt.b), label_index(pt.spec, corrupt.d)) +=
                Rational(1);
        return sc;
    };
    Check c{w, "", 0, {}};
    if (w == "open-wdvv") {
        c.anchor = "open-wdvv-on-M";
        auto rep = verify_open_wdvv(fo_table(pt), constants());
        c.checked = rep.checked;
        for (auto& f : rep.failures)
            c.failures.push_back(f.equation == 1 ? "equation 1 at " + triple_name(names, f.a, f.b, f.c)
                                                 : "equation 2 at (" + names[f.a] + ", " + names[f.b] + ")");
    } else if (w == "metric-constants") {
        c.anchor = "flat-metric-constants";
        auto rep = check_metric_constants(pt);
        c.checked = rep.checked;
        c.failures = rep.failures;
    } else if (w == "algebra") {
        c.anchor = "frobenius-algebra";
        auto rep = check_algebra(pt, constants());
        c.checked = rep.checked;
        c.failures = rep.failures;
    } else if (w == "flatness") {
        c.anchor = "flat-connection";
        auto rep = check_flat_connection(pt);
        c.checked = rep.pairs_checked;
        for (auto& f : rep.failures)
            c.failures.push_back("(" + names[f.alpha] + ", " + names[f.beta] + ")");
    } else if (w == "recursion") {
        c.anchor = "calibration-recursion";
        int pmax = cfg.pmax < 0 ? 3 : cfg.pmax;
        for (Variant v : {Variant::Ext, Variant::Int}) {
            auto rep = verify_recursion(pt, v, pmax);
            c.checked += rep.checked;
            for (auto& f : rep.failures)
                c.failures.push_back(variant_name(v) + " " + f.u + ";" + std::to_string(f.p) + " along " + f.x + ": " +
                                     f.detail);
        }
    } else {
        throw SchemaError("unknown check '" + w + "' for a point of kind M");
    }
    return c;
}

Check verify_even(const PointInput& in, const std::string& w, const RunConfig& cfg)
{
    PointDHat pd = point_dhat(in);
    Check c{w, "even-reduction", 0, {}};
    if (w == "dhat-structure") {
        auto rep = restrict_structure(pd);
        c.checked = rep.checked;
        c.failures = rep.failures;
    } else if (w == "dhat-open-wdvv") {
        auto rep = verify_open_wdvv_dhat(pd);
        auto names = reduced_names(pd.spec);
        c.checked = rep.checked;
        for (auto& f : rep.failures)
            c.failures.push_back(f.equation == 1 ? "equation 1 at " + triple_name(names, f.a, f.b, f.c)
                                                 : "equation 2 at (" + names[f.a] + ", " + names[f.b] + ")");
    } else if (w == "dhat-parity") {
        auto loop = loop_or_default(in, pd.spec.dim());
        auto rep = check_parity(pd, loop.ux, cfg.pmax < 0 ? 2 : cfg.pmax);
        c.checked = rep.checked;
        c.failures = rep.failures;
    } else {
        throw SchemaError("unknown check '" + w + "' for an even point");
    }
    return c;
}

Check verify_calm(const PointInput& in, const PointCalM& p, const std::string& w, const RunConfig& cfg)
{
    Check c{w, "", 0, {}};
    if (w == "identities") {
        c.anchor = "loop-space-identities";
        auto ws = test_covectors(p.m());
        for (size_t i = 0; i < ws.size(); ++i)
            for (size_t j = 0; j < ws.size(); ++j) {
                auto rep = verify_identities(p, ws[i], ws[j]);
                c.checked += rep.checked;
                for (auto& f : rep.failures)
                    c.failures.push_back(f.tag + " (w" + std::to_string(i) + ", w" + std::to_string(j) + "): " + f.detail);
            }
    } else if (w == "calm-metric") {
        c.anchor = "loop-space-metric-constants";
        auto tags = calm_tags(p, true);
        std::vector<TangentCalM> T;
        for (auto& t : tags)
            T.push_back(flat_tangent(p, t));
        const auto& spec = p.base.spec;
        for (size_t a = 0; a < T.size(); ++a)
            for (size_t b = 0; b < T.size(); ++b) {
                Rational want(0);
                const auto &ta = tags[a], &tb = tags[b];
                if (ta.is_t && tb.is_t) {
                    int d = p.cfg.disks[ta.i - 1].d;
                    if (ta.i == tb.i && ta.s + tb.s == -d)
                        want = Rational(-d);
                } else if (!ta.is_t && !tb.is_t) {
                    int ia = label_index(spec, ta.h), ib = label_index(spec, tb.h);
                    if (ib == dual_index(spec, ia))
                        want = Rational(metric_constant(spec, ia));
                }
                ++c.checked;
                Rational got = metric_eta(p, T[a], T[b]);
                if (got != want)
                    c.failures.push_back("eta(" + ta.name() + ", " + tb.name() + ") = " + to_string(got) +
                                         ", expected " + to_string(want));
            }
    } else if (w == "calm-open-wdvv") {
        c.anchor = "loop-space-open-wdvv";
        auto frame = test_covectors(p.m());
        if (!p.zeta_vanishes() && p.m() > 0 && p.cfg.disks[0].d == 1)
            frame.push_back(flat_tangent(p, CalMTag::t(1, 1)).pre.value());
        auto add = [&](const OpenWdvvReport& rep, const std::string& tag) {
            c.checked += rep.checked;
            for (auto& f : rep.failures)
                c.failures.push_back(tag + " equation " + std::to_string(f.equation) + " at frame (" +
                                     std::to_string(f.a) + ", " + std::to_string(f.b) + ", " + std::to_string(f.c) + ")");
        };
        add(verify_open_wdvv_calm(p, frame, TableVariant::Omega), "Omega");
        for (int d = 0; d < p.m(); ++d)
            add(verify_open_wdvv_calm(p, frame, TableVariant::OmegaHat, d), "Omegahat disk " + std::to_string(d));
    } else if (w == "reduction") {
        c.anchor = "zeta-zero-reduction";
        if (!p.zeta_vanishes())
            throw MathError("the reduction check needs zeta = 0");
        auto fo = fo_table(p.base);
        auto dirs = h_tangents(p);
        auto names = label_names(p.base.spec);
        auto om = omega_table(p, dirs, TableVariant::Omega);
        for (int a = 0; a < fo.dim; ++a)
            for (int b = 0; b < fo.dim; ++b) {
                ++c.checked;
                if (om.at(a, b) != fo.at(a, b))
                    c.failures.push_back("dd Omega (" + names[a] + ", " + names[b] + ") differs from F^o");
            }
        for (int d = 0; d < p.m(); ++d) {
            auto oh = omega_table(p, dirs, TableVariant::OmegaHat, d);
            for (int a = 0; a < fo.dim; ++a)
                for (int b = 0; b < fo.dim; ++b) {
                    ++c.checked;
                    if (oh.at(a, b) != fo.at(a, b))
                        c.failures.push_back("dd Omegahat disk " + std::to_string(d) + " (" + names[a] + ", " +
                                             names[b] + ") differs from F^o");
                }
        }
        auto loop = loop_or_default(in, p.base.dim());
        auto dl = tangent_ell(p.base, loop.ux);
        TangentCalM X{dl, ContourFunc<Rational>::uniform(dl, p.m()), std::nullopt, std::nullopt};
        LoopPointCalM lp{p, X, loop.s, loop.sx};
        LoopPointM lm{p.base, loop.ux, loop.s, loop.sx};
        int pmax = cfg.pmax < 0 ? 2 : cfg.pmax;
        for (int q = 0; q <= pmax; ++q)
            for (auto& u : all_flows(p.base.spec, q)) {
                auto fm = open_flow_rhs(lm, u, Variant::Ext);
                auto fe = open_flow_rhs(lp, u, Variant::Ext);
                ++c.checked;
                if (!(fe.s == fm.s) || !(fe.xi == fm.base))
                    c.failures.push_back("ext flow " + u.name() + " differs from the flow on M");
                for (int d = 0; d < p.m(); ++d) {
                    auto fi = open_flow_rhs(lp, u, Variant::Int, d);
                    ++c.checked;
                    if (!(fi.s == fe.s) || !(fi.xihat[d] == fe.xihat[d]))
                        c.failures.push_back("int flow " + u.name() + " on disk " + std::to_string(d) +
                                             " differs from ext");
                }
            }
    } else if (w == "audit") {
        c.anchor = "loop-space-metric-constants";
        c.audit = true;
        for (int i = 1; i <= p.m(); ++i) {
            int d = p.cfg.disks[i - 1].d;
            for (int s1 = -2; s1 <= 1; ++s1)
                for (int s2 = -2; s2 <= 1; ++s2) {
                    auto r = audit_t_metric(p, i, s1, s2, cfg.samples);
                    ++c.checked;
                    double res = static_cast<double>(r.residual);
                    c.max_residual = std::max(c.max_residual, res);
                    long double want = (s1 + s2 == -d) ? -d : 0;
                    if (!(res <= cfg.tolerance) || r.expected != want) {
                        char buf[160];
                        std::snprintf(buf, sizeof buf, "t%d,%d x t%d,%d: residual %.3e", i, s1, i, s2, res);
                        c.failures.push_back(buf);
                    }
                }
        }
    } else {
        throw SchemaError("unknown check '" + w + "' for a loop-space point");
    }
    return c;
}

Json verify_report(const std::vector<PointInput>& inputs, const RunConfig& cfg, bool& ok)
{
    auto requested = split_what(cfg.what);
    Corruption corrupt = parse_corrupt(cfg.corrupt);
    bool audit = cfg.mode == "audit";
    ok = true;
    Json points = Json::array();
    for (auto& in : inputs) {
        if (corrupt.active && in.kind != PointKind::M)
            throw SchemaError("--corrupt applies to points of M only");
        std::optional<PointCalM> p;
        if (in.kind == PointKind::CalM)
            p = point_calm(in);
        auto what = requested.empty() ? default_checks(in, p ? &*p : nullptr, audit) : requested;
        Json checks = Json::array();
        for (auto& w : what) {
            Check c = in.kind == PointKind::M      ? verify_m(in, w, cfg, corrupt)
                      : in.kind == PointKind::Even ? verify_even(in, w, cfg)
                                                   : verify_calm(in, *p, w, cfg);
            ok = ok && c.failures.empty();
            checks.push_back(c.json(cfg.tolerance));
        }
        points.push_back({{"input", in.name}, {"kind", kind_name(in.kind)}, {"checks", checks}});
    }
    return {{"command", "verify"}, {"mode", cfg.mode}, {"ok", ok}, {"points", points}};
}

/* ---- output ---- */

void flatten(const Json& j, const std::string& path, std::ostream& os)
{
    if (j.is_object()) {
        for (auto& [k, v] : j.items())
            flatten(v, path.empty() ? k : path + "." + k, os);
    } else if (j.is_array()) {
        for (size_t i = 0; i < j.size(); ++i)
            flatten(j[i], path + "[" + std::to_string(i) + "]", os);
    } else {
        os << path << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
    }
}

std::string render(const Json& j, const RunConfig& cfg)
{
    if (cfg.format == "json")
        return canonical(j);
    std::ostringstream os;
    if (cfg.command == "verify") {
        for (auto& p : j["points"])
            for (auto& c : p["checks"]) {
                os << (c["ok"].get<bool>() ? "PASS " : "FAIL ") << p["input"].get<std::string>() << " "
                   << c["check"].get<std::string>() << " [" << c["anchor"].get<std::string>()
                   << "] checked=" << c["checked"].get<long>();
                if (c.contains("audit"))
                    os << " audit max_residual=" << c["max_residual"].get<std::string>();
                os << "\n";
                for (auto& f : c["failures"])
                    os << "  - " << f.get<std::string>() << "\n";
            }
        os << (j["ok"].get<bool>() ? "OK" : "FAILED") << "\n";
    } else {
        flatten(j, "", os);
    }
    return os.str();
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out)
{
    if (cfg.out.empty())
        out << text;
    else
        write_atomic(cfg.out, text);
}

/* ---- golden ---- */

/* A golden input: {"command", "what", "pmax", "point" | "grid"}. */
std::string golden_output(const std::string& path)
{
    Json j = read_json_file(path);
    RunConfig cfg;
    cfg.command = j.value("command", "compute");
    if (j.contains("what"))
        cfg.what = j["what"].get<std::vector<std::string>>();
    cfg.pmax = j.value("pmax", -1);
    std::string name = stem_of(path);
    std::vector<PointInput> inputs;
    if (j.contains("point"))
        inputs.push_back(point_from_json(j["point"], name));
    if (j.contains("grid"))
        for (auto& p : grid_from_json(j["grid"], name))
            inputs.push_back(std::move(p));
    if (cfg.command == "compute")
        return canonical(compute_artifact(inputs, cfg));
    if (cfg.command == "verify") {
        bool ok = true;
        return canonical(verify_report(inputs, cfg, ok));
    }
    throw SchemaError(path + ": unknown command '" + cfg.command + "'");
}

int run_golden(const RunConfig& cfg, std::ostream& out, std::ostream& err)
{
    fs::path inputs = fs::path(cfg.dir) / "inputs";
    fs::path expected = fs::path(cfg.dir) / "expected";
    if (!fs::is_directory(inputs))
        throw SchemaError("golden directory " + inputs.string() + " not found");
    std::vector<fs::path> files;
    for (auto& e : fs::directory_iterator(inputs))
        if (e.path().extension() == ".json")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<std::pair<fs::path, std::string>> outputs;
    for (auto& f : files)
        outputs.push_back({expected / (f.stem().string() + ".json"), golden_output(f.string())});
    if (cfg.regenerate) {
        for (auto& [path, text] : outputs)
            write_atomic(path.string(), text);
        out << "regenerated " << outputs.size() << " golden files\n";
        return 0;
    }
    std::vector<std::string> drift;
    for (auto& [path, text] : outputs) {
        std::ifstream in(path, std::ios::binary);
        std::stringstream ss;
        if (in)
            ss << in.rdbuf();
        if (!in || ss.str() != text)
            drift.push_back(path.filename().string() + (in ? "" : " (missing)"));
        else
            out << "ok " << path.filename().string() << "\n";
    }
    if (!drift.empty()) {
        for (auto& d : drift)
            err << "drift " << d << "\n";
        return 1;
    }
    out << "golden: " << outputs.size() << " files match\n";
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--point", cfg.points, "point JSON file (repeatable)");
    sub->add_option("--spec", cfg.specs, "grid JSON file: spec, points, seed (repeatable)");
    sub->add_option("--what", cfg.what, "comma-separated objects or checks");
    sub->add_option("--pmax", cfg.pmax, "highest flow degree p")->check(CLI::Range(0, 8));
    sub->add_option("--window", cfg.window, "initial series window")->check(CLI::Range(0, 4096));
    sub->add_option("--mode", cfg.mode, "exact or audit")->check(CLI::IsMember({"exact", "audit"}));
    sub->add_option("--tolerance", cfg.tolerance, "audit tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.samples, "audit quadrature samples")->check(CLI::Range(16, 1 << 20));
    sub->add_option("--out", cfg.out, "output file (written atomically)");
    sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig cfg;
    CLI::App app{"Exact open WDVV, Frobenius structures and hierarchy flows"};
    app.require_subcommand(1);
    auto* compute = app.add_subcommand("compute", "emit objects at points as canonical JSON");
    auto* verify = app.add_subcommand("verify", "run verification suites; exit 1 on any nonzero residual");
    auto* golden = app.add_subcommand("golden", "compare canonical outputs with stored golden files");
    add_common(compute, cfg);
    add_common(verify, cfg);
    verify->add_option("--corrupt", cfg.corrupt, "fault injection: c:<a>:<b>:<d> adds 1 to c_ab^d");
    golden->add_option("--dir", cfg.dir, "golden directory with inputs/ and expected/");
    golden->add_flag("--regenerate", cfg.regenerate, "rewrite the expected files");

    std::vector<std::string> store{"owdvv"};
    store.insert(store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : store)
        argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "owdvv: " << e.what() << "\n";
        return 2;
    }
    for (auto* s : {compute, verify, golden})
        if (s->parsed())
            cfg.command = s->get_name();

    configure_threads_from_env();
    if (cfg.window > 0)
        set_window_floor(cfg.window);
    auto fail = [&](const char* kind, const std::string& msg, int code) {
        err << "owdvv: " << kind << " error: " << msg << "\n";
        if (cfg.command != "golden" && cfg.format == "json" && cfg.out.empty())
            out << canonical({{"error", {{"kind", kind}, {"message", msg}}}});
        return code;
    };
    try {
        if (cfg.command == "golden")
            return run_golden(cfg, out, err);
        auto inputs = load_inputs(cfg);
        if (cfg.command == "compute") {
            emit(render(compute_artifact(inputs, cfg), cfg), cfg, out);
            return 0;
        }
        bool ok = true;
        Json rep = verify_report(inputs, cfg, ok);
        emit(render(rep, cfg), cfg, out);
        return ok ? 0 : 1;
    } catch (const SchemaError& e) {
        return fail("schema", e.what(), 2);
    } catch (const MathError& e) {
        return fail("math", e.what(), 3);
    } catch (const Json::exception& e) {
        return fail("schema", e.what(), 2);
    } catch (const std::filesystem::filesystem_error& e) {
        return fail("schema", e.what(), 2);
    }
}

}  // namespace owdvv
