#include <doctest.h>

#include "owdvv/cli.hpp"
#include "owdvv/io.hpp"
#include "owdvv/open_wdvv.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace owdvv;
using RF = RatFunc<Rational>;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("owdvv_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string write(const fs::path& p, const std::string& text)
{
    std::ofstream(p) << text;
    return p.string();
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kA2 = R"({"spec": {"n0": 2, "n": []}, "flat": ["1/3"]})";
const char* kM21 = R"({"spec": {"n0": 2, "n": [1]}, "flat": ["1/2", "3", "2"],
                       "loop": {"ux": ["1", "-1", "2/3"], "s": "-7/3", "sx": "1"}})";

}  // namespace

TEST_CASE("io: rationals and rational functions round-trip through JSON")
{
    CHECK(to_json(frac(-3, 6)) == Json("-1/2"));
    CHECK(rational_from_json(Json(4), "x") == Rational(4));
    CHECK(rational_from_json(Json("7/21"), "x") == frac(1, 3));
    CHECK_THROWS_AS(rational_from_json(Json(0.5), "x"), SchemaError);
    CHECK_THROWS_AS(rational_from_json(Json("a/b"), "x"), SchemaError);
    RF f = RF(Poly<Rational>({frac(1, 3), 0, 2})) + RF::pole(frac(5, 2), 2, Rational(-1)) + RF::pole(0, 1, frac(2, 7));
    Json j = to_json(f);
    CHECK(ratfunc_from_json(j, "f") == f);
    CHECK(j["parts"][0]["phi"] == "0");
    CHECK(j["parts"][1]["coeffs"][1] == "-1");
    CHECK_THROWS_AS(ratfunc_from_json(Json::array(), "f"), SchemaError);
}

TEST_CASE("io: point files round-trip and grids are deterministic")
{
    auto p = point_from_json(Json::parse(kM21), "m");
    CHECK(p.kind == PointKind::M);
    REQUIRE(p.loop.has_value());
    CHECK(p.loop->s == frac(-7, 3));
    auto q = point_from_json(to_json(p), "m");
    CHECK(q.coords == p.coords);
    CHECK(q.loop->ux == p.loop->ux);

    Json g = Json::parse(R"({"spec": {"n0": 2, "n": [1]}, "points": 3, "seed": 9, "calm": true})");
    auto a = grid_from_json(g, "g"), b = grid_from_json(g, "g");
    REQUIRE(a.size() == 3);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(canonical(to_json(a[i])) == canonical(to_json(b[i])));
        CHECK(a[i].kind == PointKind::CalM);
        CHECK(point_from_json(to_json(a[i]), "g").zeta.has_value());
        CHECK_NOTHROW(point_calm(a[i]));
    }
    CHECK_THROWS_AS(point_from_json(Json::parse(R"({"spec": {"n0": 2}, "flat": ["1", "2"]})"), "bad"), SchemaError);
    CHECK_THROWS_AS(point_from_json(Json::parse(R"({"flat": ["1"]})"), "bad"), SchemaError);
}

TEST_CASE("cli: the n0 = 2 closed form and an empty request")
{
    auto d = scratch("closed");
    auto a2 = write(d / "a2.json", kA2);
    auto r = run({"compute", "--point", a2, "--what", "fo-closed"});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["results"][0]["fo-closed"]["text"] == "2*h0,1*s + 1/3*s^3");
    auto e = run({"compute", "--point", a2});
    CHECK(e.code == 0);
    CHECK(e.out == "{}\n");
}

TEST_CASE("cli: metric output is anti-diagonal with the pole constants")
{
    auto d = scratch("metric");
    auto m = write(d / "m.json", kM21);
    auto r = run({"compute", "--point", m, "--what", "metric"});
    REQUIRE(r.code == 0);
    auto eta = Json::parse(r.out)["results"][0]["metric"]["eta"];
    CHECK(eta[0][0] == "2");
    CHECK(eta[1][2] == "1");
    CHECK(eta[2][1] == "1");
    CHECK(eta[1][1] == "0");
}

TEST_CASE("cli: determinism, --out and --window")
{
    auto d = scratch("det");
    auto g = write(d / "g.json", R"({"spec": {"n0": 2, "n": [1, 1]}, "points": 2, "seed": 3})");
    auto a = run({"compute", "--spec", g, "--what", "ell,metric,structure,fo-table"});
    auto b = run({"compute", "--spec", g, "--what", "ell,metric,structure,fo-table", "--window", "40"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto out = (d / "sub" / "o.json").string();
    CHECK(run({"compute", "--spec", g, "--what", "ell,metric,structure,fo-table", "--out", out}).code == 0);
    CHECK(slurp(out) == a.out);
    auto flows = run({"compute", "--point", write(d / "m.json", kM21), "--what", "flows", "--pmax", "1"});
    CHECK(flows.code == 0);
    CHECK(Json::parse(flows.out)["results"][0]["flows"].contains("s;1"));
}

TEST_CASE("cli: verify passes, and a corrupted structure constant is named")
{
    auto d = scratch("verify");
    auto m = write(d / "m.json", kM21);
    auto ok = run({"verify", "--point", m});
    CHECK(ok.code == 0);
    CHECK(Json::parse(ok.out)["ok"] == true);
    auto bad = run({"verify", "--point", m, "--what", "open-wdvv", "--corrupt", "c:h0,1:h1,0:h1,1"});
    CHECK(bad.code == 1);
    auto j = Json::parse(bad.out);
    CHECK(j["ok"] == false);
    auto checks = j["points"][0]["checks"][0];
    CHECK(checks["anchor"] == "open-wdvv-on-M");
    CHECK(checks["failures"][0].get<std::string>().find("(h0,1, h1,0, h1,0)") != std::string::npos);
    auto text = run({"verify", "--point", m, "--what", "algebra", "--corrupt", "c:h0,1:h1,0:h1,1", "--format", "text"});
    CHECK(text.code == 1);
    CHECK(text.out.find("FAIL m algebra") != std::string::npos);
    CHECK(text.out.find("commutativity: (h0,1, h1,0)") != std::string::npos);
}

TEST_CASE("cli: exit codes for schema errors and mathematical rejections")
{
    auto d = scratch("codes");
    CHECK(run({"compute", "--point", (d / "missing.json").string(), "--what", "ell"}).code == 2);
    CHECK(run({"compute", "--point", write(d / "junk.json", "{not json"), "--what", "ell"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"compute", "--mode", "fast"}).code == 2);
    auto a2 = write(d / "a2.json", kA2);
    CHECK(run({"compute", "--point", a2, "--what", "nonsense"}).code == 2);
    CHECK(run({"verify", "--point", a2, "--corrupt", "c:h9,9"}).code == 2);
    auto degenerate = write(d / "deg.json", R"({"spec": {"n0": 2, "n": [1]}, "flat": ["1", "0", "0"]})");
    auto r = run({"compute", "--point", degenerate, "--what", "ell", "--out", (d / "never.json").string()});
    CHECK(r.code == 3);
    CHECK(!fs::exists(d / "never.json"));
    CHECK(r.err.find("math error") != std::string::npos);
    auto m21 = write(d / "m.json", kM21);
    CHECK(run({"compute", "--point", m21, "--what", "fo-closed"}).code == 3);
}

TEST_CASE("cli: loop-space and even points, audit mode")
{
    auto d = scratch("loop");
    auto c = write(d / "c.json", R"({"spec": {"n0": 2, "n": [1]}, "points": 1, "seed": 4, "calm": true})");
    auto z = write(d / "z.json", R"({"spec": {"n0": 1, "n": [1]}, "points": 1, "seed": 4, "calm": true, "zeta": false})");
    auto e = write(d / "e.json", R"({"spec": {"even": true, "n0p": 1, "n1p": 1, "nkp": []}, "points": 1, "seed": 4})");
    auto r = run({"verify", "--spec", c, "--spec", z, "--spec", e, "--pmax", "1"});
    CHECK(r.code == 0);
    auto j = Json::parse(r.out);
    CHECK(j["points"][1]["checks"][2]["check"] == "reduction");
    auto d2 = write(d / "d2.json", R"({"spec": {"n0": 2, "n": [2]}, "flat": ["1/6", "0", "2", "0"],
        "disks": [{"center": "0", "radius": "1", "d": 2}],
        "zeta": {"c": "1", "roots": [["1/4", 1], ["-1/4", 1], ["3", -1], ["-3", -1]]}})");
    auto a = run({"verify", "--point", d2, "--mode", "audit"});
    CHECK(a.code == 0);
    auto chk = Json::parse(a.out)["points"][0]["checks"][0];
    CHECK(chk["audit"] == true);
    CHECK(std::stod(chk["max_residual"].get<std::string>()) < 1e-10);
    CHECK(run({"verify", "--point", d2, "--what", "reduction"}).code == 3);
}

TEST_CASE("cli: golden pass, drift and regeneration")
{
    auto d = scratch("golden");
    fs::create_directories(d / "inputs");
    write(d / "inputs" / "a2.json", std::string(R"({"command": "compute", "what": ["fo-closed"], "point": )") + kA2 + "}");
    write(d / "inputs" / "v.json", std::string(R"({"command": "verify", "pmax": 1, "point": )") + kM21 + "}");
    auto miss = run({"golden", "--dir", d.string()});
    CHECK(miss.code == 1);
    CHECK(miss.err.find("a2.json (missing)") != std::string::npos);
    CHECK(run({"golden", "--dir", d.string(), "--regenerate"}).code == 0);
    CHECK(run({"golden", "--dir", d.string()}).code == 0);
    CHECK(slurp(d / "expected" / "a2.json").find("1/3*s^3") != std::string::npos);
    write(d / "expected" / "v.json", slurp(d / "expected" / "v.json") + " ");
    auto drift = run({"golden", "--dir", d.string()});
    CHECK(drift.code == 1);
    CHECK(drift.err.find("drift v.json") != std::string::npos);
    CHECK(drift.err.find("a2.json") == std::string::npos);
    CHECK(run({"golden", "--dir", (d / "nowhere").string()}).code == 2);
}
