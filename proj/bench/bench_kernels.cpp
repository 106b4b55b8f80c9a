/* Serial reference vs OpenMP kernels: wall time and agreement of results. */

#include "owdvv/dtype.hpp"
#include "owdvv/hierarchy.hpp"
#include "owdvv/io.hpp"
#include "owdvv/open_wdvv.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace owdvv;

namespace {

template <class F>
double seconds(int reps, F&& f)
{
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i)
        f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

struct Kernel {
    std::string name;
    int reps;
    std::function<std::string(Exec)> run; /* canonical result, compared across modes */
};

}  // namespace

int main(int argc, char** argv)
{
    configure_threads_from_env();
    int scale = argc > 1 ? std::max(1, std::atoi(argv[1])) : 1;
    Json g = {{"spec", {{"n0", 3}, {"n", {2, 1}}}}, {"points", 1}, {"seed", 7}};
    PointInput in = grid_from_json(g, "bench")[0];
    PointM p = point_m(in);
    PointDHat pd{{2, 1, {1}}, {}};
    {
        Json ge = {{"spec", to_json(pd.spec)}, {"points", 1}, {"seed", 8}};
        pd.hhat = grid_from_json(ge, "bench")[0].coords;
    }

    std::vector<Kernel> ks = {
        {"structure_constants", 3 * scale,
         [&](Exec ex) { return Json(to_json(structure_constants(p, ex).c[5])).dump(); }},
        {"fo_table", 3 * scale, [&](Exec ex) { return to_json(fo_table(p, ex).at(1, 2)).dump(); }},
        {"verify_open_wdvv", 2 * scale,
         [&](Exec ex) {
             auto r = verify_open_wdvv(fo_table(p, ex), structure_constants(p, ex), ex);
             return std::to_string(r.checked) + "/" + std::to_string(r.failures.size());
         }},
        {"check_flat_connection", 2 * scale,
         [&](Exec ex) {
             auto r = check_flat_connection(p, ex);
             return std::to_string(r.pairs_checked) + "/" + std::to_string(r.failures.size());
         }},
        {"verify_recursion p<=2", scale,
         [&](Exec ex) {
             auto r = verify_recursion(p, Variant::Ext, 2, ex);
             return std::to_string(r.checked) + "/" + std::to_string(r.failures.size());
         }},
        {"restrict_structure (even)", scale,
         [&](Exec ex) {
             auto r = restrict_structure(pd, ex);
             return std::to_string(r.checked) + "/" + std::to_string(r.failures.size());
         }},
    };

    std::printf("threads: %d, point %s, dim %d\n", omp_get_max_threads(), in.name.c_str(), p.dim());
    std::printf("%-28s %12s %12s %8s  %s\n", "kernel", "serial [s]", "parallel [s]", "speedup", "results");
    int mismatch = 0;
    for (auto& k : ks) {
        std::string rs, rp;
        double ts = seconds(k.reps, [&] { rs = k.run(Exec::Serial); });
        double tp = seconds(k.reps, [&] { rp = k.run(Exec::Parallel); });
        bool same = rs == rp;
        mismatch += !same;
        std::printf("%-28s %12.4f %12.4f %8.2f  %s\n", k.name.c_str(), ts, tp, ts / tp, same ? "equal" : "DIFFER");
    }
    return mismatch ? 1 : 0;
}
