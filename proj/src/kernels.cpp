#include "owdvv/kernels.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace owdvv {

void configure_threads_from_env()
{
    const char* v = std::getenv("OPENWDVV_THREADS");
    if (!v || !*v)
        return;
    int n = std::atoi(v);
    if (n > 0)
        omp_set_num_threads(n);
}

namespace detail {

void parallel_for(long n, void (*body)(long, void*), void* ctx)
{
    std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        try {
            body(i, ctx);
        } catch (...) {
#pragma omp critical(owdvv_error)
            if (!err)
                err = std::current_exception();
        }
    }
    if (err)
        std::rethrow_exception(err);
}

}  // namespace detail
}  // namespace owdvv
