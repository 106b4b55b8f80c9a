#pragma once

#include <exception>
#include <type_traits>

namespace owdvv {

/* Serial reference or OpenMP execution of an index loop. */
enum class Exec { Serial, Parallel };

/* Applies OPENWDVV_THREADS (if set) to the OpenMP runtime. */
void configure_threads_from_env();

namespace detail {
void parallel_for(long n, void (*body)(long, void*), void* ctx);
}

/* f(i) for 0 <= i < n; the first exception thrown by any iteration is rethrown. */
template <class F>
void for_each_index(Exec ex, long n, F&& f)
{
    if (ex == Exec::Serial) {
        for (long i = 0; i < n; ++i)
            f(i);
        return;
    }
    using Fn = std::remove_reference_t<F>;
    detail::parallel_for(
        n, [](long i, void* ctx) { (*static_cast<Fn*>(ctx))(i); }, const_cast<void*>(static_cast<const void*>(&f)));
}

}  // namespace owdvv
