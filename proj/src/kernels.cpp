#include "pointwave/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pointwave::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) {
        omp_set_num_threads(n);
    }
#else
    (void)n;
#endif
}

void leapfrog_interior(std::span<const double> prev, std::span<const double> curr,
                       std::span<double> next) {
    const auto n = static_cast<std::ptrdiff_t>(curr.size());
#pragma omp parallel for simd schedule(static) if (n > 4096)
    for (std::ptrdiff_t j = 1; j < n - 1; ++j) {
        next[static_cast<std::size_t>(j)] = curr[static_cast<std::size_t>(j + 1)] +
                                            curr[static_cast<std::size_t>(j - 1)] -
                                            prev[static_cast<std::size_t>(j)];
    }
}

void leapfrog_interior_serial(std::span<const double> prev, std::span<const double> curr,
                              std::span<double> next) {
    for (std::size_t j = 1; j + 1 < curr.size(); ++j) {
        next[j] = curr[j + 1] + curr[j - 1] - prev[j];
    }
}

} // namespace pointwave::kernels
