#include "ocf/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define OCF_KERNELS_X86 1
#endif

namespace ocf::kernels {

void squared_distances_scalar(const double* x, const double* rows, std::size_t n,
                              std::size_t p, double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = rows + i * p;
        double acc = 0.0;
        for (std::size_t q = 0; q < p; ++q) {
            const double delta = x[q] - row[q];
            acc += delta * delta;
        }
        out[i] = acc;
    }
}

void l1_distances_scalar(const double* x, const double* rows, std::size_t n, std::size_t p,
                         double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = rows + i * p;
        double acc = 0.0;
        for (std::size_t q = 0; q < p; ++q) {
            acc += std::fabs(x[q] - row[q]);
        }
        out[i] = acc;
    }
}

#if OCF_KERNELS_X86

namespace {

__attribute__((target("avx2"))) double horizontal_sum(__m256d v) {
    const __m128d low = _mm256_castpd256_pd128(v);
    const __m128d high = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(low, high);
    const __m128d swapped = _mm_unpackhi_pd(pair, pair);
    return _mm_cvtsd_f64(_mm_add_sd(pair, swapped));
}

__attribute__((target("avx2"))) void squared_distances_avx2(const double* x, const double* rows,
                                                            std::size_t n, std::size_t p,
                                                            double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = rows + i * p;
        __m256d acc = _mm256_setzero_pd();
        std::size_t q = 0;
        for (; q + 4 <= p; q += 4) {
            const __m256d delta =
                _mm256_sub_pd(_mm256_loadu_pd(x + q), _mm256_loadu_pd(row + q));
            acc = _mm256_add_pd(acc, _mm256_mul_pd(delta, delta));
        }
        double total = horizontal_sum(acc);
        for (; q < p; ++q) {
            const double delta = x[q] - row[q];
            total += delta * delta;
        }
        out[i] = total;
    }
}

__attribute__((target("avx2"))) void l1_distances_avx2(const double* x, const double* rows,
                                                       std::size_t n, std::size_t p,
                                                       double* out) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = rows + i * p;
        __m256d acc = _mm256_setzero_pd();
        std::size_t q = 0;
        for (; q + 4 <= p; q += 4) {
            const __m256d delta =
                _mm256_sub_pd(_mm256_loadu_pd(x + q), _mm256_loadu_pd(row + q));
            acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, delta));
        }
        double total = horizontal_sum(acc);
        for (; q < p; ++q) {
            total += std::fabs(x[q] - row[q]);
        }
        out[i] = total;
    }
}

}  // namespace

#endif  // OCF_KERNELS_X86

namespace {

using DistanceFn = void (*)(const double*, const double*, std::size_t, std::size_t, double*);

struct Backend {
    DistanceFn squared;
    DistanceFn l1;
    const char* name;
};

Backend pick_backend() {
#if OCF_KERNELS_X86
    if (__builtin_cpu_supports("avx2")) {
        return {squared_distances_avx2, l1_distances_avx2, "avx2"};
    }
#endif
    return {squared_distances_scalar, l1_distances_scalar, "scalar"};
}

const Backend& backend() {
    static const Backend chosen = pick_backend();
    return chosen;
}

}  // namespace

void squared_distances(const double* x, const double* rows, std::size_t n, std::size_t p,
                       double* out) {
    backend().squared(x, rows, n, p, out);
}

void l1_distances(const double* x, const double* rows, std::size_t n, std::size_t p,
                  double* out) {
    backend().l1(x, rows, n, p, out);
}

const char* active_backend() { return backend().name; }

}  // namespace ocf::kernels
