// AVX2+FMA variants of the kernel table. Compiled with -mavx2 -mfma; the
// dispatcher only installs this table after a cpuid check, so nothing here
// runs on unsupported hosts.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "sehp/kernels.hpp"

namespace sehp::kernels {
namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

// crow += av * brow, n elements
inline void fma_row(double av, const double* brow, double* crow, std::size_t n) {
    const __m256d va = _mm256_set1_pd(av);
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d vb = _mm256_loadu_pd(brow + j);
        __m256d vc = _mm256_loadu_pd(crow + j);
        _mm256_storeu_pd(crow + j, _mm256_fmadd_pd(va, vb, vc));
    }
    for (; j < n; ++j) crow[j] += av * brow[j];
}

void gemm_nn_avx2(const double* a, const double* b, double* c,
                  std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t l = 0; l < k; ++l)
            fma_row(arow[l], b + l * n, crow, n);
    }
}

void gemm_nt_avx2(const double* a, const double* b, double* c,
                  std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* arow = a + i * k;
        double* crow = c + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double* brow = b + j * k;
            __m256d acc = _mm256_setzero_pd();
            std::size_t l = 0;
            for (; l + 4 <= k; l += 4)
                acc = _mm256_fmadd_pd(_mm256_loadu_pd(arow + l),
                                      _mm256_loadu_pd(brow + l), acc);
            double s = hsum(acc);
            for (; l < k; ++l) s += arow[l] * brow[l];
            crow[j] = s;
        }
    }
}

void gemm_tn_avx2(const double* a, const double* b, double* c,
                  std::size_t m, std::size_t k, std::size_t n) {
    std::memset(c, 0, m * n * sizeof(double));
    for (std::size_t l = 0; l < k; ++l) {
        const double* arow = a + l * m;
        const double* brow = b + l * n;
        for (std::size_t i = 0; i < m; ++i)
            fma_row(arow[i], brow, c + i * n, n);
    }
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double alpha, double* x, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) x[i] *= alpha;
}

void elem_max_avx2(const double* x, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(acc + i, _mm256_max_pd(_mm256_loadu_pd(acc + i),
                                                _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) acc[i] = std::max(acc[i], x[i]);
}

void elem_min_avx2(const double* x, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(acc + i, _mm256_min_pd(_mm256_loadu_pd(acc + i),
                                                _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) acc[i] = std::min(acc[i], x[i]);
}

void adam_update_avx2(double* p, double* m, double* v, const double* g,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double bc1, double bc2) {
    const __m256d vb1 = _mm256_set1_pd(beta1);
    const __m256d vb1c = _mm256_set1_pd(1.0 - beta1);
    const __m256d vb2 = _mm256_set1_pd(beta2);
    const __m256d vb2c = _mm256_set1_pd(1.0 - beta2);
    const __m256d vbc1 = _mm256_set1_pd(bc1);
    const __m256d vbc2 = _mm256_set1_pd(bc2);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d vlr = _mm256_set1_pd(lr);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vg = _mm256_loadu_pd(g + i);
        __m256d vm = _mm256_fmadd_pd(vb1c, vg, _mm256_mul_pd(vb1, _mm256_loadu_pd(m + i)));
        __m256d vv = _mm256_fmadd_pd(vb2c, _mm256_mul_pd(vg, vg),
                                     _mm256_mul_pd(vb2, _mm256_loadu_pd(v + i)));
        _mm256_storeu_pd(m + i, vm);
        _mm256_storeu_pd(v + i, vv);
        __m256d mhat = _mm256_div_pd(vm, vbc1);
        __m256d vhat = _mm256_div_pd(vv, vbc2);
        __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        __m256d step = _mm256_div_pd(_mm256_mul_pd(vlr, mhat), denom);
        _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
    }
    for (; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        p[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
}

}  // namespace

const Backend* avx2() {
    if (!__builtin_cpu_supports("avx2") || !__builtin_cpu_supports("fma"))
        return nullptr;
    static const Backend table{
        "avx2",        gemm_nn_avx2, gemm_nt_avx2, gemm_tn_avx2,
        dot_avx2,      axpy_avx2,    scale_avx2,   elem_max_avx2,
        elem_min_avx2, adam_update_avx2,
    };
    return &table;
}

}  // namespace sehp::kernels

#else

#include "sehp/kernels.hpp"

namespace sehp::kernels {
const Backend* avx2() { return nullptr; }
}  // namespace sehp::kernels

#endif
