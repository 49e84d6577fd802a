#pragma once

#include <cstddef>
#include <string_view>

namespace sehp::kernels {

// Dense double-precision primitives behind everything numeric in this
// project. Each entry point has a scalar reference implementation and,
// where the host supports it, a vectorized variant. The active table is
// chosen once at startup; SEHP_KERNELS=scalar|avx2 overrides it.
//
// Matrix arguments are row-major, fully packed.
struct Backend {
    const char* name;

    // c[m x n] = a[m x k] * b[k x n]
    void (*gemm_nn)(const double* a, const double* b, double* c,
                    std::size_t m, std::size_t k, std::size_t n);
    // c[m x n] = a[m x k] * b[n x k]^T
    void (*gemm_nt)(const double* a, const double* b, double* c,
                    std::size_t m, std::size_t k, std::size_t n);
    // c[m x n] = a[k x m]^T * b[k x n]
    void (*gemm_tn)(const double* a, const double* b, double* c,
                    std::size_t m, std::size_t k, std::size_t n);

    double (*dot)(const double* a, const double* b, std::size_t n);

    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    void (*scale)(double alpha, double* x, std::size_t n);

    // acc[i] = max(acc[i], x[i]) / min, used by max-min pooling
    void (*elem_max)(const double* x, double* acc, std::size_t n);
    void (*elem_min)(const double* x, double* acc, std::size_t n);

    // fused adaptive-moment update; bc1/bc2 are the bias-correction
    // denominators (1 - beta^t)
    void (*adam_update)(double* p, double* m, double* v, const double* g,
                        std::size_t n, double lr, double beta1, double beta2,
                        double eps, double bc1, double bc2);
};

const Backend& scalar();
const Backend* avx2();  // nullptr when the CPU lacks AVX2+FMA

// Active table (set once, see select()).
const Backend& active();

// Force a backend by name ("scalar", "avx2"); throws on unknown or
// unsupported. Intended for the equivalence tests.
void select(std::string_view name);

}  // namespace sehp::kernels
