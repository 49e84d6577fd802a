#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sehp {

// Row-major dense matrix of doubles. The workhorse container for
// parameters, activations, and gradients.
struct Dense {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> v;

    Dense() = default;
    Dense(std::size_t r, std::size_t c) : rows(r), cols(c), v(r * c, 0.0) {}
    Dense(std::size_t r, std::size_t c, std::vector<double> values);

    double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }

    double* row(std::size_t r) { return v.data() + r * cols; }
    const double* row(std::size_t r) const { return v.data() + r * cols; }
    std::span<const double> row_span(std::size_t r) const { return {row(r), cols}; }

    std::size_t size() const { return v.size(); }
    bool same_shape(const Dense& o) const { return rows == o.rows && cols == o.cols; }

    void fill(double x) { v.assign(v.size(), x); }

    bool all_finite() const;
    // throws std::runtime_error naming `what` if any value is non-finite
    void ensure_finite(const char* what) const;

    bool operator==(const Dense& o) const = default;
};

}  // namespace sehp
