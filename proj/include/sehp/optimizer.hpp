#pragma once

#include <cstdint>
#include <vector>

#include "sehp/dense.hpp"

namespace sehp {

// Adaptive-moment gradient descent with bias correction.
struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct OptState {
    AdamConfig cfg;
    std::uint64_t step_count = 0;
    std::vector<Dense> m;
    std::vector<Dense> v;

    explicit OptState(AdamConfig c = {}) : cfg(c) {}

    // Applies one update. Moment slots are allocated lazily on first use and
    // must keep their shapes afterwards. Throws on non-finite gradients and
    // verifies parameters stay finite.
    void step(std::span<Dense* const> params, std::span<const Dense* const> grads);
};

}  // namespace sehp
