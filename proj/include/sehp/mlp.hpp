#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sehp/dense.hpp"
#include "sehp/rng.hpp"

namespace sehp {

enum class Activation : std::uint32_t { Identity = 0, Relu = 1, LeakyRelu = 2, Sigmoid = 3 };

std::string activation_name(Activation a);
Activation activation_from_name(const std::string& name);

double sigmoid(double x);

// Fully connected stack with analytic gradients. Weights are (out x in),
// biases (1 x out); forward is batched over input rows.
struct Mlp {
    struct Layer {
        Dense w;
        Dense b;
        Activation act = Activation::Identity;
    };

    std::vector<Layer> layers;

    std::size_t in_dim() const { return layers.empty() ? 0 : layers.front().w.cols; }
    std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().w.rows; }

    // widths = {in, hidden..., out}; acts.size() == widths.size() - 1.
    // Initialization is uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)].
    static Mlp create(const std::vector<std::size_t>& widths,
                      const std::vector<Activation>& acts, Rng& rng);
    static Mlp zeros(const std::vector<std::size_t>& widths,
                     const std::vector<Activation>& acts);

    std::vector<Dense*> params();
    std::vector<const Dense*> params() const;

    bool operator==(const Mlp& o) const;
};

// Intermediates retained by forward for the backward pass:
// a[0] is the input, a[l] the post-activation output of layer l-1,
// pre[l] the pre-activation of layer l.
struct MlpCache {
    std::vector<Dense> a;
    std::vector<Dense> pre;
    bool valid() const { return !a.empty(); }
};

struct MlpGrads {
    std::vector<Dense> dw;
    std::vector<Dense> db;

    static MlpGrads zeros_like(const Mlp& m);
    void zero();
    std::vector<Dense*> flat();
};

Dense mlp_forward(const Mlp& m, const Dense& x, MlpCache* cache = nullptr);

// Accumulates parameter gradients into `grads` and returns the gradient
// with respect to the input. Requires the cache written by mlp_forward.
Dense mlp_backward(const Mlp& m, const MlpCache& cache, const Dense& upstream,
                   MlpGrads& grads);

}  // namespace sehp
