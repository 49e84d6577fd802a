#include "sehp/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "sehp/kernels.hpp"

namespace sehp {

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Identity: return "identity";
        case Activation::Relu: return "relu";
        case Activation::LeakyRelu: return "leaky_relu";
        case Activation::Sigmoid: return "sigmoid";
    }
    throw std::invalid_argument("unknown activation");
}

Activation activation_from_name(const std::string& name) {
    if (name == "identity") return Activation::Identity;
    if (name == "relu") return Activation::Relu;
    if (name == "leaky_relu") return Activation::LeakyRelu;
    if (name == "sigmoid") return Activation::Sigmoid;
    throw std::invalid_argument("unknown activation name: " + name);
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace {

constexpr double kLeakySlope = 0.01;

double activate(Activation act, double z) {
    switch (act) {
        case Activation::Identity: return z;
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::LeakyRelu: return z > 0.0 ? z : kLeakySlope * z;
        case Activation::Sigmoid: return sigmoid(z);
    }
    return z;
}

double activate_grad(Activation act, double z) {
    switch (act) {
        case Activation::Identity: return 1.0;
        case Activation::Relu: return z > 0.0 ? 1.0 : 0.0;
        case Activation::LeakyRelu: return z > 0.0 ? 1.0 : kLeakySlope;
        case Activation::Sigmoid: {
            const double s = sigmoid(z);
            return s * (1.0 - s);
        }
    }
    return 1.0;
}

void check_arch(const std::vector<std::size_t>& widths, const std::vector<Activation>& acts) {
    if (widths.size() < 2) throw std::invalid_argument("Mlp: need at least one layer");
    if (acts.size() != widths.size() - 1)
        throw std::invalid_argument("Mlp: activation count must equal layer count");
    for (std::size_t w : widths)
        if (w == 0) throw std::invalid_argument("Mlp: zero layer width");
}

}  // namespace

Mlp Mlp::create(const std::vector<std::size_t>& widths, const std::vector<Activation>& acts,
                Rng& rng) {
    check_arch(widths, acts);
    Mlp m;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        Layer layer;
        layer.w = Dense(widths[l + 1], widths[l]);
        layer.b = Dense(1, widths[l + 1]);
        layer.act = acts[l];
        const double bound = 1.0 / std::sqrt(static_cast<double>(widths[l]));
        for (double& x : layer.w.v) x = rng.uniform_real(-bound, bound);
        for (double& x : layer.b.v) x = rng.uniform_real(-bound, bound);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

Mlp Mlp::zeros(const std::vector<std::size_t>& widths, const std::vector<Activation>& acts) {
    check_arch(widths, acts);
    Mlp m;
    for (std::size_t l = 0; l + 1 < widths.size(); ++l)
        m.layers.push_back({Dense(widths[l + 1], widths[l]), Dense(1, widths[l + 1]), acts[l]});
    return m;
}

std::vector<Dense*> Mlp::params() {
    std::vector<Dense*> out;
    for (Layer& l : layers) {
        out.push_back(&l.w);
        out.push_back(&l.b);
    }
    return out;
}

std::vector<const Dense*> Mlp::params() const {
    std::vector<const Dense*> out;
    for (const Layer& l : layers) {
        out.push_back(&l.w);
        out.push_back(&l.b);
    }
    return out;
}

bool Mlp::operator==(const Mlp& o) const {
    if (layers.size() != o.layers.size()) return false;
    for (std::size_t i = 0; i < layers.size(); ++i)
        if (layers[i].w != o.layers[i].w || layers[i].b != o.layers[i].b ||
            layers[i].act != o.layers[i].act)
            return false;
    return true;
}

MlpGrads MlpGrads::zeros_like(const Mlp& m) {
    MlpGrads g;
    for (const Mlp::Layer& l : m.layers) {
        g.dw.emplace_back(l.w.rows, l.w.cols);
        g.db.emplace_back(l.b.rows, l.b.cols);
    }
    return g;
}

void MlpGrads::zero() {
    for (Dense& d : dw) d.fill(0.0);
    for (Dense& d : db) d.fill(0.0);
}

std::vector<Dense*> MlpGrads::flat() {
    std::vector<Dense*> out;
    for (std::size_t i = 0; i < dw.size(); ++i) {
        out.push_back(&dw[i]);
        out.push_back(&db[i]);
    }
    return out;
}

Dense mlp_forward(const Mlp& m, const Dense& x, MlpCache* cache) {
    if (m.layers.empty()) throw std::runtime_error("mlp_forward: empty model");
    if (x.cols != m.in_dim())
        throw std::invalid_argument("mlp_forward: input width " + std::to_string(x.cols) +
                                    " does not match layer 0 width " +
                                    std::to_string(m.in_dim()));
    const auto& K = kernels::active();
    if (cache) {
        cache->a.clear();
        cache->pre.clear();
        cache->a.push_back(x);
    }
    Dense cur = x;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const Mlp::Layer& layer = m.layers[l];
        if (cur.cols != layer.w.cols)
            throw std::invalid_argument("mlp_forward: width mismatch at layer " +
                                        std::to_string(l));
        Dense z(cur.rows, layer.w.rows);
        K.gemm_nt(cur.v.data(), layer.w.v.data(), z.v.data(), cur.rows, cur.cols, layer.w.rows);
        for (std::size_t r = 0; r < z.rows; ++r)
            K.axpy(1.0, layer.b.v.data(), z.row(r), z.cols);
        if (cache) cache->pre.push_back(z);
        Dense out(z.rows, z.cols);
        for (std::size_t i = 0; i < z.size(); ++i) out.v[i] = activate(layer.act, z.v[i]);
        if (cache) cache->a.push_back(out);
        cur = std::move(out);
    }
    return cur;
}

Dense mlp_backward(const Mlp& m, const MlpCache& cache, const Dense& upstream,
                   MlpGrads& grads) {
    if (!cache.valid()) throw std::runtime_error("mlp_backward: no forward cache");
    if (cache.pre.size() != m.layers.size())
        throw std::runtime_error("mlp_backward: cache does not match model depth");
    if (grads.dw.size() != m.layers.size())
        throw std::invalid_argument("mlp_backward: gradient holder does not match model");
    if (upstream.rows != cache.pre.back().rows || upstream.cols != cache.pre.back().cols)
        throw std::invalid_argument("mlp_backward: upstream shape mismatch");

    const auto& K = kernels::active();
    Dense delta = upstream;
    for (std::size_t li = m.layers.size(); li-- > 0;) {
        const Mlp::Layer& layer = m.layers[li];
        const Dense& z = cache.pre[li];
        const Dense& input = cache.a[li];
        // d(pre) = upstream .* act'(z)
        for (std::size_t i = 0; i < delta.size(); ++i)
            delta.v[i] *= activate_grad(layer.act, z.v[i]);
        // dW += delta^T * input,  db += column sums of delta
        Dense dw(layer.w.rows, layer.w.cols);
        K.gemm_tn(delta.v.data(), input.v.data(), dw.v.data(), delta.cols, delta.rows,
                  input.cols);
        K.axpy(1.0, dw.v.data(), grads.dw[li].v.data(), dw.size());
        for (std::size_t r = 0; r < delta.rows; ++r)
            K.axpy(1.0, delta.row(r), grads.db[li].v.data(), delta.cols);
        if (li == 0) {
            Dense dx(delta.rows, layer.w.cols);
            K.gemm_nn(delta.v.data(), layer.w.v.data(), dx.v.data(), delta.rows, delta.cols,
                      layer.w.cols);
            return dx;
        }
        Dense dx(delta.rows, layer.w.cols);
        K.gemm_nn(delta.v.data(), layer.w.v.data(), dx.v.data(), delta.rows, delta.cols,
                  layer.w.cols);
        delta = std::move(dx);
    }
    throw std::logic_error("mlp_backward: unreachable");
}

}  // namespace sehp
