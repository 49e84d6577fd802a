#include "sehp/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sehp/kernels.hpp"

namespace sehp {

std::vector<double> readout_condition(const Dense& V) {
    if (V.rows == 0) throw std::invalid_argument("readout_condition: empty embeddings");
    const auto& K = kernels::active();
    std::vector<double> mean(V.cols, 0.0);
    for (std::size_t r = 0; r < V.rows; ++r) K.axpy(1.0, V.row(r), mean.data(), V.cols);
    K.scale(1.0 / static_cast<double>(V.rows), mean.data(), V.cols);
    return mean;
}

Mlp make_denoiser(std::size_t h, bool timestep_input, Rng& rng) {
    const std::size_t in = 2 * h + (timestep_input ? 1 : 0);
    return Mlp::create({in, 2 * h, h}, {Activation::LeakyRelu, Activation::Identity}, rng);
}

Mlp make_zero_denoiser(std::size_t h, bool timestep_input) {
    const std::size_t in = 2 * h + (timestep_input ? 1 : 0);
    return Mlp::zeros({in, 2 * h, h}, {Activation::LeakyRelu, Activation::Identity});
}

Mlp make_extractor(std::size_t h, Rng& rng) {
    return Mlp::create({2 * h, h, 1}, {Activation::LeakyRelu, Activation::Identity}, rng);
}

Mlp make_noise_generator(std::size_t h, Rng& rng) {
    return Mlp::create({h, 2 * h, h}, {Activation::LeakyRelu, Activation::Identity}, rng);
}

namespace {

Dense chain_input(std::span<const double> state, std::span<const double> condition,
                  bool timestep_input, double t_norm) {
    const std::size_t h = state.size();
    Dense x(1, 2 * h + (timestep_input ? 1 : 0));
    std::copy(state.begin(), state.end(), x.v.begin());
    std::copy(condition.begin(), condition.end(), x.v.begin() + h);
    if (timestep_input) x.v.back() = t_norm;
    return x;
}

}  // namespace

LatentNegative denoise_chain(const Mlp& denoiser, std::span<const double> h0,
                             std::span<const double> condition, std::size_t steps,
                             const Mlp& clf, bool timestep_input, DenoiseChainCache* cache) {
    if (steps < 1) throw std::invalid_argument("denoise_chain: need at least one step");
    const std::size_t h = h0.size();
    if (condition.size() != h)
        throw std::invalid_argument("denoise_chain: condition width mismatch");

    LatentNegative out;
    out.states.emplace_back(h0.begin(), h0.end());
    out.scores.push_back(classify(clf, h0));
    if (cache) cache->step_caches.assign(steps, {});

    for (std::size_t t = 1; t <= steps; ++t) {
        const auto& prev = out.states.back();
        const Dense x = chain_input(prev, condition, timestep_input,
                                    static_cast<double>(t) / static_cast<double>(steps));
        Dense residual =
            mlp_forward(denoiser, x, cache ? &cache->step_caches[t - 1] : nullptr);
        std::vector<double> next(prev);
        kernels::active().axpy(1.0, residual.v.data(), next.data(), h);
        for (double v : next)
            if (!std::isfinite(v))
                throw std::runtime_error("denoise_chain: non-finite state at step " +
                                         std::to_string(t));
        out.scores.push_back(classify(clf, next));
        out.states.push_back(std::move(next));
    }
    return out;
}

void denoise_chain_backward(const Mlp& denoiser, const DenoiseChainCache& cache,
                            std::span<const std::vector<double>> d_states, MlpGrads& grads,
                            bool timestep_input) {
    const std::size_t steps = cache.step_caches.size();
    if (d_states.size() != steps + 1)
        throw std::invalid_argument("denoise_chain_backward: need T+1 state gradients");
    if (steps == 0) return;

    std::size_t h = 0;
    for (const auto& d : d_states)
        if (!d.empty()) {
            h = d.size();
            break;
        }
    if (h == 0) return;  // no gradient flows anywhere
    const auto& K = kernels::active();
    std::vector<double> acc(h, 0.0);
    if (!d_states[steps].empty()) K.axpy(1.0, d_states[steps].data(), acc.data(), h);

    for (std::size_t t = steps; t >= 1; --t) {
        Dense upstream(1, h, std::vector<double>(acc.begin(), acc.end()));
        Dense dx = mlp_backward(denoiser, cache.step_caches[t - 1], upstream, grads);
        // residual path: d/d(state t-1) = acc + input-half of dx
        K.axpy(1.0, dx.v.data(), acc.data(), h);
        (void)timestep_input;  // trailing input slot carries no state gradient
        if (!d_states[t - 1].empty()) K.axpy(1.0, d_states[t - 1].data(), acc.data(), h);
    }
}

std::vector<double> extraction_probabilities(const Mlp& extractor,
                                             std::span<const double> latent, const Dense& V,
                                             bool query_node_embeddings) {
    const std::size_t h = latent.size();
    if (V.cols != h) throw std::invalid_argument("extraction: embedding width mismatch");
    Dense x(V.rows, 2 * h);
    for (std::size_t i = 0; i < V.rows; ++i) {
        double* row = x.row(i);
        std::copy(latent.begin(), latent.end(), row);
        if (query_node_embeddings) std::copy_n(V.row(i), h, row + h);
    }
    const Dense logits = mlp_forward(extractor, x);
    std::vector<double> probs(V.rows);
    for (std::size_t i = 0; i < V.rows; ++i) probs[i] = sigmoid(logits.v[i]);
    return probs;
}

CandidateHyperedge extract_node_ids(const Mlp& extractor, std::span<const double> latent,
                                    const SubHypergraph& sub, const Dense& V, std::size_t k,
                                    bool query_node_embeddings) {
    if (k < 2) throw std::invalid_argument("extract_node_ids: k must be >= 2");
    if (k > sub.node_count())
        throw std::invalid_argument("extract_node_ids: k = " + std::to_string(k) +
                                    " exceeds induced node count " +
                                    std::to_string(sub.node_count()));
    const std::vector<double> probs =
        extraction_probabilities(extractor, latent, V, query_node_embeddings);

    std::vector<std::uint32_t> order(sub.node_count());
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::uint32_t a, std::uint32_t b) {
                          if (probs[a] != probs[b]) return probs[a] > probs[b];
                          return sub.nodes[a] < sub.nodes[b];
                      });

    CandidateHyperedge c;
    c.provenance = Provenance::GeneratedNegative;
    c.nodes.reserve(k);
    for (std::size_t i = 0; i < k; ++i) c.nodes.push_back(sub.nodes[order[i]]);
    std::sort(c.nodes.begin(), c.nodes.end());
    return c;
}

GeneratedBatch generate_negatives(const SubHypergraph& sub, const Dense& V,
                                  const Mlp& denoiser, const Mlp& extractor, const Mlp& clf,
                                  const GenOptions& opts, const ForbiddenSet& observed) {
    GeneratedBatch batch;
    batch.mode = opts.mode;

    std::vector<double> condition(V.cols, 0.0);
    if (opts.use_condition) condition = readout_condition(V);

    for (std::size_t p = 0; p < sub.edge_ids.size(); ++p) {
        const auto& members = sub.local_edges[p];
        const std::vector<double> h0 = aggregate_hyperedge(V, members);
        DenoiseChainCache cache;
        LatentNegative chain = denoise_chain(denoiser, h0, condition, opts.steps, clf,
                                             opts.timestep_input, &cache);
        chain.source_edge = sub.edge_ids[p];

        if (opts.mode == GenMode::NodeId) {
            const std::size_t k = members.size();
            CandidateHyperedge c = extract_node_ids(extractor, chain.states.back(), sub, V, k,
                                                    opts.query_node_embeddings);
            c.source_edge = sub.edge_ids[p];
            c.collides_observed = observed.contains(c.nodes);
            batch.discrete.push_back(std::move(c));
        }
        batch.chains.push_back(std::move(chain));
        batch.chain_caches.push_back(std::move(cache));
    }
    return batch;
}

}  // namespace sehp
