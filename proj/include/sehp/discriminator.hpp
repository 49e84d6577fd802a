#pragma once

#include <span>
#include <vector>

#include "sehp/mlp.hpp"
#include "sehp/sampler.hpp"

namespace sehp {

// Two-stage bipartite message passing over the batch sub-hypergraph. Each
// layer forms hyperedge representations as the mean of their member node
// states, then updates every node from the mean of its incident hyperedge
// representations concatenated with its own state, through a linear map and
// ReLU. Nodes without incident batch hyperedges see a zero neighborhood.
struct EncoderModel {
    std::vector<Mlp> layers;  // layer l: single linear [2*w_l -> h], ReLU

    std::size_t depth() const { return layers.size(); }
    std::size_t embed_dim() const { return layers.empty() ? 0 : layers.back().out_dim(); }
    std::size_t input_dim() const {
        return layers.empty() ? 0 : layers.front().in_dim() / 2;
    }

    std::vector<Dense*> params();
    std::vector<const Dense*> params() const;
};

EncoderModel make_encoder(std::size_t feature_dim, std::size_t embed_dim, std::size_t depth,
                          Rng& rng);
EncoderModel make_zero_encoder(std::size_t feature_dim, std::size_t embed_dim,
                               std::size_t depth);

struct EncodeCache {
    std::vector<MlpCache> layer_caches;
    std::vector<Dense> states;       // states[l] = node states entering layer l
    std::vector<Dense> edge_reprs;   // per layer, batch-hyperedge means
};

// Node embeddings for the sub-hypergraph, rows in local node order.
Dense encode_nodes(const EncoderModel& m, const SubHypergraph& sub, const Dense& features,
                   EncodeCache* cache = nullptr);

struct EncoderGrads {
    std::vector<MlpGrads> layers;
    static EncoderGrads zeros_like(const EncoderModel& m);
    void zero();
    std::vector<Dense*> flat();
};

// Backpropagates d(loss)/d(embeddings) through the message-passing stack,
// accumulating layer gradients. Returns d(loss)/d(features).
Dense encode_backward(const EncoderModel& m, const SubHypergraph& sub, const EncodeCache& cache,
                      const Dense& d_embeddings, EncoderGrads& grads);

// Elementwise max minus min over the member rows of V (local indices).
std::vector<double> aggregate_hyperedge(const Dense& V, std::span<const std::uint32_t> members);

// Same, also reporting the argmax/argmin rows per column for backprop.
struct AggregateCache {
    std::vector<std::uint32_t> argmax;
    std::vector<std::uint32_t> argmin;
};
std::vector<double> aggregate_hyperedge(const Dense& V, std::span<const std::uint32_t> members,
                                        AggregateCache& cache);

// h -> h/2 (ReLU) -> 1 (sigmoid)
Mlp make_classifier(std::size_t embed_dim, Rng& rng);
Mlp make_zero_classifier(std::size_t embed_dim);

double classify(const Mlp& clf, std::span<const double> embedding, MlpCache* cache = nullptr);

// Encodes once and scores every candidate against the shared embeddings.
// Candidates are given in global node IDs and must lie inside `sub`.
std::vector<double> score_candidates(const EncoderModel& m, const Mlp& clf,
                                     const SubHypergraph& sub, const Dense& features,
                                     std::span<const CandidateHyperedge> candidates);

}  // namespace sehp
