#include "sehp/discriminator.hpp"

#include <stdexcept>
#include <string>

#include "sehp/kernels.hpp"

namespace sehp {

std::vector<Dense*> EncoderModel::params() {
    std::vector<Dense*> out;
    for (Mlp& l : layers)
        for (Dense* p : l.params()) out.push_back(p);
    return out;
}

std::vector<const Dense*> EncoderModel::params() const {
    std::vector<const Dense*> out;
    for (const Mlp& l : layers)
        for (const Dense* p : l.params()) out.push_back(p);
    return out;
}

EncoderModel make_encoder(std::size_t feature_dim, std::size_t embed_dim, std::size_t depth,
                          Rng& rng) {
    if (depth < 1) throw std::invalid_argument("encoder depth must be >= 1");
    EncoderModel m;
    std::size_t w = feature_dim;
    for (std::size_t l = 0; l < depth; ++l) {
        m.layers.push_back(Mlp::create({2 * w, embed_dim}, {Activation::Relu}, rng));
        w = embed_dim;
    }
    return m;
}

EncoderModel make_zero_encoder(std::size_t feature_dim, std::size_t embed_dim,
                               std::size_t depth) {
    EncoderModel m;
    std::size_t w = feature_dim;
    for (std::size_t l = 0; l < depth; ++l) {
        m.layers.push_back(Mlp::zeros({2 * w, embed_dim}, {Activation::Relu}));
        w = embed_dim;
    }
    return m;
}

namespace {

// hyperedge means of the current node states
Dense edge_means(const SubHypergraph& sub, const Dense& states) {
    const auto& K = kernels::active();
    Dense r(sub.local_edges.size(), states.cols);
    for (std::size_t j = 0; j < sub.local_edges.size(); ++j) {
        const auto& members = sub.local_edges[j];
        for (std::uint32_t i : members) K.axpy(1.0, states.row(i), r.row(j), states.cols);
        K.scale(1.0 / static_cast<double>(members.size()), r.row(j), states.cols);
    }
    return r;
}

}  // namespace

Dense encode_nodes(const EncoderModel& m, const SubHypergraph& sub, const Dense& features,
                   EncodeCache* cache) {
    if (m.layers.empty()) throw std::invalid_argument("encode_nodes: empty encoder");
    if (features.rows != sub.node_count())
        throw std::invalid_argument("encode_nodes: feature rows " +
                                    std::to_string(features.rows) + " != induced node count " +
                                    std::to_string(sub.node_count()));
    if (features.cols != m.input_dim())
        throw std::invalid_argument("encode_nodes: feature width " +
                                    std::to_string(features.cols) + " != encoder input width " +
                                    std::to_string(m.input_dim()));

    const auto& K = kernels::active();
    const std::size_t n = sub.node_count();

    // incident batch hyperedges per local node
    std::vector<std::vector<std::uint32_t>> incident(n);
    for (std::uint32_t j = 0; j < sub.local_edges.size(); ++j)
        for (std::uint32_t i : sub.local_edges[j]) incident[i].push_back(j);

    if (cache) {
        cache->layer_caches.assign(m.layers.size(), {});
        cache->states.clear();
        cache->edge_reprs.clear();
    }

    Dense states = features;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        const std::size_t w = states.cols;
        Dense reprs = edge_means(sub, states);
        Dense z(n, 2 * w);
        for (std::size_t i = 0; i < n; ++i) {
            double* row = z.row(i);
            if (!incident[i].empty()) {
                for (std::uint32_t j : incident[i]) K.axpy(1.0, reprs.row(j), row, w);
                K.scale(1.0 / static_cast<double>(incident[i].size()), row, w);
            }
            std::copy_n(states.row(i), w, row + w);
        }
        if (cache) {
            cache->states.push_back(states);
            cache->edge_reprs.push_back(reprs);
        }
        states = mlp_forward(m.layers[l], z, cache ? &cache->layer_caches[l] : nullptr);
    }
    return states;
}

EncoderGrads EncoderGrads::zeros_like(const EncoderModel& m) {
    EncoderGrads g;
    for (const Mlp& l : m.layers) g.layers.push_back(MlpGrads::zeros_like(l));
    return g;
}

void EncoderGrads::zero() {
    for (MlpGrads& g : layers) g.zero();
}

std::vector<Dense*> EncoderGrads::flat() {
    std::vector<Dense*> out;
    for (MlpGrads& g : layers)
        for (Dense* p : g.flat()) out.push_back(p);
    return out;
}

Dense encode_backward(const EncoderModel& m, const SubHypergraph& sub, const EncodeCache& cache,
                      const Dense& d_embeddings, EncoderGrads& grads) {
    if (cache.layer_caches.size() != m.layers.size())
        throw std::runtime_error("encode_backward: cache does not match encoder");
    const auto& K = kernels::active();
    const std::size_t n = sub.node_count();

    std::vector<std::vector<std::uint32_t>> incident(n);
    for (std::uint32_t j = 0; j < sub.local_edges.size(); ++j)
        for (std::uint32_t i : sub.local_edges[j]) incident[i].push_back(j);

    Dense d_states = d_embeddings;
    for (std::size_t l = m.layers.size(); l-- > 0;) {
        const std::size_t w = cache.states[l].cols;
        Dense dz = mlp_backward(m.layers[l], cache.layer_caches[l], d_states, grads.layers[l]);
        // split dz into the neighborhood half and the self half
        Dense d_reprs(sub.local_edges.size(), w);
        Dense d_prev(n, w);
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = dz.row(i);
            if (!incident[i].empty()) {
                const double inv = 1.0 / static_cast<double>(incident[i].size());
                for (std::uint32_t j : incident[i]) K.axpy(inv, row, d_reprs.row(j), w);
            }
            K.axpy(1.0, row + w, d_prev.row(i), w);
        }
        for (std::size_t j = 0; j < sub.local_edges.size(); ++j) {
            const auto& members = sub.local_edges[j];
            const double inv = 1.0 / static_cast<double>(members.size());
            for (std::uint32_t i : members) K.axpy(inv, d_reprs.row(j), d_prev.row(i), w);
        }
        d_states = std::move(d_prev);
    }
    return d_states;
}

std::vector<double> aggregate_hyperedge(const Dense& V, std::span<const std::uint32_t> members) {
    AggregateCache scratch;
    return aggregate_hyperedge(V, members, scratch);
}

std::vector<double> aggregate_hyperedge(const Dense& V, std::span<const std::uint32_t> members,
                                        AggregateCache& cache) {
    if (members.empty()) throw std::invalid_argument("aggregate_hyperedge: empty candidate");
    const std::size_t h = V.cols;
    cache.argmax.assign(h, members[0]);
    cache.argmin.assign(h, members[0]);
    std::vector<double> vmax(V.row(members[0]), V.row(members[0]) + h);
    std::vector<double> vmin = vmax;
    for (std::size_t i = 1; i < members.size(); ++i) {
        const double* row = V.row(members[i]);
        for (std::size_t c = 0; c < h; ++c) {
            if (row[c] > vmax[c]) {
                vmax[c] = row[c];
                cache.argmax[c] = members[i];
            }
            if (row[c] < vmin[c]) {
                vmin[c] = row[c];
                cache.argmin[c] = members[i];
            }
        }
    }
    for (std::size_t c = 0; c < h; ++c) vmax[c] -= vmin[c];
    return vmax;
}

Mlp make_classifier(std::size_t embed_dim, Rng& rng) {
    const std::size_t mid = std::max<std::size_t>(1, embed_dim / 2);
    return Mlp::create({embed_dim, mid, 1}, {Activation::Relu, Activation::Sigmoid}, rng);
}

Mlp make_zero_classifier(std::size_t embed_dim) {
    const std::size_t mid = std::max<std::size_t>(1, embed_dim / 2);
    return Mlp::zeros({embed_dim, mid, 1}, {Activation::Relu, Activation::Sigmoid});
}

double classify(const Mlp& clf, std::span<const double> embedding, MlpCache* cache) {
    if (embedding.size() != clf.in_dim())
        throw std::invalid_argument("classify: embedding width " +
                                    std::to_string(embedding.size()) + " != classifier input " +
                                    std::to_string(clf.in_dim()));
    Dense x(1, embedding.size(), std::vector<double>(embedding.begin(), embedding.end()));
    return mlp_forward(clf, x, cache).v[0];
}

std::vector<double> score_candidates(const EncoderModel& m, const Mlp& clf,
                                     const SubHypergraph& sub, const Dense& features,
                                     std::span<const CandidateHyperedge> candidates) {
    const Dense V = encode_nodes(m, sub, features);
    std::vector<double> scores;
    scores.reserve(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        std::vector<std::uint32_t> members;
        members.reserve(candidates[c].nodes.size());
        for (NodeId v : candidates[c].nodes) {
            if (!sub.has_node(v))
                throw std::invalid_argument("candidate " + std::to_string(c) +
                                            " references node " + std::to_string(v) +
                                            " outside the sub-hypergraph");
            members.push_back(sub.local_of(v));
        }
        scores.push_back(classify(clf, aggregate_hyperedge(V, members)));
    }
    return scores;
}

}  // namespace sehp
