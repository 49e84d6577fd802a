#pragma once

#include <span>
#include <vector>

#include "sehp/discriminator.hpp"

namespace sehp {

// Columnwise mean of the node embeddings; the sub-hypergraph structure
// summary that conditions the denoiser.
std::vector<double> readout_condition(const Dense& V);

// Denoiser: concat(state, condition) -> residual, added back onto the
// state. Weights are shared across steps.
Mlp make_denoiser(std::size_t embed_dim, bool timestep_input, Rng& rng);
Mlp make_zero_denoiser(std::size_t embed_dim, bool timestep_input);

// Extractor: concat(state, node embedding) -> membership logit.
Mlp make_extractor(std::size_t embed_dim, Rng& rng);

// Noise -> latent generator used by the no-diffusion ablation.
Mlp make_noise_generator(std::size_t embed_dim, Rng& rng);

// Iterated refinement record: states[t] for t = 0..T with the classifier
// score of every state. states[0] is the max-min aggregation of the source
// positive.
struct LatentNegative {
    std::vector<std::vector<double>> states;
    std::vector<double> scores;
    std::int64_t source_edge = -1;

    std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

struct DenoiseChainCache {
    std::vector<MlpCache> step_caches;  // denoiser cache per step 1..T
};

LatentNegative denoise_chain(const Mlp& denoiser, std::span<const double> h0,
                             std::span<const double> condition, std::size_t steps,
                             const Mlp& clf, bool timestep_input = false,
                             DenoiseChainCache* cache = nullptr);

// Backward through the residual chain. d_states[t] is d(loss)/d(state t)
// for t = 0..T (entries may be empty when a state receives no direct
// gradient). Accumulates denoiser parameter gradients.
void denoise_chain_backward(const Mlp& denoiser, const DenoiseChainCache& cache,
                            std::span<const std::vector<double>> d_states, MlpGrads& grads,
                            bool timestep_input = false);

// Membership probability of every sub-hypergraph node given a latent state;
// rows follow the local node order. With query_node_embeddings off the
// embedding half of the input is zero.
std::vector<double> extraction_probabilities(const Mlp& extractor,
                                             std::span<const double> latent, const Dense& V,
                                             bool query_node_embeddings);

// Top-k node IDs by membership probability, ties to the lower node ID.
CandidateHyperedge extract_node_ids(const Mlp& extractor, std::span<const double> latent,
                                    const SubHypergraph& sub, const Dense& V, std::size_t k,
                                    bool query_node_embeddings = true);

enum class GenMode { NodeId, Latent };

struct GenOptions {
    GenMode mode = GenMode::NodeId;
    bool use_condition = true;           // structure injection into the denoiser
    bool query_node_embeddings = true;   // extractor sees node embeddings
    bool timestep_input = false;
    std::size_t steps = 5;
};

struct GeneratedBatch {
    GenMode mode = GenMode::NodeId;
    std::vector<LatentNegative> chains;           // one per batch positive
    std::vector<CandidateHyperedge> discrete;     // NodeId mode only
    std::vector<DenoiseChainCache> chain_caches;  // kept for the generator update
};

// One negative per batch positive. In NodeId mode discrete candidates are
// produced via extraction on the final state; candidates equal to an
// observed hyperedge are kept but flagged.
GeneratedBatch generate_negatives(const SubHypergraph& sub, const Dense& V,
                                  const Mlp& denoiser, const Mlp& extractor, const Mlp& clf,
                                  const GenOptions& opts, const ForbiddenSet& observed);

}  // namespace sehp
