#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sehp/checkpoint.hpp"
#include "sehp/config.hpp"
#include "sehp/generator.hpp"
#include "sehp/metrics.hpp"
#include "sehp/optimizer.hpp"

namespace sehp {

// All learnable components, created together so checkpoints stay uniform
// across variants. Only the components a variant uses receive updates.
struct Models {
    EncoderModel encoder;
    Mlp classifier;
    Mlp denoiser;
    Mlp extractor;
    Mlp noise_gen;

    std::size_t embed_dim() const { return encoder.embed_dim(); }

    static Models create(std::size_t feature_dim, const TrainConfig& cfg);
    static Models zeros(std::size_t feature_dim, const TrainConfig& cfg);

    std::vector<Dense*> discriminator_params();
    std::vector<Dense*> generator_params(Variant variant);

    bool operator==(const Models& o) const;
};

void models_to_container(const Models& m, Container& c);
Models models_from_container(const Container& c);

struct TrainState {
    Models models;
    OptState opt_dis;
    OptState opt_gen;
    std::uint64_t global_step = 0;
};

TrainState make_train_state(const Hypergraph& g, const TrainConfig& cfg);

void state_to_container(const TrainState& s, Container& c);
TrainState state_from_container(const Container& c);

struct StepLosses {
    double dis = 0.0;
    double neg = 0.0;
    double diff = 0.0;
};

// One alternating update: discriminator step on Eq-style cross entropy over
// batch positives and generated negatives, then a generator step on the
// adversarial + boundary objective. Gradients never cross between the two
// parameter sets.
StepLosses train_step(TrainState& state, const Hypergraph& g, std::span<const EdgeId> train,
                      const TrainConfig& cfg);

struct HistoryRow {
    std::size_t epoch = 0;
    std::size_t step = 0;
    double loss_dis = 0.0;
    double loss_neg = 0.0;
    double loss_diff = 0.0;
    std::vector<StrategyResult> val;
    double val_ave_auroc = 0.0;
    double val_ave_precision = 0.0;
    double wall_seconds = 0.0;
};

struct TrainResult {
    Models best;
    TrainState final_state;
    std::vector<HistoryRow> history;
    double best_val_auroc = -1.0;
    bool aborted = false;  // divergence; `best` holds the last good checkpoint
};

TrainResult train(const Hypergraph& g, const Split& split, const TrainConfig& cfg);

// Continues a run from a restored state (resume path); epoch numbering picks
// up from state.global_step.
TrainResult train_from_state(TrainState state, const Hypergraph& g, const Split& split,
                             const TrainConfig& cfg, double best_so_far = -1.0);

// Scores the given positives plus freshly sampled per-strategy negatives on
// sub-hypergraphs covering the whole set, batch_size positives per batch.
// With strict_precision off, a strategy without positive predictions gets a
// NaN precision instead of an error (used by mid-training evaluations,
// where an immature scorer may sit entirely below the threshold).
EvalTable evaluate(const Models& models, const Hypergraph& g,
                   std::span<const EdgeId> positive_ids, const TrainConfig& cfg,
                   std::span<const NegStrategy> strategies, std::uint64_t seed,
                   bool strict_precision = true);

// Per-step mean classifier scores of generated chains over `batches`
// freshly sampled sub-hypergraphs; row b holds mean s^t for t = 0..T.
std::vector<std::vector<double>> boundary_trace(const Models& models, const Hypergraph& g,
                                                std::span<const EdgeId> edge_ids,
                                                const TrainConfig& cfg, std::size_t batches,
                                                std::uint64_t seed);

void save_history_csv(std::span<const HistoryRow> history,
                      std::span<const NegStrategy> strategies,
                      const std::filesystem::path& path);

}  // namespace sehp
