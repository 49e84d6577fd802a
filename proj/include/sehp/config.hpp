#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sehp/sampler.hpp"

namespace sehp {

enum class Variant { SEHP, Gns, Epre, None, Stru, Node };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 32;       // hyperedges per sub-hypergraph
    std::size_t diffusion_steps = 5;   // T
    std::size_t embed_dim = 64;        // h
    std::size_t encoder_layers = 2;    // L
    double lr_dis = 1e-3;
    double lr_gen = 1e-3;
    Variant variant = Variant::SEHP;
    std::uint64_t seed = 1;
    std::size_t eval_every = 1;        // epochs between validation evaluations
    bool extra_sns_negatives = false;  // feed SNS negatives to the discriminator as well
    bool use_generated_negatives = true;
    bool timestep_input = false;       // append t/T to the denoiser input
    std::vector<NegStrategy> eval_strategies = {NegStrategy::SNS, NegStrategy::MNS,
                                                NegStrategy::CNS, NegStrategy::MIX};

    void validate() const;  // throws std::invalid_argument
};

// Flat key-value text, one `key value` pair per line, '#' comments.
TrainConfig load_config(const std::filesystem::path& path);
void apply_config_line(TrainConfig& cfg, const std::string& key, const std::string& value);
void save_config(const TrainConfig& cfg, const std::filesystem::path& path);
std::string config_to_string(const TrainConfig& cfg);

}  // namespace sehp
