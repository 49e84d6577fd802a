#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "sehp/dense.hpp"

namespace sehp {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

// Node sets are kept sorted and duplicate-free; incidence indexes both
// directions. Immutable after construction.
struct Hypergraph {
    std::size_t node_count = 0;
    std::vector<std::vector<NodeId>> edges;      // hyperedge -> member nodes
    std::vector<std::vector<EdgeId>> node_edges; // node -> incident hyperedges
    Dense features;                              // node_count x feature_dim

    std::size_t edge_count() const { return edges.size(); }
    std::size_t feature_dim() const { return features.cols; }
    double mean_edge_size() const;

    // rebuilds node_edges from edges and checks the structural invariants;
    // throws std::invalid_argument on violation
    void finalize();
};

struct BipartiteView {
    std::size_t left_count = 0;   // hypergraph nodes
    std::size_t right_count = 0;  // hyperedges
    std::vector<std::pair<NodeId, EdgeId>> edges;
};

BipartiteView to_bipartite(const Hypergraph& g);

struct Split {
    std::vector<EdgeId> train;
    std::vector<EdgeId> val;
    std::vector<EdgeId> test;
};

// 60/20/20, shuffled uniformly under `seed`; requires at least 5 hyperedges.
Split split_dataset(const Hypergraph& g, std::uint64_t seed);

struct LoadReport {
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double mean_edge_size = 0.0;
    std::size_t rejected_small = 0;    // lines with < 2 distinct nodes
    std::size_t deduplicated = 0;      // duplicate node occurrences dropped
    bool remapped = false;
    std::vector<std::pair<NodeId, NodeId>> remap;  // original -> compacted
};

// One hyperedge per line, whitespace-separated node IDs, '#' comments.
// Gapped IDs are compacted (reported through `report`). Without a feature
// file, features are a one-hot over 16 log2 degree buckets.
Hypergraph load_hypergraph(const std::filesystem::path& edge_file,
                           const std::optional<std::filesystem::path>& feature_file = {},
                           LoadReport* report = nullptr);

void save_hyperedges(const Hypergraph& g, const std::filesystem::path& path);
void save_features(const Dense& features, const std::filesystem::path& path);
Dense load_features(const std::filesystem::path& path);
void save_remap(const std::vector<std::pair<NodeId, NodeId>>& remap,
                const std::filesystem::path& path);

void save_split(const Split& s, const std::filesystem::path& path);
Split load_split(const std::filesystem::path& path);

// Planted-community hypergraph for desk-scale experiments: nodes fall into
// contiguous community blocks, each hyperedge draws its members from one
// community with probability 0.9 per node. Features are the community
// one-hot plus uniform noise in [0, 0.1).
Hypergraph synth_hypergraph(std::size_t n, std::size_t m, std::size_t kmin, std::size_t kmax,
                            std::size_t communities, std::uint64_t seed);

}  // namespace sehp
