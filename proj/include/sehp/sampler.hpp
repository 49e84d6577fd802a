#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sehp/dense.hpp"
#include "sehp/hypergraph.hpp"
#include "sehp/rng.hpp"

namespace sehp {

enum class Provenance { Positive, HeuristicNegative, GeneratedNegative };

struct CandidateHyperedge {
    std::vector<NodeId> nodes;  // sorted, distinct, global IDs
    Provenance provenance = Provenance::Positive;
    std::int64_t source_edge = -1;       // positive this candidate derives from, if any
    bool collides_observed = false;      // generated candidate equal to an observed hyperedge
};

// Hash set of observed hyperedges (sorted node vectors).
class ForbiddenSet {
public:
    ForbiddenSet() = default;
    explicit ForbiddenSet(const Hypergraph& g);

    void insert(std::vector<NodeId> sorted_nodes);
    bool contains(const std::vector<NodeId>& sorted_nodes) const;
    std::size_t size() const { return set_.size(); }

private:
    struct VecHash {
        std::size_t operator()(const std::vector<NodeId>& v) const;
    };
    std::unordered_set<std::vector<NodeId>, VecHash> set_;
};

// Neighbor-expanded batch of training hyperedges with a local node index.
// Candidate nodes outside the member hyperedges may be attached afterwards;
// they participate in encoding as isolated nodes.
struct SubHypergraph {
    const Hypergraph* parent = nullptr;
    std::vector<EdgeId> edge_ids;                   // batch positives (parent indices)
    std::vector<NodeId> nodes;                      // local -> global
    std::unordered_map<NodeId, std::uint32_t> local; // global -> local
    std::vector<std::vector<std::uint32_t>> local_edges;

    static SubHypergraph from_edges(const Hypergraph& g, std::vector<EdgeId> edge_ids);

    std::size_t node_count() const { return nodes.size(); }
    bool has_node(NodeId global) const { return local.count(global) > 0; }
    std::uint32_t local_of(NodeId global) const { return local.at(global); }

    // registers extra global nodes (no incident batch edges)
    void extend_nodes(std::span<const NodeId> extra);

    // rows of the parent feature matrix for the local node order
    Dense gather_features() const;
};

// Starts from one uniformly random training hyperedge and repeatedly adds a
// uniformly random unvisited hyperedge sharing at least one node with the
// current set; restarts from a fresh random hyperedge when the frontier
// empties before batch_size is reached.
SubHypergraph sample_sub_hypergraph(const Hypergraph& g, std::span<const EdgeId> train,
                                    std::size_t batch_size, std::uint64_t seed);

enum class NegStrategy { SNS, MNS, CNS, MIX };

std::string strategy_name(NegStrategy s);
NegStrategy strategy_from_name(const std::string& name);

struct NegSpec {
    NegStrategy strategy = NegStrategy::SNS;
    std::size_t count = 1;
    std::uint64_t seed = 0;
};

std::vector<CandidateHyperedge> sample_negatives(const Hypergraph& g, const NegSpec& spec,
                                                 const ForbiddenSet& forbidden);

// MIX splits count as evenly as possible, remainder going SNS, MNS, CNS.
std::array<std::size_t, 3> mix_counts(std::size_t count);

void save_negatives(std::span<const CandidateHyperedge> negs,
                    const std::filesystem::path& path, const std::string& strategy,
                    std::uint64_t seed, std::size_t val_count, std::size_t test_count);

namespace detail {
// Grown (pre-drop) MNS node set: union of randomly merged incident
// hyperedges until |set| >= k. Exposed for the connectivity property test.
std::vector<NodeId> mns_grow(const Hypergraph& g, Rng& rng, std::size_t k);
// One CNS attempt from hyperedge e: removes a uniform node, adds a uniform
// adjacent replacement; empty result when no replacement exists.
std::vector<NodeId> cns_attempt(const Hypergraph& g, Rng& rng, const std::vector<NodeId>& e);
}  // namespace detail

}  // namespace sehp
