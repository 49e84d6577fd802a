#include "sehp/sampler.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>

namespace sehp {

std::size_t ForbiddenSet::VecHash::operator()(const std::vector<NodeId>& v) const {
    std::size_t h = 0xCBF29CE484222325ULL;
    for (NodeId x : v) {
        h ^= x;
        h *= 0x100000001B3ULL;
    }
    return h;
}

ForbiddenSet::ForbiddenSet(const Hypergraph& g) {
    for (const auto& e : g.edges) set_.insert(e);
}

void ForbiddenSet::insert(std::vector<NodeId> sorted_nodes) {
    set_.insert(std::move(sorted_nodes));
}

bool ForbiddenSet::contains(const std::vector<NodeId>& sorted_nodes) const {
    return set_.count(sorted_nodes) > 0;
}

SubHypergraph SubHypergraph::from_edges(const Hypergraph& g, std::vector<EdgeId> ids) {
    SubHypergraph sub;
    sub.parent = &g;
    sub.edge_ids = std::move(ids);
    for (EdgeId j : sub.edge_ids) {
        if (j >= g.edge_count())
            throw std::invalid_argument("sub-hypergraph references edge " + std::to_string(j) +
                                        " outside the parent");
        for (NodeId v : g.edges[j]) {
            if (!sub.local.count(v)) {
                sub.local.emplace(v, static_cast<std::uint32_t>(sub.nodes.size()));
                sub.nodes.push_back(v);
            }
        }
    }
    for (EdgeId j : sub.edge_ids) {
        std::vector<std::uint32_t> e;
        e.reserve(g.edges[j].size());
        for (NodeId v : g.edges[j]) e.push_back(sub.local.at(v));
        sub.local_edges.push_back(std::move(e));
    }
    return sub;
}

void SubHypergraph::extend_nodes(std::span<const NodeId> extra) {
    for (NodeId v : extra) {
        if (v >= parent->node_count)
            throw std::invalid_argument("extend_nodes: node " + std::to_string(v) +
                                        " outside the parent hypergraph");
        if (!local.count(v)) {
            local.emplace(v, static_cast<std::uint32_t>(nodes.size()));
            nodes.push_back(v);
        }
    }
}

Dense SubHypergraph::gather_features() const {
    const Dense& f = parent->features;
    Dense out(nodes.size(), f.cols);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        std::copy_n(f.row(nodes[i]), f.cols, out.row(i));
    return out;
}

SubHypergraph sample_sub_hypergraph(const Hypergraph& g, std::span<const EdgeId> train,
                                    std::size_t batch_size, std::uint64_t seed) {
    if (train.empty()) throw std::invalid_argument("sample_sub_hypergraph: empty training set");
    if (batch_size < 1) throw std::invalid_argument("sample_sub_hypergraph: batch_size < 1");
    if (batch_size > train.size()) batch_size = train.size();  // clamp, callers may warn

    Rng rng(seed);
    std::unordered_set<EdgeId> in_train(train.begin(), train.end());
    std::unordered_set<EdgeId> visited;
    std::vector<EdgeId> picked;
    std::unordered_set<NodeId> covered;

    // unvisited training hyperedges sharing >= 1 node with the current set
    std::vector<EdgeId> frontier;
    std::unordered_set<EdgeId> in_frontier;

    const auto absorb = [&](EdgeId j) {
        visited.insert(j);
        in_frontier.erase(j);
        picked.push_back(j);
        for (NodeId v : g.edges[j]) {
            if (!covered.insert(v).second) continue;
            for (EdgeId nb : g.node_edges[v]) {
                if (visited.count(nb) || !in_train.count(nb)) continue;
                if (in_frontier.insert(nb).second) frontier.push_back(nb);
            }
        }
    };

    while (picked.size() < batch_size) {
        if (frontier.empty()) {
            // fresh random unvisited seed hyperedge
            EdgeId seed_edge;
            do {
                seed_edge = train[rng.uniform_index(train.size())];
            } while (visited.count(seed_edge));
            absorb(seed_edge);
            continue;
        }
        const std::size_t pick = rng.uniform_index(frontier.size());
        const EdgeId j = frontier[pick];
        frontier[pick] = frontier.back();
        frontier.pop_back();
        if (visited.count(j)) continue;
        absorb(j);
    }
    return SubHypergraph::from_edges(g, std::move(picked));
}

std::string strategy_name(NegStrategy s) {
    switch (s) {
        case NegStrategy::SNS: return "SNS";
        case NegStrategy::MNS: return "MNS";
        case NegStrategy::CNS: return "CNS";
        case NegStrategy::MIX: return "MIX";
    }
    throw std::invalid_argument("unknown strategy");
}

NegStrategy strategy_from_name(const std::string& name) {
    if (name == "SNS") return NegStrategy::SNS;
    if (name == "MNS") return NegStrategy::MNS;
    if (name == "CNS") return NegStrategy::CNS;
    if (name == "MIX") return NegStrategy::MIX;
    throw std::invalid_argument("unknown negative-sampling strategy: " + name);
}

std::array<std::size_t, 3> mix_counts(std::size_t count) {
    const std::size_t each = count / 3;
    const std::size_t rem = count % 3;
    return {each + (rem > 0 ? 1 : 0), each + (rem > 1 ? 1 : 0), each};
}

namespace detail {

std::vector<NodeId> mns_grow(const Hypergraph& g, Rng& rng, std::size_t k) {
    const EdgeId start = static_cast<EdgeId>(rng.uniform_index(g.edge_count()));
    std::unordered_set<NodeId> members(g.edges[start].begin(), g.edges[start].end());
    std::unordered_set<EdgeId> used{start};

    while (members.size() < k) {
        // hyperedges incident to the current node set, not yet merged
        std::vector<EdgeId> incident;
        std::unordered_set<EdgeId> seen;
        for (NodeId v : members)
            for (EdgeId j : g.node_edges[v])
                if (!used.count(j) && seen.insert(j).second) incident.push_back(j);
        if (incident.empty()) return {};  // component exhausted below k
        const EdgeId j = incident[rng.uniform_index(incident.size())];
        used.insert(j);
        members.insert(g.edges[j].begin(), g.edges[j].end());
    }
    std::vector<NodeId> out(members.begin(), members.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> cns_attempt(const Hypergraph& g, Rng& rng, const std::vector<NodeId>& e) {
    const std::size_t drop = rng.uniform_index(e.size());
    std::vector<NodeId> kept;
    kept.reserve(e.size() - 1);
    for (std::size_t i = 0; i < e.size(); ++i)
        if (i != drop) kept.push_back(e[i]);

    // replacements: nodes sharing >= 1 hyperedge with a kept node, not in e
    std::unordered_set<NodeId> in_e(e.begin(), e.end());
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> eligible;
    for (NodeId v : kept)
        for (EdgeId j : g.node_edges[v])
            for (NodeId u : g.edges[j])
                if (!in_e.count(u) && seen.insert(u).second) eligible.push_back(u);
    if (eligible.empty()) return {};
    kept.push_back(eligible[rng.uniform_index(eligible.size())]);
    std::sort(kept.begin(), kept.end());
    return kept;
}

}  // namespace detail

namespace {

constexpr std::size_t kRejectionBudget = 1000;

std::vector<NodeId> draw_one(const Hypergraph& g, Rng& rng, NegStrategy strategy,
                             const ForbiddenSet& forbidden) {
    for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
        std::vector<NodeId> cand;
        switch (strategy) {
            case NegStrategy::SNS: {
                const std::size_t k = g.edges[rng.uniform_index(g.edge_count())].size();
                std::unordered_set<NodeId> members;
                while (members.size() < k)
                    members.insert(static_cast<NodeId>(rng.uniform_index(g.node_count)));
                cand.assign(members.begin(), members.end());
                std::sort(cand.begin(), cand.end());
                break;
            }
            case NegStrategy::MNS: {
                const std::size_t k = g.edges[rng.uniform_index(g.edge_count())].size();
                std::vector<NodeId> grown = detail::mns_grow(g, rng, k);
                if (grown.empty()) continue;
                // uniformly drop surplus nodes to exactly k
                while (grown.size() > k) {
                    const std::size_t d = rng.uniform_index(grown.size());
                    grown[d] = grown.back();
                    grown.pop_back();
                }
                std::sort(grown.begin(), grown.end());
                cand = std::move(grown);
                break;
            }
            case NegStrategy::CNS: {
                const auto& e = g.edges[rng.uniform_index(g.edge_count())];
                cand = detail::cns_attempt(g, rng, e);
                if (cand.empty()) continue;  // no eligible replacement, resample e
                break;
            }
            case NegStrategy::MIX:
                throw std::logic_error("MIX is expanded before draw_one");
        }
        if (cand.size() >= 2 && !forbidden.contains(cand)) return cand;
    }
    throw std::runtime_error("negative sampling failed after " +
                             std::to_string(kRejectionBudget) + " attempts (strategy " +
                             strategy_name(strategy) + ")");
}

}  // namespace

std::vector<CandidateHyperedge> sample_negatives(const Hypergraph& g, const NegSpec& spec,
                                                 const ForbiddenSet& forbidden) {
    if (spec.count < 1) throw std::invalid_argument("sample_negatives: count < 1");
    if (g.edge_count() == 0)
        throw std::invalid_argument("sample_negatives: hypergraph has no hyperedges");

    Rng rng(spec.seed);
    std::vector<std::pair<NegStrategy, std::size_t>> plan;
    if (spec.strategy == NegStrategy::MIX) {
        const auto counts = mix_counts(spec.count);
        plan = {{NegStrategy::SNS, counts[0]},
                {NegStrategy::MNS, counts[1]},
                {NegStrategy::CNS, counts[2]}};
    } else {
        plan = {{spec.strategy, spec.count}};
    }

    std::vector<CandidateHyperedge> out;
    out.reserve(spec.count);
    for (const auto& [strategy, count] : plan) {
        for (std::size_t i = 0; i < count; ++i) {
            CandidateHyperedge c;
            c.nodes = draw_one(g, rng, strategy, forbidden);
            c.provenance = Provenance::HeuristicNegative;
            out.push_back(std::move(c));
        }
    }
    return out;
}

void save_negatives(std::span<const CandidateHyperedge> negs,
                    const std::filesystem::path& path, const std::string& strategy,
                    std::uint64_t seed, std::size_t val_count, std::size_t test_count) {
    {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
        os << "# negative hyperedges, strategy " << strategy << "\n";
        for (std::size_t i = 0; i < negs.size(); ++i) {
            if (i == 0 && val_count > 0) os << "# section val\n";
            if (i == val_count) os << "# section test\n";
            const auto& e = negs[i].nodes;
            for (std::size_t j = 0; j < e.size(); ++j) os << (j ? " " : "") << e[j];
            os << '\n';
        }
    }
    std::ofstream meta(path.string() + ".meta");
    if (!meta) throw std::runtime_error("cannot open for writing: " + path.string() + ".meta");
    meta << "strategy " << strategy << "\nseed " << seed << "\nval_count " << val_count
         << "\ntest_count " << test_count << "\ntotal " << negs.size() << '\n';
}

}  // namespace sehp
