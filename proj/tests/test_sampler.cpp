#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "sehp/sampler.hpp"
#include "test_util.hpp"

using namespace sehp;

namespace {

Hypergraph three_edges() {
    Hypergraph g;
    g.node_count = 5;
    g.edges = {{0, 1}, {1, 2}, {3, 4}};
    g.finalize();
    return g;
}

bool shares_node(const std::vector<NodeId>& a, const std::set<NodeId>& pool) {
    return std::any_of(a.begin(), a.end(), [&](NodeId v) { return pool.count(v) > 0; });
}

}  // namespace

TEST_CASE("batch of one is exactly the seed hyperedge") {
    const Hypergraph g = three_edges();
    const std::vector<EdgeId> train{0, 1, 2};
    const SubHypergraph sub = sample_sub_hypergraph(g, train, 1, 7);
    CHECK(sub.edge_ids.size() == 1);
    CHECK(sub.nodes.size() == g.edges[sub.edge_ids[0]].size());
}

TEST_CASE("expansion is forced onto the only neighbor") {
    const Hypergraph g = three_edges();
    const std::vector<EdgeId> train{0, 1, 2};
    bool found_start_at_0 = false;
    for (std::uint64_t seed = 0; seed < 50 && !found_start_at_0; ++seed) {
        const SubHypergraph sub = sample_sub_hypergraph(g, train, 2, seed);
        REQUIRE(sub.edge_ids.size() == 2);
        if (sub.edge_ids[0] == 0) {
            found_start_at_0 = true;
            CHECK(sub.edge_ids[1] == 1);  // {1,2} is the only hyperedge sharing a node
        }
    }
    CHECK(found_start_at_0);
}

TEST_CASE("oversized batch clamps to the training set") {
    const Hypergraph g = three_edges();
    const std::vector<EdgeId> train{0, 1};
    const SubHypergraph sub = sample_sub_hypergraph(g, train, 10, 3);
    CHECK(sub.edge_ids.size() == 2);
}

TEST_CASE("every expansion step respects shared-node adjacency") {
    const Hypergraph g = synth_hypergraph(100, 60, 3, 5, 4, 21);
    std::vector<EdgeId> train(g.edge_count());
    for (EdgeId i = 0; i < train.size(); ++i) train[i] = i;

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const SubHypergraph sub = sample_sub_hypergraph(g, train, 16, seed);
        REQUIRE(sub.edge_ids.size() == 16);
        std::set<NodeId> covered;
        std::set<EdgeId> picked;
        for (std::size_t i = 0; i < sub.edge_ids.size(); ++i) {
            const auto& e = g.edges[sub.edge_ids[i]];
            if (i > 0 && !shares_node(e, covered)) {
                // legitimate only when the frontier was empty: no unpicked
                // training hyperedge may touch the covered node set
                for (EdgeId j : train)
                    if (!picked.count(j))
                        CHECK_FALSE(shares_node(g.edges[j], covered));
            }
            covered.insert(e.begin(), e.end());
            picked.insert(sub.edge_ids[i]);
        }
    }
}

TEST_CASE("sub-hypergraph induced nodes are exactly the member union") {
    const Hypergraph g = synth_hypergraph(80, 40, 3, 5, 4, 5);
    std::vector<EdgeId> train(g.edge_count());
    for (EdgeId i = 0; i < train.size(); ++i) train[i] = i;
    const SubHypergraph sub = sample_sub_hypergraph(g, train, 8, 11);
    std::set<NodeId> want;
    for (EdgeId j : sub.edge_ids) want.insert(g.edges[j].begin(), g.edges[j].end());
    CHECK(std::set<NodeId>(sub.nodes.begin(), sub.nodes.end()) == want);
    for (std::size_t i = 0; i < sub.nodes.size(); ++i)
        CHECK(sub.local_of(sub.nodes[i]) == i);
}

TEST_CASE("SNS on a five-node hypergraph avoids the observed edge") {
    Hypergraph g;
    g.node_count = 5;
    g.edges = {{0, 1, 2}};
    g.finalize();
    const ForbiddenSet forbidden(g);
    const auto negs = sample_negatives(g, {NegStrategy::SNS, 1, 4}, forbidden);
    REQUIRE(negs.size() == 1);
    CHECK(negs[0].nodes.size() == 3);
    CHECK(negs[0].nodes != std::vector<NodeId>{0, 1, 2});
    CHECK(negs[0].provenance == Provenance::HeuristicNegative);
}

TEST_CASE("CNS candidates enumerate exactly the adjacent single-swap sets") {
    Hypergraph g;
    g.node_count = 4;
    g.edges = {{0, 1, 2}, {2, 3}};
    g.finalize();
    const ForbiddenSet forbidden(g);

    // brute-force enumeration of every legal CNS output on this hypergraph
    const std::set<std::vector<NodeId>> legal{{1, 2, 3}, {0, 2, 3}, {0, 2}, {1, 2}};

    bool saw_spec_case = false;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto negs = sample_negatives(g, {NegStrategy::CNS, 1, seed}, forbidden);
        REQUIRE(negs.size() == 1);
        CHECK(legal.count(negs[0].nodes) == 1);
        if (negs[0].nodes == std::vector<NodeId>{1, 2, 3}) saw_spec_case = true;
    }
    CHECK(saw_spec_case);  // e={0,1,2}, v=0 forces u=3
}

TEST_CASE("CNS attempts differ from their source in exactly one node") {
    const Hypergraph g = synth_hypergraph(50, 30, 3, 5, 3, 13);
    Rng rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const auto& e = g.edges[rng.uniform_index(g.edge_count())];
        const auto cand = detail::cns_attempt(g, rng, e);
        if (cand.empty()) continue;
        CHECK(cand.size() == e.size());
        std::vector<NodeId> diff;
        std::set_symmetric_difference(cand.begin(), cand.end(), e.begin(), e.end(),
                                      std::back_inserter(diff));
        CHECK(diff.size() == 2);  // one removed, one added
    }
}

TEST_CASE("MNS pre-drop sets are connected under shared-hyperedge adjacency") {
    const Hypergraph g = synth_hypergraph(50, 30, 3, 5, 3, 29);
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 4 + rng.uniform_index(8);
        const auto grown = detail::mns_grow(g, rng, k);
        if (grown.empty()) continue;
        CHECK(grown.size() >= k);
        // BFS over grown nodes, adjacency via hyperedges fully inside g
        const std::set<NodeId> pool(grown.begin(), grown.end());
        std::set<NodeId> seen{grown[0]};
        std::vector<NodeId> queue{grown[0]};
        while (!queue.empty()) {
            const NodeId v = queue.back();
            queue.pop_back();
            for (EdgeId j : g.node_edges[v])
                for (NodeId u : g.edges[j])
                    if (pool.count(u) && seen.insert(u).second) queue.push_back(u);
        }
        CHECK(seen.size() == pool.size());
    }
}

TEST_CASE("MIX splits the count as evenly as possible") {
    CHECK(mix_counts(10) == std::array<std::size_t, 3>{4, 3, 3});
    CHECK(mix_counts(9) == std::array<std::size_t, 3>{3, 3, 3});
    CHECK(mix_counts(11) == std::array<std::size_t, 3>{4, 4, 3});
    CHECK(mix_counts(1) == std::array<std::size_t, 3>{1, 0, 0});
}

TEST_CASE("no sampled negative collides with an observed hyperedge") {
    const Hypergraph g = synth_hypergraph(50, 40, 3, 5, 4, 77);
    const ForbiddenSet forbidden(g);
    for (NegStrategy s :
         {NegStrategy::SNS, NegStrategy::MNS, NegStrategy::CNS, NegStrategy::MIX}) {
        const auto negs = sample_negatives(g, {s, 2000, 5}, forbidden);
        REQUIRE(negs.size() == 2000);
        for (const auto& c : negs) {
            CHECK_FALSE(forbidden.contains(c.nodes));
            CHECK(c.nodes.size() >= 2);
            CHECK(std::is_sorted(c.nodes.begin(), c.nodes.end()));
        }
    }
}

TEST_CASE("SNS sizes track the positive size distribution") {
    const Hypergraph g = synth_hypergraph(60, 50, 2, 6, 3, 41);
    const ForbiddenSet forbidden(g);
    const std::size_t n_samples = 10000;
    const auto negs = sample_negatives(g, {NegStrategy::SNS, n_samples, 8}, forbidden);

    std::map<std::size_t, double> expected;  // positive size histogram
    for (const auto& e : g.edges) expected[e.size()] += 1.0;
    for (auto& [k, v] : expected) v *= static_cast<double>(n_samples) / g.edge_count();

    std::map<std::size_t, double> observed;
    for (const auto& c : negs) observed[c.nodes.size()] += 1.0;

    double chi2 = 0.0;
    for (const auto& [k, want] : expected) {
        const double got = observed.count(k) ? observed[k] : 0.0;
        chi2 += (got - want) * (got - want) / want;
    }
    CHECK(chi2 < 30.0);  // df = 4, far beyond any plausible quantile
}

TEST_CASE("fixed seed reproduces the negative list") {
    const Hypergraph g = synth_hypergraph(40, 30, 3, 5, 2, 6);
    const ForbiddenSet forbidden(g);
    const auto a = sample_negatives(g, {NegStrategy::MIX, 50, 12}, forbidden);
    const auto b = sample_negatives(g, {NegStrategy::MIX, 50, 12}, forbidden);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].nodes == b[i].nodes);
}

TEST_CASE("exhausted rejection budget names the strategy") {
    Hypergraph g;
    g.node_count = 2;
    g.edges = {{0, 1}};
    g.finalize();
    const ForbiddenSet forbidden(g);
    CHECK(sehp::testing::throws_containing<std::runtime_error>(
        [&] { sample_negatives(g, {NegStrategy::SNS, 1, 1}, forbidden); }, "SNS"));
}

TEST_CASE("negative sets persist with their sidecar metadata") {
    const Hypergraph g = synth_hypergraph(30, 20, 2, 4, 2, 3);
    const ForbiddenSet forbidden(g);
    const auto negs = sample_negatives(g, {NegStrategy::SNS, 10, 2}, forbidden);
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "sehp_negs.txt";
    save_negatives(negs, path, "SNS", 2, 4, 6);

    const Hypergraph loaded = load_hypergraph(path);  // comments skipped
    CHECK(loaded.edge_count() == 10);

    std::ifstream meta(path.string() + ".meta");
    std::string text((std::istreambuf_iterator<char>(meta)),
                     std::istreambuf_iterator<char>());
    CHECK(text.find("strategy SNS") != std::string::npos);
    CHECK(text.find("val_count 4") != std::string::npos);
    CHECK(text.find("test_count 6") != std::string::npos);
    fs::remove(path);
    fs::remove(path.string() + ".meta");
}
