#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "fd_check.hpp"
#include "test_util.hpp"
#include "sehp/discriminator.hpp"

using namespace sehp;

namespace {

Hypergraph pair_graph() {
    Hypergraph g;
    g.node_count = 2;
    g.edges = {{0, 1}};
    g.features = Dense(2, 2, {1.0, 0.0, 0.0, 1.0});
    g.finalize();
    return g;
}

SubHypergraph whole_graph_batch(const Hypergraph& g) {
    std::vector<EdgeId> ids(g.edge_count());
    for (EdgeId i = 0; i < ids.size(); ++i) ids[i] = i;
    return SubHypergraph::from_edges(g, ids);
}

}  // namespace

TEST_CASE("one message-passing layer reproduces the hand-computed means") {
    const Hypergraph g = pair_graph();
    const SubHypergraph sub = whole_graph_batch(g);

    EncoderModel enc = make_zero_encoder(2, 2, 1);
    // identity on the neighborhood half, zero on the self half
    enc.layers[0].layers[0].w.at(0, 0) = 1.0;
    enc.layers[0].layers[0].w.at(1, 1) = 1.0;

    const Dense V = encode_nodes(enc, sub, sub.gather_features());
    REQUIRE(V.rows == 2);
    for (std::size_t r = 0; r < 2; ++r) {
        CHECK(V.at(r, 0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(V.at(r, 1) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("zero features produce zero embeddings") {
    Hypergraph g = pair_graph();
    g.features.fill(0.0);
    const SubHypergraph sub = whole_graph_batch(g);
    Rng rng(2);
    const EncoderModel enc = [&] {
        EncoderModel e = make_encoder(2, 4, 2, rng);
        for (Mlp& layer : e.layers) layer.layers[0].b.fill(0.0);  // keep the map linear
        return e;
    }();
    const Dense V = encode_nodes(enc, sub, sub.gather_features());
    for (double v : V.v) CHECK(v == 0.0);
}

TEST_CASE("isolated nodes see a zero neighborhood") {
    Hypergraph g;
    g.node_count = 3;
    g.edges = {{0, 1}};
    g.features = Dense(3, 2, {1.0, 0.0, 0.0, 1.0, 0.5, 0.5});
    g.finalize();
    SubHypergraph sub = SubHypergraph::from_edges(g, {0});
    sub.extend_nodes(std::vector<NodeId>{2});
    REQUIRE(sub.node_count() == 3);

    EncoderModel enc = make_zero_encoder(2, 2, 1);
    // read out only the self half
    enc.layers[0].layers[0].w.at(0, 2) = 1.0;
    enc.layers[0].layers[0].w.at(1, 3) = 1.0;
    const Dense V = encode_nodes(enc, sub, sub.gather_features());
    CHECK(V.at(2, 0) == 0.5);
    CHECK(V.at(2, 1) == 0.5);
}

TEST_CASE("embeddings ignore nodes outside the message-passing horizon") {
    Hypergraph g;
    g.node_count = 4;
    g.edges = {{0, 1}, {2, 3}};  // two disconnected hyperedges
    g.features = Dense(4, 2, {1, 0, 0, 1, 1, 1, 0.5, 0.5});
    g.finalize();
    Rng rng(8);
    const EncoderModel enc = make_encoder(2, 4, 2, rng);

    const SubHypergraph sub = whole_graph_batch(g);
    const Dense before = encode_nodes(enc, sub, sub.gather_features());

    Hypergraph g2 = g;
    g2.features.at(2, 0) = -3.0;  // perturb a node of the far component
    const SubHypergraph sub2 = whole_graph_batch(g2);
    const Dense after = encode_nodes(enc, sub2, sub2.gather_features());

    for (std::size_t c = 0; c < before.cols; ++c) {
        CHECK(before.at(0, c) == after.at(0, c));
        CHECK(before.at(1, c) == after.at(1, c));
    }
}

TEST_CASE("max-min aggregation follows the definition") {
    Dense v1(2, 2, {1, 2, 3, 0});
    const std::vector<std::uint32_t> both{0, 1};
    CHECK(aggregate_hyperedge(v1, both) == std::vector<double>{2, 2});

    Dense v2(2, 2, {0.7, -1.2, 0.7, -1.2});
    CHECK(aggregate_hyperedge(v2, both) == std::vector<double>{0, 0});

    Dense v3(3, 2, {1, 0, 0, 1, 2, 2});
    const std::vector<std::uint32_t> all{0, 1, 2};
    CHECK(aggregate_hyperedge(v3, all) == std::vector<double>{2, 2});

    CHECK_THROWS_AS(aggregate_hyperedge(v3, std::vector<std::uint32_t>{}),
                    std::invalid_argument);
}

TEST_CASE("aggregation output is non-negative for random embeddings") {
    Rng rng(44);
    Dense v(10, 6);
    for (double& x : v.v) x = rng.uniform_real(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::uint32_t> members;
        const std::size_t k = 1 + rng.uniform_index(10);
        for (std::size_t i = 0; i < k; ++i)
            members.push_back(static_cast<std::uint32_t>(rng.uniform_index(10)));
        for (double x : aggregate_hyperedge(v, members)) CHECK(x >= 0.0);
    }
}

TEST_CASE("zero-initialized classifier scores everything 0.5") {
    const Mlp clf = make_zero_classifier(4);
    const std::vector<double> e{0.1, -2.0, 3.0, 0.7};
    CHECK(classify(clf, e) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("raising the final logit strictly raises the score") {
    Rng rng(6);
    Mlp clf = make_classifier(4, rng);
    const std::vector<double> e{0.4, 0.1, -0.3, 0.9};
    const double base = classify(clf, e);
    clf.layers.back().b.v[0] += 0.25;
    CHECK(classify(clf, e) > base);
}

TEST_CASE("classify agrees with a direct forward pass") {
    Rng rng(15);
    const Mlp clf = make_classifier(6, rng);
    std::vector<double> e(6);
    for (double& x : e) x = rng.uniform_real(-1, 1);
    Dense x(1, 6, std::vector<double>(e));
    CHECK(classify(clf, e) == mlp_forward(clf, x).v[0]);
}

TEST_CASE("batched scoring equals per-candidate scoring") {
    const Hypergraph g = synth_hypergraph(60, 30, 3, 5, 3, 10);
    std::vector<EdgeId> ids(g.edge_count());
    for (EdgeId i = 0; i < ids.size(); ++i) ids[i] = i;
    const SubHypergraph sub = SubHypergraph::from_edges(g, ids);

    Rng rng(77);
    const EncoderModel enc = make_encoder(g.feature_dim(), 8, 2, rng);
    const Mlp clf = make_classifier(8, rng);

    std::vector<CandidateHyperedge> cands;
    for (EdgeId j = 0; j < 100; ++j) {
        CandidateHyperedge c;
        c.nodes = g.edges[j % g.edge_count()];
        cands.push_back(std::move(c));
    }
    const auto batched = score_candidates(enc, clf, sub, sub.gather_features(), cands);
    REQUIRE(batched.size() == cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
        const auto single =
            score_candidates(enc, clf, sub, sub.gather_features(), {&cands[i], 1});
        CHECK(std::fabs(batched[i] - single[0]) <= 1e-12);
    }
}

TEST_CASE("empty candidate list scores to an empty list") {
    const Hypergraph g = pair_graph();
    const SubHypergraph sub = whole_graph_batch(g);
    Rng rng(1);
    const EncoderModel enc = make_encoder(2, 4, 1, rng);
    const Mlp clf = make_classifier(4, rng);
    CHECK(score_candidates(enc, clf, sub, sub.gather_features(), {}).empty());
}

TEST_CASE("candidates outside the sub-hypergraph are rejected by index") {
    Hypergraph g;
    g.node_count = 4;
    g.edges = {{0, 1}, {2, 3}};
    g.features = Dense(4, 2, {1, 0, 0, 1, 1, 1, 0, 0});
    g.finalize();
    const SubHypergraph sub = SubHypergraph::from_edges(g, {0});
    Rng rng(1);
    const EncoderModel enc = make_encoder(2, 4, 1, rng);
    const Mlp clf = make_classifier(4, rng);
    CandidateHyperedge bad;
    bad.nodes = {0, 3};  // node 3 not induced
    CHECK(sehp::testing::throws_containing<std::invalid_argument>(
        [&] { score_candidates(enc, clf, sub, sub.gather_features(), {&bad, 1}); },
        "candidate 0"));
}

TEST_CASE("candidate scores are invariant to member order") {
    const Hypergraph g = synth_hypergraph(40, 20, 3, 5, 2, 3);
    std::vector<EdgeId> ids(g.edge_count());
    for (EdgeId i = 0; i < ids.size(); ++i) ids[i] = i;
    const SubHypergraph sub = SubHypergraph::from_edges(g, ids);
    Rng rng(9);
    const EncoderModel enc = make_encoder(g.feature_dim(), 8, 2, rng);
    const Mlp clf = make_classifier(8, rng);

    CandidateHyperedge sorted_c, shuffled_c;
    sorted_c.nodes = g.edges[0];
    shuffled_c.nodes = g.edges[0];
    std::reverse(shuffled_c.nodes.begin(), shuffled_c.nodes.end());
    const auto a = score_candidates(enc, clf, sub, sub.gather_features(), {&sorted_c, 1});
    const auto b = score_candidates(enc, clf, sub, sub.gather_features(), {&shuffled_c, 1});
    CHECK(a[0] == b[0]);
}

TEST_CASE("end-to-end mean-score gradients pass finite differences") {
    const Hypergraph g = synth_hypergraph(40, 20, 3, 5, 2, 33);
    std::vector<EdgeId> ids(g.edge_count());
    for (EdgeId i = 0; i < ids.size(); ++i) ids[i] = i;
    const SubHypergraph sub = SubHypergraph::from_edges(g, ids);
    const Dense features = sub.gather_features();

    Rng rng(3);
    EncoderModel enc = make_encoder(g.feature_dim(), 6, 2, rng);
    Mlp clf = make_classifier(6, rng);

    // objective: mean candidate score over the batch positives
    const auto loss = [&] {
        EncodeCache cache;
        const Dense V = encode_nodes(enc, sub, features, &cache);
        double total = 0.0;
        for (const auto& members : sub.local_edges)
            total += classify(clf, aggregate_hyperedge(V, members));
        return total / static_cast<double>(sub.local_edges.size());
    };

    EncodeCache enc_cache;
    const Dense V = encode_nodes(enc, sub, features, &enc_cache);
    Dense emb(sub.local_edges.size(), 6);
    std::vector<AggregateCache> agg(sub.local_edges.size());
    for (std::size_t i = 0; i < sub.local_edges.size(); ++i) {
        const auto e = aggregate_hyperedge(V, sub.local_edges[i], agg[i]);
        std::copy(e.begin(), e.end(), emb.row(i));
    }
    MlpCache clf_cache;
    mlp_forward(clf, emb, &clf_cache);
    Dense upstream(sub.local_edges.size(), 1);
    upstream.fill(1.0 / static_cast<double>(sub.local_edges.size()));
    MlpGrads clf_grads = MlpGrads::zeros_like(clf);
    const Dense d_emb = mlp_backward(clf, clf_cache, upstream, clf_grads);

    Dense dV(V.rows, V.cols);
    for (std::size_t i = 0; i < sub.local_edges.size(); ++i)
        for (std::size_t c = 0; c < V.cols; ++c) {
            dV.at(agg[i].argmax[c], c) += d_emb.at(i, c);
            dV.at(agg[i].argmin[c], c) -= d_emb.at(i, c);
        }
    EncoderGrads enc_grads = EncoderGrads::zeros_like(enc);
    encode_backward(enc, sub, enc_cache, dV, enc_grads);

    std::vector<Dense*> params = enc.params();
    for (Dense* p : clf.params()) params.push_back(p);
    std::vector<const Dense*> analytic;
    for (Dense* p : enc_grads.flat()) analytic.push_back(p);
    for (Dense* p : clf_grads.flat()) analytic.push_back(p);

    Rng probe_rng(5);
    const auto probes = testing::fd_probes(params, analytic, loss, 30, probe_rng);
    CHECK(testing::max_rel_error(probes) <= 1e-4);
}
