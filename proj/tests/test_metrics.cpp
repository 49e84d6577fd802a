#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "sehp/metrics.hpp"

using namespace sehp;

TEST_CASE("auroc on hand-ordered pairs") {
    CHECK(auroc(std::vector<double>{0.9, 0.8}, std::vector<int>{1, 0}) == 1.0);
    CHECK(auroc(std::vector<double>{0.1, 0.9}, std::vector<int>{1, 0}) == 0.0);
    CHECK(auroc(std::vector<double>{0.7, 0.7, 0.3}, std::vector<int>{1, 0, 0}) == 0.75);
}

TEST_CASE("auroc requires both classes") {
    CHECK_THROWS_AS(auroc(std::vector<double>{0.5, 0.6}, std::vector<int>{1, 1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(auroc(std::vector<double>{0.5}, std::vector<int>{0}),
                    std::invalid_argument);
}

TEST_CASE("rank computation equals the all-pairs oracle on random sets") {
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.uniform_index(49);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool has0 = false, has1 = false;
        for (std::size_t i = 0; i < n; ++i) {
            // coarse grid makes ties frequent
            scores[i] = static_cast<double>(rng.uniform_index(10)) / 10.0;
            labels[i] = static_cast<int>(rng.uniform_index(2));
            (labels[i] ? has1 : has0) = true;
        }
        if (!has0) labels[0] = 0;
        if (!has1) labels[n - 1] = 1;
        const double want = testing::brute_force_auroc(scores, labels);
        CHECK(std::fabs(auroc(scores, labels) - want) <= 1e-12);
    }
}

TEST_CASE("auroc is invariant under strictly monotone score transforms") {
    Rng rng(33);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 10 + rng.uniform_index(30);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = rng.uniform_real(-3, 3);
            labels[i] = static_cast<int>(rng.uniform_index(2));
        }
        labels[0] = 0;
        labels[1] = 1;
        const double base = auroc(scores, labels);

        const double a = rng.uniform_real(0.5, 3.0);
        const double b = rng.uniform_real(-2.0, 2.0);
        std::vector<double> affine(n), expish(n);
        for (std::size_t i = 0; i < n; ++i) {
            affine[i] = a * scores[i] + b;
            expish[i] = std::exp(scores[i]);
        }
        CHECK(auroc(affine, labels) == doctest::Approx(base).epsilon(1e-12));
        CHECK(auroc(expish, labels) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("auroc complement symmetry under score negation") {
    Rng rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 5 + rng.uniform_index(40);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = static_cast<double>(rng.uniform_index(8));
            labels[i] = static_cast<int>(rng.uniform_index(2));
        }
        labels[0] = 0;
        labels[1] = 1;
        std::vector<double> negated(n);
        for (std::size_t i = 0; i < n; ++i) negated[i] = -scores[i];
        CHECK(auroc(scores, labels) + auroc(negated, labels) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("precision counts true positives over predicted positives") {
    CHECK(precision_at(std::vector<double>{0.9, 0.6, 0.4}, std::vector<int>{1, 0, 0}) == 0.5);
    CHECK(precision_at(std::vector<double>{0.9, 0.8, 0.1, 0.2},
                       std::vector<int>{1, 1, 0, 0}) == 1.0);
    CHECK_THROWS_AS(
        precision_at(std::vector<double>{0.4, 0.4}, std::vector<int>{1, 0}),
        std::runtime_error);
}

TEST_CASE("eval sets pair each positive with one fresh negative") {
    const Hypergraph g = synth_hypergraph(50, 40, 3, 5, 4, 8);
    const ForbiddenSet observed(g);
    const std::vector<EdgeId> test_ids{0, 3, 5, 7, 9, 11};
    const EvalSet set = build_eval_set(g, test_ids, NegStrategy::MNS, observed, 77);
    CHECK(set.positives.size() == test_ids.size());
    CHECK(set.negatives.size() == test_ids.size());
    for (const auto& c : set.negatives) CHECK_FALSE(observed.contains(c.nodes));
    for (std::size_t i = 0; i < test_ids.size(); ++i)
        CHECK(set.positives[i].nodes == g.edges[test_ids[i]]);

    const EvalSet again = build_eval_set(g, test_ids, NegStrategy::MNS, observed, 77);
    for (std::size_t i = 0; i < test_ids.size(); ++i)
        CHECK(again.negatives[i].nodes == set.negatives[i].nodes);
}
