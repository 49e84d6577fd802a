#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "fd_check.hpp"
#include "test_util.hpp"
#include "sehp/checkpoint.hpp"
#include "sehp/mlp.hpp"
#include "sehp/optimizer.hpp"

using namespace sehp;

namespace {

// plain-loop forward, independent of the kernel-backed implementation
Dense naive_forward(const Mlp& m, const Dense& x) {
    Dense cur = x;
    for (const auto& layer : m.layers) {
        Dense out(cur.rows, layer.w.rows);
        for (std::size_t r = 0; r < cur.rows; ++r) {
            for (std::size_t o = 0; o < layer.w.rows; ++o) {
                double z = layer.b.v[o];
                for (std::size_t i = 0; i < layer.w.cols; ++i)
                    z += layer.w.at(o, i) * cur.at(r, i);
                switch (layer.act) {
                    case Activation::Identity: break;
                    case Activation::Relu: z = z > 0 ? z : 0; break;
                    case Activation::LeakyRelu: z = z > 0 ? z : 0.01 * z; break;
                    case Activation::Sigmoid: z = 1.0 / (1.0 + std::exp(-z)); break;
                }
                out.at(r, o) = z;
            }
        }
        cur = std::move(out);
    }
    return cur;
}

}  // namespace

TEST_CASE("zero-initialized sigmoid layer outputs 0.5 everywhere") {
    Mlp m = Mlp::zeros({3, 2}, {Activation::Sigmoid});
    Dense x(2, 3, {0.3, -1.0, 2.0, 0.0, 0.5, -0.2});
    const Dense y = mlp_forward(m, x);
    for (double v : y.v) CHECK(v == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("identity single layer with unit weights reproduces the input") {
    Mlp m = Mlp::zeros({3, 3}, {Activation::Identity});
    for (std::size_t i = 0; i < 3; ++i) m.layers[0].w.at(i, i) = 1.0;
    Dense x(2, 3, {1.0, -2.0, 3.0, 0.25, 0.0, -0.125});
    CHECK(mlp_forward(m, x).v == x.v);
}

TEST_CASE("two-layer forward matches an independent recomputation") {
    Rng rng(11);
    Mlp m = Mlp::create({4, 5, 3}, {Activation::LeakyRelu, Activation::Sigmoid}, rng);
    Dense x(3, 4);
    for (double& v : x.v) v = rng.uniform_real(-1.5, 1.5);
    const Dense got = mlp_forward(m, x);
    const Dense want = naive_forward(m, x);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        CHECK(got.v[i] == doctest::Approx(want.v[i]).epsilon(1e-12));
}

TEST_CASE("forward rejects mismatched input width") {
    Mlp m = Mlp::zeros({4, 2}, {Activation::Identity});
    Dense x(1, 3);
    CHECK(sehp::testing::throws_containing<std::invalid_argument>(
        [&] { mlp_forward(m, x); }, "layer 0"));
}

TEST_CASE("backward without a forward cache is an error") {
    Mlp m = Mlp::zeros({2, 2}, {Activation::Identity});
    MlpCache cache;
    MlpGrads grads = MlpGrads::zeros_like(m);
    Dense upstream(1, 2);
    CHECK_THROWS_AS(mlp_backward(m, cache, upstream, grads), std::runtime_error);
}

TEST_CASE("linear single layer: weight gradient equals upstream^T * x") {
    Rng rng(3);
    Mlp m = Mlp::create({3, 2}, {Activation::Identity}, rng);
    Dense x(4, 3);
    for (double& v : x.v) v = rng.uniform_real(-1, 1);
    MlpCache cache;
    mlp_forward(m, x, &cache);
    Dense upstream(4, 2);
    for (double& v : upstream.v) v = rng.uniform_real(-1, 1);
    MlpGrads grads = MlpGrads::zeros_like(m);
    mlp_backward(m, cache, upstream, grads);

    for (std::size_t o = 0; o < 2; ++o)
        for (std::size_t i = 0; i < 3; ++i) {
            double want = 0.0;
            for (std::size_t r = 0; r < 4; ++r) want += upstream.at(r, o) * x.at(r, i);
            CHECK(grads.dw[0].at(o, i) == doctest::Approx(want).epsilon(1e-12));
        }
}

TEST_CASE("three-layer analytic gradients pass central finite differences") {
    Rng rng(19);
    Mlp m = Mlp::create({4, 6, 5, 1},
                        {Activation::LeakyRelu, Activation::Relu, Activation::Sigmoid}, rng);
    Dense x(5, 4);
    for (double& v : x.v) v = rng.uniform_real(-1, 1);

    // loss = mean of outputs
    const auto loss = [&] {
        const Dense y = mlp_forward(m, x);
        double total = 0.0;
        for (double v : y.v) total += v;
        return total / static_cast<double>(y.size());
    };

    MlpCache cache;
    const Dense y = mlp_forward(m, x, &cache);
    Dense upstream(y.rows, y.cols);
    upstream.fill(1.0 / static_cast<double>(y.size()));
    MlpGrads grads = MlpGrads::zeros_like(m);
    mlp_backward(m, cache, upstream, grads);

    auto params = m.params();
    std::vector<const Dense*> analytic;
    for (Dense* g : grads.flat()) analytic.push_back(g);
    Rng probe_rng(101);
    const auto probes = testing::fd_probes(params, analytic, loss, 25, probe_rng);
    CHECK(testing::max_rel_error(probes) <= 1e-4);
}

TEST_CASE("input gradients also pass finite differences") {
    Rng rng(23);
    Mlp m = Mlp::create({3, 4, 1}, {Activation::LeakyRelu, Activation::Sigmoid}, rng);
    Dense x(2, 3);
    for (double& v : x.v) v = rng.uniform_real(-1, 1);

    const auto loss = [&] {
        const Dense y = mlp_forward(m, x);
        double total = 0.0;
        for (double v : y.v) total += v;
        return total;
    };

    MlpCache cache;
    Dense y = mlp_forward(m, x, &cache);
    Dense upstream(y.rows, y.cols);
    upstream.fill(1.0);
    MlpGrads grads = MlpGrads::zeros_like(m);
    const Dense dx = mlp_backward(m, cache, upstream, grads);

    Dense* xp = &x;
    const Dense* dxp = &dx;
    Rng probe_rng(55);
    const auto probes = testing::fd_probes({&xp, 1}, {&dxp, 1}, loss, 10, probe_rng);
    CHECK(testing::max_rel_error(probes) <= 1e-4);
}

TEST_CASE("fixed seed gives bit-identical initialization") {
    Rng a(77), b(77);
    const Mlp ma = Mlp::create({8, 4}, {Activation::Relu}, a);
    const Mlp mb = Mlp::create({8, 4}, {Activation::Relu}, b);
    CHECK(ma == mb);
    const double bound = 1.0 / std::sqrt(8.0);
    for (double w : ma.layers[0].w.v) {
        CHECK(w >= -bound);
        CHECK(w <= bound);
    }
}

TEST_CASE("adaptive-moment step: zero gradient leaves parameters unchanged") {
    Dense p(2, 2, {1.0, -2.0, 3.0, 4.0});
    const Dense before = p;
    Dense g(2, 2);
    OptState opt;
    Dense* pp = &p;
    const Dense* gp = &g;
    opt.step({&pp, 1}, {&gp, 1});
    CHECK(p == before);
    CHECK(opt.step_count == 1);
    opt.step({&pp, 1}, {&gp, 1});
    CHECK(opt.step_count == 2);
}

TEST_CASE("adaptive-moment descent shrinks |w| on f(w) = w^2") {
    Dense w(1, 1, {1.0});
    OptState opt({0.01});
    double prev = std::fabs(w.v[0]);
    for (int step = 0; step < 100; ++step) {
        Dense g(1, 1, {2.0 * w.v[0]});
        Dense* pp = &w;
        const Dense* gp = &g;
        opt.step({&pp, 1}, {&gp, 1});
        CHECK(std::fabs(w.v[0]) < prev);
        prev = std::fabs(w.v[0]);
    }
}

TEST_CASE("non-finite gradients abort the step") {
    Dense p(1, 2, {0.5, 0.5});
    Dense g(1, 2);
    g.v[0] = std::numeric_limits<double>::quiet_NaN();
    OptState opt;
    Dense* pp = &p;
    const Dense* gp = &g;
    CHECK_THROWS_AS(opt.step({&pp, 1}, {&gp, 1}), std::runtime_error);
}

TEST_CASE("checkpoint container round-trips bit-exactly") {
    Rng rng(5);
    Mlp m = Mlp::create({7, 3, 2}, {Activation::LeakyRelu, Activation::Sigmoid}, rng);
    Container c;
    c.put_mlp("model", m);
    c.meta["note"] = "round-trip";

    const auto path = std::filesystem::temp_directory_path() / "sehp_ckpt_test.bin";
    save_container(path, c);
    const Container loaded = load_container(path);
    std::filesystem::remove(path);

    CHECK(loaded.meta.at("note") == "round-trip");
    const Mlp back = loaded.get_mlp("model");
    CHECK(back == m);  // exact, including every bit of every double
}
