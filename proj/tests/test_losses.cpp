#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "sehp/losses.hpp"
#include "sehp/rng.hpp"

using namespace sehp;

TEST_CASE("cross entropy at the symmetric point is ln 2") {
    const std::vector<double> s{0.5};
    CHECK(std::fabs(discriminator_loss(s, std::vector<int>{1}) - std::log(2.0)) <= 1e-9);
    CHECK(std::fabs(discriminator_loss(s, std::vector<int>{0}) - std::log(2.0)) <= 1e-9);
}

TEST_CASE("cross entropy on a confident pair") {
    const std::vector<double> s{0.9, 0.1};
    const std::vector<int> y{1, 0};
    CHECK(discriminator_loss(s, y) == doctest::Approx(0.105361).epsilon(1e-5));
}

TEST_CASE("single positive sample reduces to -log s") {
    for (double s : {0.3, 0.62, 0.999}) {
        const std::vector<double> scores{s};
        CHECK(discriminator_loss(scores, std::vector<int>{1}) ==
              doctest::Approx(-std::log(s)).epsilon(1e-12));
    }
}

TEST_CASE("mismatched lengths are rejected") {
    const std::vector<double> s{0.5, 0.5};
    const std::vector<int> y{1};
    CHECK_THROWS_AS(discriminator_loss(s, y), std::invalid_argument);
}

TEST_CASE("clamping keeps extreme scores finite") {
    const std::vector<double> s{0.0, 1.0};
    const std::vector<int> y{1, 0};
    CHECK(std::isfinite(discriminator_loss(s, y)));
}

TEST_CASE("adversarial loss is the negated mean score") {
    CHECK(generator_adversarial_loss(std::vector<double>{0.2, 0.4}) ==
          doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(generator_adversarial_loss(std::vector<double>{1.0, 1.0, 1.0}) ==
          doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(generator_adversarial_loss(std::vector<double>{}),
                    std::invalid_argument);

    Rng rng(5);
    std::vector<double> scores(100);
    double sum = 0.0;
    for (double& x : scores) {
        x = rng.uniform_real();
        sum += x;
    }
    CHECK(std::fabs(generator_adversarial_loss(scores) + sum / 100.0) <= 1e-12);
}

TEST_CASE("boundary loss of constant chains is exactly zero") {
    const std::vector<std::vector<double>> chains{{0.37, 0.37, 0.37}, {0.81, 0.81, 0.81}};
    CHECK(boundary_loss(chains) == 0.0);
}

TEST_CASE("boundary loss of a doubling step is ln(1/2)") {
    const std::vector<std::vector<double>> chains{{0.2, 0.4}};
    CHECK(boundary_loss(chains) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("boundary loss is invariant to uniform score scaling") {
    const std::vector<std::vector<double>> base{{0.05, 0.12, 0.31}, {0.2, 0.15, 0.09}};
    std::vector<std::vector<double>> doubled = base;
    for (auto& chain : doubled)
        for (double& s : chain) s *= 2.0;
    CHECK(boundary_loss(base) == boundary_loss(doubled));
}

TEST_CASE("boundary loss rejects ragged chains") {
    const std::vector<std::vector<double>> chains{{0.2, 0.4}, {0.2, 0.4, 0.6}};
    CHECK_THROWS_AS(boundary_loss(chains), std::invalid_argument);
}

TEST_CASE("total generator loss is the plain sum") {
    CHECK(generator_total_loss(-0.3, std::log(0.5)) ==
          doctest::Approx(-0.993147).epsilon(1e-5));
    CHECK(generator_total_loss(0.0, 0.0) == 0.0);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const double a = rng.uniform_real(-2, 2), b = rng.uniform_real(-2, 2);
        CHECK(generator_total_loss(a, b) == a + b);
    }
}
