#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace sehp {

// Every random draw in the project flows from one root seed, fanned out to
// named sub-streams so that components stay decoupled and runs replay
// exactly. Draw algorithms are pinned here instead of relying on
// std::*_distribution, whose output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, n)
    std::size_t uniform_index(std::size_t n) {
        // Lemire's multiply-shift with rejection
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        std::uint64_t x = eng_();
        __uint128_t m = static_cast<__uint128_t>(x) * range;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < range) {
            const std::uint64_t threshold = (0 - range) % range;
            while (lo < threshold) {
                x = eng_();
                m = static_cast<__uint128_t>(x) * range;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::size_t>(m >> 64);
    }

    // uniform in [0, 1)
    double uniform_real() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

    // standard normal, Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform_real();
        while (u1 <= 0.0) u1 = uniform_real();
        const double u2 = uniform_real();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[uniform_index(i)]);
    }

private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Stable 64-bit sub-seed for a named stream under a root seed.
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index);

}  // namespace sehp
