#include "sehp/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sehp {

double clamp_score(double s) {
    return std::clamp(s, kScoreClampEps, 1.0 - kScoreClampEps);
}

double discriminator_loss(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("discriminator_loss: scores/labels length mismatch");
    if (scores.empty()) throw std::invalid_argument("discriminator_loss: empty batch");
    double total = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double s = clamp_score(scores[i]);
        total += labels[i] ? std::log(s) : std::log(1.0 - s);
    }
    return -total / static_cast<double>(scores.size());
}

double generator_adversarial_loss(std::span<const double> scores) {
    if (scores.empty()) throw std::invalid_argument("generator_adversarial_loss: empty batch");
    double total = 0.0;
    for (double s : scores) total += s;
    return -total / static_cast<double>(scores.size());
}

double boundary_loss(std::span<const std::vector<double>> step_scores) {
    if (step_scores.empty()) throw std::invalid_argument("boundary_loss: empty batch");
    const std::size_t T = step_scores.front().size() - 1;
    if (T < 1) throw std::invalid_argument("boundary_loss: need at least one step");
    double total = 0.0;
    for (const auto& chain : step_scores) {
        if (chain.size() != T + 1)
            throw std::invalid_argument("boundary_loss: mismatched step count (expected " +
                                        std::to_string(T + 1) + " scores, got " +
                                        std::to_string(chain.size()) + ")");
        for (std::size_t t = 1; t <= T; ++t)
            total += std::log(clamp_score(chain[t - 1]) / clamp_score(chain[t]));
    }
    return total / static_cast<double>(step_scores.size() * T);
}

double generator_total_loss(double adversarial, double boundary) {
    return adversarial + boundary;
}

}  // namespace sehp
