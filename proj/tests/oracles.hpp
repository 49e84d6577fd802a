#pragma once

// Brute-force metric oracles, deliberately independent of src/metrics.cpp.

#include <span>
#include <vector>

namespace sehp::testing {

// all-pairs P(score_pos > score_neg) + 0.5 P(equal)
inline double brute_force_auroc(std::span<const double> scores, std::span<const int> labels) {
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!labels[i]) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels[j]) continue;
            ++pairs;
            if (scores[i] > scores[j]) wins += 1.0;
            else if (scores[i] == scores[j]) wins += 0.5;
        }
    }
    return wins / static_cast<double>(pairs);
}

}  // namespace sehp::testing
