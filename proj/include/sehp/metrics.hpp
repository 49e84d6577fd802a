#pragma once

#include <span>
#include <vector>

#include "sehp/sampler.hpp"

namespace sehp {

// Mann-Whitney AUROC via ranks: P(score_pos > score_neg) + 0.5 P(equal).
// Requires both classes present.
double auroc(std::span<const double> scores, std::span<const int> labels);

// TP / (TP + FP) at the threshold; throws when nothing is predicted
// positive.
double precision_at(std::span<const double> scores, std::span<const int> labels,
                    double threshold = 0.5);

struct EvalSet {
    NegStrategy strategy;
    std::vector<CandidateHyperedge> positives;
    std::vector<CandidateHyperedge> negatives;  // 1:1 with positives
};

EvalSet build_eval_set(const Hypergraph& g, std::span<const EdgeId> positive_ids,
                       NegStrategy strategy, const ForbiddenSet& observed, std::uint64_t seed);

struct StrategyResult {
    NegStrategy strategy;
    double auroc = 0.0;
    double precision = 0.0;
};

struct EvalTable {
    std::vector<StrategyResult> rows;
    double ave_auroc = 0.0;
    double ave_precision = 0.0;
};

}  // namespace sehp
