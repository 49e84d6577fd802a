#include "sehp/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sehp {

double auroc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("auroc: scores/labels length mismatch");
    std::size_t n_pos = 0, n_neg = 0;
    for (int y : labels) (y ? n_pos : n_neg)++;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("auroc: both classes must be present");

    // average ranks with midranks for ties
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
        for (std::size_t t = i; t < j; ++t)
            if (labels[order[t]]) pos_rank_sum += midrank;
        i = j;
    }
    const double u = pos_rank_sum - 0.5 * static_cast<double>(n_pos) *
                                        static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double precision_at(std::span<const double> scores, std::span<const int> labels,
                    double threshold) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("precision: scores/labels length mismatch");
    std::size_t tp = 0, fp = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] >= threshold) (labels[i] ? tp : fp)++;
    }
    if (tp + fp == 0) throw std::runtime_error("precision: no positive predictions");
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

EvalSet build_eval_set(const Hypergraph& g, std::span<const EdgeId> positive_ids,
                       NegStrategy strategy, const ForbiddenSet& observed,
                       std::uint64_t seed) {
    if (positive_ids.empty()) throw std::invalid_argument("build_eval_set: empty positives");
    EvalSet set;
    set.strategy = strategy;
    for (EdgeId j : positive_ids) {
        CandidateHyperedge c;
        c.nodes = g.edges[j];
        c.provenance = Provenance::Positive;
        c.source_edge = j;
        set.positives.push_back(std::move(c));
    }
    NegSpec spec{strategy, positive_ids.size(), seed};
    set.negatives = sample_negatives(g, spec, observed);
    return set;
}

}  // namespace sehp
