#pragma once

#include <span>
#include <vector>

namespace sehp {

// Scores are clamped to [eps, 1-eps] before any logarithm.
inline constexpr double kScoreClampEps = 1e-7;

double clamp_score(double s);

// Binary cross-entropy: -(1/N) sum [y log s + (1-y) log(1-s)]
double discriminator_loss(std::span<const double> scores, std::span<const int> labels);

// -(1/N) sum s
double generator_adversarial_loss(std::span<const double> scores);

// Mean over samples and steps t = 1..T of log(s^{t-1} / s^t). Every
// per-sample list holds T+1 scores; all lists must agree on T.
double boundary_loss(std::span<const std::vector<double>> step_scores);

double generator_total_loss(double adversarial, double boundary);

}  // namespace sehp
