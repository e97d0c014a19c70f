#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "risloc/constants.hpp"
#include "risloc/pipeline.hpp"

namespace risloc {

/// Minimum total squared-distance assignment between the true and the
/// estimated positions. Returns min(|actual|, |estimated|) (actual, estimated)
/// index pairs sorted by the actual index.
std::vector<std::pair<std::size_t, std::size_t>> pair_targets(const std::vector<Vec2>& actual,
                                                              const std::vector<Vec2>& estimated);

/// Sum of squared distances of the pairs, accumulated in pair order.
double paired_squared_error(const std::vector<Vec2>& actual, const std::vector<Vec2>& estimated,
                            const std::vector<std::pair<std::size_t, std::size_t>>& pairs);

/// Squared error summed over all trials divided by the total number of pairs.
/// Empty when no trial produced a pair.
std::optional<double> mse(const std::vector<TrialOutcome>& outcomes);

/// Fraction of trials with K_hat == K.
double detection_probability(const std::vector<TrialOutcome>& outcomes);

/// True when every true target is paired with an estimate within epsilon
/// metres. `strict` additionally requires K_hat == K.
bool trial_success(const TrialOutcome& outcome, double epsilon_m, bool strict = false);

/// Fraction of successful trials.
double srp(const std::vector<TrialOutcome>& outcomes, double epsilon_m, bool strict = false);

struct MetricsReport {
    int trials = 0;
    std::optional<double> mse;
    double p_d = 0.0;
    double srp = 0.0;
    std::size_t total_pairs = 0;
    int mapping_failures = 0;
    double mean_runtime_ms = 0.0;
};

MetricsReport summarize(const std::vector<TrialOutcome>& outcomes, double epsilon_m,
                        bool strict = false);

}  // namespace risloc
