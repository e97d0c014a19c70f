#include "risloc/metrics.hpp"

#include <algorithm>
#include <limits>

#include "risloc/errors.hpp"

namespace risloc {

namespace {

// Hungarian algorithm with potentials for an n x m cost matrix, n <= m.
// Returns the column assigned to each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost, std::size_t n,
                                   std::size_t m) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
    std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(m + 1, inf);
        std::vector<char> used(m + 1, 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = p[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= m; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= m; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= m; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> pair_targets(const std::vector<Vec2>& actual,
                                                              const std::vector<Vec2>& estimated) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (actual.empty() || estimated.empty()) return pairs;
    const bool rows_actual = actual.size() <= estimated.size();
    const auto& rows = rows_actual ? actual : estimated;
    const auto& cols = rows_actual ? estimated : actual;
    std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols.size(); ++j) cost[i][j] = (rows[i] - cols[j]).squaredNorm();
    const std::vector<std::size_t> assign = hungarian(cost, rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows_actual)
            pairs.emplace_back(i, assign[i]);
        else
            pairs.emplace_back(assign[i], i);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

double paired_squared_error(const std::vector<Vec2>& actual, const std::vector<Vec2>& estimated,
                            const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    double total = 0.0;
    for (const auto& [a, e] : pairs) total += (actual.at(a) - estimated.at(e)).squaredNorm();
    return total;
}

std::optional<double> mse(const std::vector<TrialOutcome>& outcomes) {
    double total = 0.0;
    std::size_t count = 0;
    for (const TrialOutcome& o : outcomes) {
        const auto pairs = pair_targets(o.truth, o.positions);
        total += paired_squared_error(o.truth, o.positions, pairs);
        count += pairs.size();
    }
    if (count == 0) return std::nullopt;
    return total / static_cast<double>(count);
}

double detection_probability(const std::vector<TrialOutcome>& outcomes) {
    if (outcomes.empty()) throw InvalidParameterError("no trials to evaluate");
    std::size_t hits = 0;
    for (const TrialOutcome& o : outcomes) hits += o.estimated_count == o.true_count ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(outcomes.size());
}

bool trial_success(const TrialOutcome& o, double epsilon_m, bool strict) {
    if (strict && o.estimated_count != o.true_count) return false;
    if (o.positions.size() < o.truth.size()) return false;
    const auto pairs = pair_targets(o.truth, o.positions);
    for (const auto& [a, e] : pairs)
        if ((o.truth[a] - o.positions[e]).norm() > epsilon_m) return false;
    return true;
}

double srp(const std::vector<TrialOutcome>& outcomes, double epsilon_m, bool strict) {
    if (outcomes.empty()) throw InvalidParameterError("no trials to evaluate");
    if (!(epsilon_m > 0.0)) throw InvalidParameterError("epsilon must be positive");
    std::size_t ok = 0;
    for (const TrialOutcome& o : outcomes) ok += trial_success(o, epsilon_m, strict) ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(outcomes.size());
}

MetricsReport summarize(const std::vector<TrialOutcome>& outcomes, double epsilon_m, bool strict) {
    MetricsReport r;
    r.trials = static_cast<int>(outcomes.size());
    r.mse = mse(outcomes);
    r.p_d = detection_probability(outcomes);
    r.srp = srp(outcomes, epsilon_m, strict);
    double runtime = 0.0;
    for (const TrialOutcome& o : outcomes) {
        r.total_pairs += std::min(o.truth.size(), o.positions.size());
        r.mapping_failures += o.mapping_failures();
        runtime += o.runtime_ms;
    }
    r.mean_runtime_ms = runtime / static_cast<double>(outcomes.size());
    return r;
}

}  // namespace risloc
