#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "risloc/harness/config.hpp"
#include "risloc/metrics.hpp"

namespace risloc {

struct ResultRow {
    double snr_db = 0.0;
    int M = 0;
    int K = 0;
    int P = 0;
    std::optional<double> mse;  // empty: no pairs at this grid point
    double p_d = 0.0;
    double srp = 0.0;
    std::optional<double> mean_runtime_ms;  // empty when runtime recording is off
    int mapping_failures = 0;
};

/// Seed of one trial: hash(master, snr index, M index, K index, trial index).
std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_idx, std::size_t m_idx,
                         std::size_t k_idx, std::size_t trial);
/// Seed of the scene drawn for trial `trial` at K targets. It does not depend
/// on SNR or M, so every point of a curve sees the same scenes.
std::uint64_t scene_seed(std::uint64_t master, int k, std::size_t trial);

/// The scenario of one trial at one grid point.
Scenario trial_scenario(const SweepConfig& config, double snr_db, int m, int k, std::size_t trial);

struct SweepHooks {
    /// Called after each grid point, in grid order.
    std::function<void(const ResultRow&)> on_row;
};

/// Runs every (snr, M, K) grid point. When config.output_csv is set the CSV
/// and its ".config.json" sidecar are opened before any trial runs (IoError if
/// that fails) and written at the end.
std::vector<ResultRow> run_sweep(const SweepConfig& config, const SweepHooks& hooks = {});

/// Outcomes of every trial at one grid point, in trial order.
std::vector<TrialOutcome> run_grid_point(const SweepConfig& config, std::size_t snr_idx,
                                         std::size_t m_idx, std::size_t k_idx);

std::string csv_header();
std::string format_csv_row(const ResultRow& row);
std::string sidecar_path(const std::string& csv_path);

}  // namespace risloc
