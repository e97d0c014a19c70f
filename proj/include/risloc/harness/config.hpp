#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "risloc/channel.hpp"
#include "risloc/harness/scene.hpp"
#include "risloc/pipeline.hpp"

namespace risloc {

/// The shipped layout: RIS on the west edge facing east, AP to its south-east
/// and the PR to the north-east, in a 1000 m x 1000 m cell.
Scenario default_scenario();

/// Everything needed to regenerate a results table. Per grid point the base
/// scenario receives the SNR, the RIS size and a freshly drawn scene.
struct SweepConfig {
    Scenario base = default_scenario();
    /// Face the PR array towards the RIS; overrides base.layout.pr_boresight_deg.
    bool pr_boresight_auto = true;
    /// B_k for every target (the scene is random, so one flag covers all).
    bool target_los = false;
    EstimatorParams estimator;
    SceneConstraints scene;

    std::vector<double> snr_db{-40.0, -30.0, -20.0, -10.0, 0.0};
    std::vector<int> ris_elements{8, 16, 32, 64};
    std::vector<int> target_counts{2};
    int trials = 200;
    std::uint64_t master_seed = 1;
    int threads = 0;  // 0: all hardware threads

    double epsilon_m = 1.0;
    bool strict_srp = false;

    std::string output_csv;  // empty: no file output
    bool record_runtime = true;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    /// base with the automatic boresight applied.
    Scenario resolved_base() const;
};

/// Starts from the defaults and applies every key present in `j`. Unknown
/// keys and wrongly typed values raise ConfigError.
SweepConfig parse_config(const nlohmann::json& j);
SweepConfig load_config(const std::string& path);
nlohmann::json to_json(const SweepConfig& config);

/// Applies "a.b.c=value" to a JSON tree. The value is parsed as JSON when
/// possible and kept as a string otherwise.
void apply_override(nlohmann::json& j, const std::string& assignment);

}  // namespace risloc
