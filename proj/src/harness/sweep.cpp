#include "risloc/harness/sweep.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <thread>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "risloc/errors.hpp"

namespace risloc {

namespace {

constexpr std::uint64_t kSceneTag = 0x5343454E45ULL;

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    return out;
}

int worker_count(int configured) {
    if (configured > 0) return configured;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t snr_idx, std::size_t m_idx,
                         std::size_t k_idx, std::size_t trial) {
    return mix_seed({master, snr_idx, m_idx, k_idx, trial});
}

std::uint64_t scene_seed(std::uint64_t master, int k, std::size_t trial) {
    return mix_seed({master, kSceneTag, static_cast<std::uint64_t>(k), trial});
}

Scenario trial_scenario(const SweepConfig& c, double snr_db, int m, int k, std::size_t trial) {
    Scenario s = c.resolved_base();
    s.snr_db = snr_db;
    s.ris_elements = m;
    Rng rng(scene_seed(c.master_seed, k, trial));
    s.targets = random_scene(rng, k, SceneContext::from(s), c.scene);
    s.target_los.assign(s.targets.size(), c.target_los);
    return s;
}

std::vector<TrialOutcome> run_grid_point(const SweepConfig& c, std::size_t si, std::size_t mi,
                                         std::size_t ki) {
    const auto trials = static_cast<std::size_t>(c.trials);
    std::vector<TrialOutcome> out(trials);
    const int workers = worker_count(c.threads);
    // An explicit thread count may exceed the core count; lift TBB's cap for this call.
    tbb::global_control cap(tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(workers));
    tbb::task_arena arena(workers);
    arena.execute([&] {
        tbb::parallel_for(tbb::blocked_range<std::size_t>(0, trials, 1),
                          [&](const tbb::blocked_range<std::size_t>& r) {
                              for (std::size_t t = r.begin(); t != r.end(); ++t) {
                                  const Scenario s = trial_scenario(c, c.snr_db[si], c.ris_elements[mi],
                                                                    c.target_counts[ki], t);
                                  TrialOutcome o = run_trial(s, c.estimator,
                                                             trial_seed(c.master_seed, si, mi, ki, t));
                                  // Profiles are large and unused by the metrics.
                                  for (ToaEstimate& e : o.toas) std::vector<double>().swap(e.profile);
                                  out[t] = std::move(o);
                              }
                          });
    });
    return out;
}

std::vector<ResultRow> run_sweep(const SweepConfig& c, const SweepHooks& hooks) {
    c.validate();
    std::ofstream csv, sidecar;
    if (!c.output_csv.empty()) {
        csv = open_output(c.output_csv);
        sidecar = open_output(sidecar_path(c.output_csv));
    }

    std::vector<ResultRow> rows;
    for (std::size_t si = 0; si < c.snr_db.size(); ++si) {
        for (std::size_t mi = 0; mi < c.ris_elements.size(); ++mi) {
            for (std::size_t ki = 0; ki < c.target_counts.size(); ++ki) {
                const std::vector<TrialOutcome> outcomes = run_grid_point(c, si, mi, ki);
                const MetricsReport m = summarize(outcomes, c.epsilon_m, c.strict_srp);
                ResultRow row;
                row.snr_db = c.snr_db[si];
                row.M = c.ris_elements[mi];
                row.K = c.target_counts[ki];
                row.P = m.trials;
                row.mse = m.mse;
                row.p_d = m.p_d;
                row.srp = m.srp;
                if (c.record_runtime) row.mean_runtime_ms = m.mean_runtime_ms;
                row.mapping_failures = m.mapping_failures;
                rows.push_back(row);
                if (hooks.on_row) hooks.on_row(row);
            }
        }
    }

    if (csv.is_open()) {
        csv << csv_header() << '\n';
        for (const ResultRow& r : rows) csv << format_csv_row(r) << '\n';
        sidecar << to_json(c).dump(2) << '\n';
        if (!csv.flush() || !sidecar.flush()) throw IoError("failed writing " + c.output_csv);
    }
    return rows;
}

std::string csv_header() { return "snr_db,M,K,P,mse,p_d,srp,mean_runtime_ms,mapping_failures"; }

std::string format_csv_row(const ResultRow& r) {
    std::string s = fmt(r.snr_db);
    s += ',' + std::to_string(r.M) + ',' + std::to_string(r.K) + ',' + std::to_string(r.P) + ',';
    if (r.mse && std::isfinite(*r.mse)) s += fmt(*r.mse);
    s += ',' + fmt(r.p_d) + ',' + fmt(r.srp) + ',';
    if (r.mean_runtime_ms) s += fmt(*r.mean_runtime_ms);
    s += ',' + std::to_string(r.mapping_failures);
    return s;
}

std::string sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".config.json");
    return p.string();
}

}  // namespace risloc
