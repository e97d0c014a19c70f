// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Usage: acceptance [name-substring ...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "risloc/errors.hpp"
#include "risloc/geometry.hpp"
#include "risloc/harness/config.hpp"
#include "risloc/harness/scene.hpp"
#include "risloc/harness/sweep.hpp"
#include "risloc/metrics.hpp"
#include "risloc/signal.hpp"

using namespace risloc;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

std::vector<ResultRow> sweep(SweepConfig c) {
    c.output_csv.clear();
    SweepHooks hooks;
    hooks.on_row = [](const ResultRow& r) { std::cout << "    " << format_csv_row(r) << std::endl; };
    return run_sweep(c, hooks);
}

const ResultRow& row(const std::vector<ResultRow>& rows, double snr, int m, int k) {
    for (const ResultRow& r : rows)
        if (r.snr_db == snr && r.M == m && r.K == k) return r;
    throw std::logic_error("missing grid point");
}

Verdict cazac() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    bool zero_ok = true;
    for (auto [n, r] : {std::pair{1989, 7}, std::pair{839, 3}, std::pair{63, 5}}) {
        const ZcSequence zc = generate_zc(n, r);
        zero_ok = zero_ok && std::abs(cyclic_autocorrelation(zc, 0) - n) < 1e-9 * n;
        for (int k = 1; k < n; ++k) worst = std::max(worst, cyclic_autocorrelation(zc, k) / n);
    }
    const double t = seconds_since(t0);
    return {zero_ok && worst < 1e-9 && t < 5.0,
            "max |R(k)|/N_zc over k != 0 = " + num(worst) + " (< 1e-9), zero shift = N_zc: " +
                (zero_ok ? "yes" : "no") + ", " + num(t, 3) + " s (< 5 s)"};
}

Verdict geometry_round_trip() {
    const auto t0 = Clock::now();
    const NodeLayout layout = default_scenario().layout;
    const double sector = SceneConstraints{}.sector_limit_deg;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ux(0.0, layout.cell_width), uy(0.0, layout.cell_height);
    int n = 0;
    double worst = 0.0;
    while (n < 10000) {
        const Vec2 p{ux(rng), uy(rng)};
        SensingPair sp;
        try {
            sp = forward_sensing(p, layout);
        } catch (const DegenerateGeometryError&) {
            continue;
        }
        if (std::abs(sp.theta_ris_deg) > sector) continue;
        worst = std::max(worst, (map_to_position(sp, layout) - p).norm());
        ++n;
    }
    const double t = seconds_since(t0);
    return {worst < 1e-6 && t < 5.0,
            "10000 targets within +/-" + num(sector) + " deg, max error " + num(worst) + " m (< 1e-6 m), " + num(t, 3) + " s (< 5 s)"};
}

Verdict pairing_oracle() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> count(0, 6);
    std::uniform_real_distribution<double> u(0.0, 1000.0);
    int mismatches = 0;
    for (int inst = 0; inst < 1000; ++inst) {
        std::vector<Vec2> a(static_cast<std::size_t>(count(rng))), e(static_cast<std::size_t>(count(rng)));
        for (auto& p : a) p = {u(rng), u(rng)};
        for (auto& p : e) p = {u(rng), u(rng)};
        const auto pairs = pair_targets(a, e);
        const std::size_t want = std::min(a.size(), e.size());
        // exhaustive optimum over injective maps from the smaller set
        const bool swap = a.size() > e.size();
        std::vector<std::size_t> idx(swap ? a.size() : e.size());
        std::iota(idx.begin(), idx.end(), 0);
        double best = want == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        if (want > 0) {
            do {
                std::vector<std::pair<std::size_t, std::size_t>> cand;
                for (std::size_t i = 0; i < want; ++i) cand.emplace_back(swap ? idx[i] : i, swap ? i : idx[i]);
                std::sort(cand.begin(), cand.end());
                best = std::min(best, paired_squared_error(a, e, cand));
            } while (std::next_permutation(idx.begin(), idx.end()));
        }
        if (pairs.size() != want || paired_squared_error(a, e, pairs) != best) ++mismatches;
    }
    return {mismatches == 0, "1000 instances, " + std::to_string(mismatches) + " differ from the exhaustive optimum"};
}

Verdict noiseless_end_to_end() {
    const auto t0 = Clock::now();
    SweepConfig c;
    c.base.channel.awgn = false;
    c.ris_elements = {64};
    const int trials = 100;
    int detected = 0;
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        const Scenario s = trial_scenario(c, 0.0, 64, 2, static_cast<std::size_t>(t));
        const TrialOutcome o = run_trial(s, c.estimator, trial_seed(c.master_seed, 0, 0, 0, static_cast<std::size_t>(t)));
        if (o.estimated_count == 2) ++detected;
        const auto pairs = pair_targets(o.truth, o.positions);
        if (pairs.size() < 2) worst = std::numeric_limits<double>::infinity();
        for (const auto& [i, j] : pairs) worst = std::max(worst, (o.truth[i] - o.positions[j]).norm());
    }
    const double t = seconds_since(t0);
    return {detected == trials && worst <= 0.5 && t < 120.0,
            "K_hat = 2 in " + std::to_string(detected) + "/100, max position error " + num(worst) +
                " m (<= 0.5 m), " + num(t, 3) + " s (< 120 s)"};
}

// Shared by the MSE and P_D vs SNR criteria: same grid (M = 64, K = 2, P = 200).
struct SnrSweep {
    std::vector<ResultRow> rows;
    std::vector<ResultRow> m8;
    double seconds = 0.0;
    double m8_seconds = 0.0;
    bool done = false;
};

SnrSweep& snr_sweep() {
    static SnrSweep s;
    if (s.done) return s;
    SweepConfig c;
    c.snr_db = {-40, -30, -20, -10, 0};
    c.ris_elements = {64};
    c.target_counts = {2};
    c.trials = 200;
    auto t0 = Clock::now();
    s.rows = sweep(c);
    s.seconds = seconds_since(t0);
    c.snr_db = {-20};
    c.ris_elements = {8};
    t0 = Clock::now();
    s.m8 = sweep(c);
    s.m8_seconds = seconds_since(t0);
    s.done = true;
    return s;
}

Verdict mse_trend() {
    SnrSweep& s = snr_sweep();
    bool mono = true;
    std::string seq;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& m = s.rows[i].mse;
        seq += (i ? ", " : "") + (m ? num(*m) : std::string("undef"));
        if (!m) mono = false;
        if (i > 0 && m && s.rows[i - 1].mse && *m > 1.2 * *s.rows[i - 1].mse) mono = false;
    }
    const auto& m64 = row(s.rows, -20, 64, 2).mse;
    const auto& m8 = s.m8.front().mse;
    const bool order = m64 && m8 && *m64 < *m8;
    const double floor = s.rows.back().mse.value_or(INFINITY);
    const double t = s.seconds + s.m8_seconds;
    return {mono && order && t < 900.0,
            "MSE(M=64) over -40..0 dB = [" + seq + "] m^2 (each <= 1.2x previous); MSE(64)=" +
                num(m64.value_or(NAN)) + " < MSE(8)=" + num(m8.value_or(NAN)) + " at -20 dB; floor " +
                num(floor) + " m^2 (soft target < 1 m^2: " + (floor < 1.0 ? "met" : "missed") + "); " +
                num(t, 4) + " s (< 900 s)"};
}

Verdict pd_snr_trend() {
    SnrSweep& s = snr_sweep();
    bool ok = true;
    std::string seq;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const ResultRow& r = s.rows[i];
        seq += (i ? ", " : "") + num(r.p_d);
        if (r.snr_db >= -20 && r.p_d < 0.9) ok = false;
        if (i > 0 && r.p_d < s.rows[i - 1].p_d - 0.05) ok = false;
    }
    return {ok && s.seconds < 600.0,
            "P_D(M=64, K=2) over -40..0 dB = [" + seq + "] (>= 0.9 from -20 dB, non-decreasing within 0.05); " +
                num(s.seconds, 4) + " s (< 600 s)"};
}

Verdict pd_k_trend() {
    const auto t0 = Clock::now();
    SweepConfig c;
    c.snr_db = {50};
    c.ris_elements = {16, 64};
    c.target_counts = {1, 2, 3, 4, 5, 6, 7};
    c.trials = 200;
    const auto rows = sweep(c);
    c.ris_elements = {8};
    c.target_counts = {1, 7};
    const auto m8 = sweep(c);
    const double t = seconds_since(t0);
    bool ok = true;
    double lowest = 1.0;
    for (const ResultRow& r : rows) {
        lowest = std::min(lowest, r.p_d);
        if (r.p_d < 0.9) ok = false;
    }
    const double k1 = row(m8, 50, 8, 1).p_d, k7 = row(m8, 50, 8, 7).p_d;
    return {ok && k7 < k1 && t < 1200.0,
            "min P_D over M in {16,64}, K in 1..7 = " + num(lowest) + " (>= 0.9); M=8: P_D(K=7)=" + num(k7) +
                " < P_D(K=1)=" + num(k1) + "; " + num(t, 4) + " s (< 1200 s)"};
}

Verdict srp_ordering() {
    const auto t0 = Clock::now();
    SweepConfig c;
    c.snr_db = {0};
    c.ris_elements = {8, 16, 32, 64};
    c.target_counts = {2};
    c.trials = 200;
    c.epsilon_m = 1.0;
    const auto rows = sweep(c);
    const double t = seconds_since(t0);
    const double s8 = row(rows, 0, 8, 2).srp, s16 = row(rows, 0, 16, 2).srp;
    const double s32 = row(rows, 0, 32, 2).srp, s64 = row(rows, 0, 64, 2).srp;
    const bool ok = s64 >= s32 - 0.05 && s32 >= s16 - 0.05 && s16 >= s8 - 0.05 && s64 >= 0.9;
    return {ok && t < 900.0,
            "SRP at 0 dB: M=64 " + num(s64) + ", M=32 " + num(s32) + ", M=16 " + num(s16) + ", M=8 " + num(s8) +
                " (ordered within 0.05, M=64 >= 0.9); " + num(t, 4) + " s (< 900 s)"};
}

Verdict determinism() {
    SweepConfig c;
    c.snr_db = {-20};
    c.ris_elements = {32};
    c.target_counts = {3};
    c.trials = 12;
    c.record_runtime = false;
    std::vector<std::string> outputs;
    for (int threads : {1, 3, 1}) {
        c.threads = threads;
        const auto rows = run_sweep(c);
        outputs.push_back(format_csv_row(rows.front()));
    }
    bool ok = outputs[0] == outputs[1] && outputs[0] == outputs[2];

    // With timing on, every column except the runtime must still agree.
    c.record_runtime = true;
    std::vector<std::string> timed;
    for (int threads : {1, 3}) {
        c.threads = threads;
        ResultRow r = run_sweep(c).front();
        ok = ok && r.mean_runtime_ms.has_value();
        r.mean_runtime_ms.reset();
        timed.push_back(format_csv_row(r));
    }
    ok = ok && timed[0] == timed[1] && timed[0] == outputs[0];
    return {ok, "rows for threads 1/3/1: " + outputs[0] + " | " + outputs[1] + " | " + outputs[2] +
                    "; timing on, non-timing columns match: " + (timed[0] == outputs[0] && timed[1] == outputs[0] ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"cazac_suite", cazac},
        {"geometry_round_trip", geometry_round_trip},
        {"pairing_oracle", pairing_oracle},
        {"noiseless_end_to_end", noiseless_end_to_end},
        {"mse_vs_snr_trend", mse_trend},
        {"pd_vs_snr_trend", pd_snr_trend},
        {"pd_vs_k_trend", pd_k_trend},
        {"srp_ordering", srp_ordering},
        {"determinism", determinism},
    };
    std::vector<std::string> filters(argv + 1, argv + argc);

    int failed = 0, ran = 0;
    for (const auto& [name, fn] : criteria) {
        if (!filters.empty() &&
            std::none_of(filters.begin(), filters.end(), [&](const std::string& f) { return name.find(f) != std::string::npos; }))
            continue;
        std::cout << "[run ] " << name << std::endl;
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        ++ran;
        if (!v.pass) ++failed;
        std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << name << ": " << v.detail << std::endl;
    }
    std::cout << ran - failed << "/" << ran << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
