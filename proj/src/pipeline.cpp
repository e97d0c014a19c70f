#include "risloc/pipeline.hpp"

#include <chrono>

#include "risloc/errors.hpp"
#include "risloc/ris_control.hpp"

namespace risloc {

void EstimatorParams::validate() const {
    aoa.validate();
    if (!(g_tau > 0.0 && g_tau < 1.0)) throw InvalidParameterError("g_tau must lie in (0, 1)");
    if (toa_min_separation_lags < 0)
        throw InvalidParameterError("toa_min_separation_lags must be >= 0");
    if (relay_guard_samples < 0) throw InvalidParameterError("relay_guard_samples must be >= 0");
    if (null_refinement_iterations < 0)
        throw InvalidParameterError("null_refinement_iterations must be >= 0");
}

namespace {

enum Stream : std::uint64_t { kGains = 0, kPhaseBase = 1 };

// Beamformed epochs of one phase: row n is w^H Y_n.
SnapshotMatrix acquire_phase(const Scenario& sc, const ScenarioGeometry& g, const ZcSequence& zc,
                             const PathGains& gains, const CMatRM& r_clean,
                             const ReflectionMatrix& refl, const CVec& w, Rng& rng) {
    const auto len = static_cast<Eigen::Index>(zc.size());
    SnapshotMatrix z;
    z.role = SnapshotRole::Beamformed;
    z.data.resize(refl.epochs(), len);

    CMatRM x_all;
    if (!sc.channel.ris_noise) x_all = reflect_epochs(r_clean, refl.v, g.phi_ris_pr);
    for (int n = 0; n < refl.epochs(); ++n) {
        CVec x;
        if (sc.channel.ris_noise) {
            const CMatRM r = synthesize_ris_signal(sc, g, zc, gains, rng);
            x = apply_ris_reflection(r, refl.v.col(n), g.phi_ris_pr);
        } else {
            x = x_all.row(n).transpose();
        }
        const SnapshotMatrix y = synthesize_pr_signal(sc, g, x, zc, gains, rng);
        z.data.row(n) = w.adjoint() * y.data;
    }
    return z;
}

}  // namespace

TrialOutcome run_trial(const Scenario& sc, const EstimatorParams& params, std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    sc.validate();
    params.validate();

    const ScenarioGeometry g = compute_geometry(sc);
    const ZcSequence zc = generate_zc(sc.zc_length, sc.zc_root);
    const Correlator correlator(zc);
    const RelayGate gate{g.tau_ap_ris + g.tau_ris_pr, sc.f_samp, params.relay_guard_samples};
    const CVec w = pr_beamformer(g.theta_ris_pr, sc.pr_antennas);
    const int m = sc.ris_elements;

    Rng gain_rng(mix_seed({seed, kGains}));
    const PathGains gains = draw_gains(sc, g, gain_rng);

    TrialOutcome out;
    out.true_count = sc.num_targets();
    out.truth = sc.targets;

    // Without RIS-stage noise the impinging signal is identical in every epoch.
    CMatRM r_clean;
    if (!sc.channel.ris_noise) {
        Rng unused(0);
        r_clean = synthesize_ris_signal(sc, g, zc, gains, unused);
    }

    Rng rng0(mix_seed({seed, kPhaseBase}));
    const ReflectionMatrix v0 = initial_reflection_matrix(
        g.theta_ap_ris, g.phi_ris_pr, m, sc.epochs_aoa, rng0, params.null_refinement_iterations);
    const SnapshotMatrix z0 = acquire_phase(sc, g, zc, gains, r_clean, v0, w, rng0);
    const AoaEstimate aoa = estimate_aoas(z0, v0, g.phi_ris_pr, correlator, gate, params.aoa);
    out.aoas_deg = aoa.angles_deg;
    out.aoa_count = static_cast<int>(aoa.angles_deg.size());
    out.phases_executed = 1;

    for (std::size_t q = 0; q < aoa.angles_deg.size(); ++q) {
        const int phase = static_cast<int>(q) + 1;
        Rng rng(mix_seed({seed, kPhaseBase + static_cast<std::uint64_t>(phase)}));
        const double theta = aoa.angles_deg[q];
        const ReflectionMatrix vq =
            directed_reflection_matrix(theta, g.phi_ris_pr, m, sc.epochs_toa, phase);
        const SnapshotMatrix zq = acquire_phase(sc, g, zc, gains, r_clean, vq, w, rng);
        ToaEstimate toa = estimate_toas(average_epochs(zq), correlator, params.g_tau, gate,
                                        params.toa_min_separation_lags, phase);
        for (double tau : toa.delays_s) {
            const SensingPair pair{theta, tau};
            out.pairs.push_back(pair);
            try {
                out.positions.push_back(map_to_position(pair, sc.layout));
            } catch (const Error& e) {
                out.failures.push_back({pair, e.what()});
            }
        }
        out.toas.push_back(std::move(toa));
        ++out.phases_executed;
    }
    out.estimated_count = count_targets(out.toas);

    out.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace risloc
