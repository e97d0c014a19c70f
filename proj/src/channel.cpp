#include "risloc/channel.hpp"

#include <cmath>
#include <sstream>

#include "risloc/errors.hpp"
#include "risloc/fft.hpp"

namespace risloc {

namespace {

bool in_open_half_plane(double deg) { return std::isfinite(deg) && std::abs(deg) < 90.0; }

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidParameterError(what);
}

cd random_phase(Rng& rng) {
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
    return std::polar(1.0, phase(rng));
}

// Free-space amplitude of a one-way hop of length d.
double hop_amplitude(double wavelength, double d) { return wavelength / (4.0 * kPi * d); }

// Bistatic radar-equation amplitude for a unit-RCS scatterer.
double bistatic_amplitude(double wavelength, double d1, double d2) {
    return wavelength / (std::pow(4.0 * kPi, 1.5) * d1 * d2);
}

// Cyclic shift by a whole number of samples: out[n] = s[(n - shift) mod L].
CVec cyclic_shift(const CVec& s, long long shift) {
    const long long len = s.size();
    CVec out(len);
    if (len == 0) return out;
    long long k = shift % len;
    if (k < 0) k += len;
    for (long long n = 0; n < len; ++n) {
        long long src = n - k;
        if (src < 0) src += len;
        out[n] = s[src];
    }
    return out;
}

// Adds a * steer * sig^T to `out` (rows x L).
void add_outer(CMatRM& out, cd a, const CVec& steer, const CVec& sig) {
    out.noalias() += (a * steer) * sig.transpose();
}

long long delay_lag(double tau_s, double f_samp) { return std::llround(tau_s * f_samp); }

}  // namespace

bool Scenario::target_visible(int k) const {
    if (target_los.empty()) return false;
    return target_los.at(static_cast<std::size_t>(k));
}

void Scenario::validate() const {
    layout.validate();
    require(ris_elements >= 1, "ris_elements must be >= 1");
    require(pr_antennas >= 1, "pr_antennas must be >= 1");
    require(epochs_aoa >= 1, "epochs_aoa must be >= 1");
    require(epochs_toa >= 1, "epochs_toa must be >= 1");
    require(std::isfinite(snr_db), "snr_db must be finite");
    require(std::isfinite(f_samp) && f_samp > 0.0, "f_samp must be positive");
    require(target_los.empty() || target_los.size() == targets.size(),
            "target_los must be empty or have one entry per target");
    if (channel.gain_policy == GainPolicy::FreeSpace)
        require(std::isfinite(channel.carrier_hz) && channel.carrier_hz > 0.0,
                "carrier_hz must be positive");
    if (channel.ris_noise) require(std::isfinite(channel.ris_snr_db), "ris_snr_db must be finite");
    // ZC parameters are checked by generate_zc; surface them here too.
    (void)generate_zc(zc_length, zc_root);

    const double ap = local_angle_deg(layout.ris, layout.ap, layout.ris_boresight_deg);
    const double pr = local_angle_deg(layout.ris, layout.pr, layout.ris_boresight_deg);
    const double ris = local_angle_deg(layout.pr, layout.ris, layout.pr_boresight_deg);
    require(in_open_half_plane(ap), "AP must lie in front of the RIS");
    require(in_open_half_plane(pr), "PR must lie in front of the RIS");
    require(in_open_half_plane(ris), "RIS must lie in front of the PR array");
    for (std::size_t k = 0; k < targets.size(); ++k) {
        if (!layout.contains(targets[k])) {
            std::ostringstream os;
            os << "target " << k << " lies outside the cell";
            throw InvalidParameterError(os.str());
        }
        (void)forward_sensing(targets[k], layout);
    }
}

ScenarioGeometry compute_geometry(const Scenario& sc) {
    const NodeLayout& l = sc.layout;
    ScenarioGeometry g;
    g.theta_ap_ris = local_angle_deg(l.ris, l.ap, l.ris_boresight_deg);
    g.phi_ris_pr = local_angle_deg(l.ris, l.pr, l.ris_boresight_deg);
    g.theta_ris_pr = local_angle_deg(l.pr, l.ris, l.pr_boresight_deg);
    g.theta_ap_pr = local_angle_deg(l.pr, l.ap, l.pr_boresight_deg);
    g.tau_ap_ris = distance(l.ap, l.ris) / kSpeedOfLight;
    g.tau_ris_pr = distance(l.ris, l.pr) / kSpeedOfLight;
    g.tau_ap_pr = distance(l.ap, l.pr) / kSpeedOfLight;
    for (const Vec2& t : sc.targets) {
        g.theta_k_ris.push_back(local_angle_deg(l.ris, t, l.ris_boresight_deg));
        g.tau_k_ris.push_back((distance(l.ap, t) + distance(t, l.ris)) / kSpeedOfLight);
        g.theta_k_pr.push_back(local_angle_deg(l.pr, t, l.pr_boresight_deg));
        g.tau_k_pr.push_back((distance(l.ap, t) + distance(t, l.pr)) / kSpeedOfLight);
    }
    return g;
}

PathGains draw_gains(const Scenario& sc, const ScenarioGeometry& g, Rng& rng) {
    (void)g;
    const std::size_t k_count = sc.targets.size();
    PathGains out;
    // Fixed draw order: alpha0, alpha_k, rho_RIS^PR, rho_AP^PR, rho_k.
    out.alpha0 = random_phase(rng);
    for (std::size_t k = 0; k < k_count; ++k) out.alpha.push_back(random_phase(rng));
    out.rho_ris_pr = random_phase(rng);
    out.rho_ap_pr = random_phase(rng);
    for (std::size_t k = 0; k < k_count; ++k) out.rho.push_back(random_phase(rng));

    if (sc.channel.gain_policy == GainPolicy::FreeSpace) {
        const NodeLayout& l = sc.layout;
        const double lambda = kSpeedOfLight / sc.channel.carrier_hz;
        out.alpha0 *= hop_amplitude(lambda, distance(l.ap, l.ris));
        out.rho_ris_pr *= hop_amplitude(lambda, distance(l.ris, l.pr));
        out.rho_ap_pr *= hop_amplitude(lambda, distance(l.ap, l.pr));
        for (std::size_t k = 0; k < k_count; ++k) {
            const Vec2& t = sc.targets[k];
            out.alpha[k] *= bistatic_amplitude(lambda, distance(l.ap, t), distance(t, l.ris));
            out.rho[k] *= bistatic_amplitude(lambda, distance(l.ap, t), distance(t, l.pr));
        }
    }
    return out;
}

CVec steering_vector(int num_elements, double theta_deg) {
    require(num_elements >= 1, "steering vector needs at least one element");
    if (!in_open_half_plane(theta_deg)) {
        std::ostringstream os;
        os << "steering angle " << theta_deg << " deg is outside (-90, 90)";
        throw InvalidParameterError(os.str());
    }
    return steering_from_sine(num_elements, std::sin(deg2rad(theta_deg)));
}

CVec steering_from_sine(int num_elements, double u) {
    require(num_elements >= 1, "steering vector needs at least one element");
    CVec a(num_elements);
    for (int i = 0; i < num_elements; ++i) a[i] = std::polar(1.0, kPi * i * u);
    return a;
}

CVec delay_samples(const CVec& s, double samples, DelayMode mode) {
    require(std::isfinite(samples), "delay must be finite");
    if (mode == DelayMode::Integer) return cyclic_shift(s, std::llround(samples));

    const std::size_t len = static_cast<std::size_t>(s.size());
    if (len == 0) return s;
    const FftPlan& plan = FftPlan::get(len);
    CVec spec(len), out(len);
    plan.forward(s.data(), spec.data());
    const long long half = static_cast<long long>(len) / 2;
    for (std::size_t k = 0; k < len; ++k) {
        long long kk = static_cast<long long>(k);
        if (kk > half) kk -= static_cast<long long>(len);
        // Nyquist bin of an even length has no unique sign; keep it real.
        if (len % 2 == 0 && kk == half) {
            spec[k] *= std::cos(2.0 * kPi * kk * samples / static_cast<double>(len));
            continue;
        }
        spec[k] *= std::polar(1.0, -2.0 * kPi * kk * samples / static_cast<double>(len));
    }
    plan.inverse(spec.data(), out.data());
    out /= static_cast<double>(len);
    return out;
}

CVec delay_signal(const CVec& s, double tau_s, double f_samp, DelayMode mode) {
    if (!(tau_s >= 0.0)) throw InvalidParameterError("delay must be non-negative");
    require(std::isfinite(f_samp) && f_samp > 0.0, "f_samp must be positive");
    return delay_samples(s, tau_s * f_samp, mode);
}

CMatRM synthesize_ris_signal(const Scenario& sc, const ZcSequence& zc, const PathGains& gains,
                             Rng& rng) {
    return synthesize_ris_signal(sc, compute_geometry(sc), zc, gains, rng);
}

CMatRM synthesize_ris_signal(const Scenario& sc, const ScenarioGeometry& g, const ZcSequence& zc,
                             const PathGains& gains, Rng& rng) {
    const int m = sc.ris_elements;
    const auto len = static_cast<Eigen::Index>(zc.size());
    const DelayMode mode = sc.channel.delay_mode;

    // Integer mode rounds on the PR grid so that the RIS-side shift plus the
    // RIS -> PR shift equals the rounded end-to-end delay.
    auto ris_lag = [&](double tau) {
        if (mode == DelayMode::Integer)
            return static_cast<double>(delay_lag(tau + g.tau_ris_pr, sc.f_samp) -
                                       delay_lag(g.tau_ris_pr, sc.f_samp));
        return tau * sc.f_samp;
    };

    CMatRM r = CMatRM::Zero(m, len);
    add_outer(r, gains.alpha0, steering_vector(m, g.theta_ap_ris),
              delay_samples(zc.samples, ris_lag(g.tau_ap_ris), mode));
    for (std::size_t k = 0; k < sc.targets.size(); ++k) {
        add_outer(r, gains.alpha.at(k), steering_vector(m, g.theta_k_ris[k]),
                  delay_samples(zc.samples, ris_lag(g.tau_k_ris[k]), mode));
    }
    if (sc.channel.ris_noise) {
        CMatRM noise(m, len);
        fill_complex_normal(rng, noise_variance(sc.channel.ris_snr_db),
                            {noise.data(), static_cast<std::size_t>(noise.size())});
        r += noise;
    }
    return r;
}

namespace {

void check_unit_modulus(const CVec& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(std::abs(std::abs(v[i]) - 1.0) <= 1e-9)) {
            std::ostringstream os;
            os << "reflection coefficient " << i << " has modulus " << std::abs(v[i]);
            throw InvalidParameterError(os.str());
        }
    }
}

}  // namespace

CVec apply_ris_reflection(const CMatRM& r, const CVec& v, double phi_ris_pr_deg) {
    require(v.size() == r.rows(), "reflection vector length must equal the number of RIS elements");
    check_unit_modulus(v);
    const CVec bv = steering_vector(static_cast<int>(r.rows()), phi_ris_pr_deg).cwiseProduct(v);
    return (bv.transpose() * r).transpose();
}

CMatRM reflect_epochs(const CMatRM& r, const CMat& v, double phi_ris_pr_deg) {
    require(v.rows() == r.rows(), "reflection matrix rows must equal the number of RIS elements");
    for (Eigen::Index n = 0; n < v.cols(); ++n) check_unit_modulus(v.col(n));
    const CVec b = steering_vector(static_cast<int>(r.rows()), phi_ris_pr_deg);
    const CMat bv = b.asDiagonal() * v;
    return bv.transpose() * r;
}

double noise_variance(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

SnapshotMatrix synthesize_pr_signal(const Scenario& sc, const CVec& x, const ZcSequence& zc,
                                    const PathGains& gains, Rng& rng) {
    return synthesize_pr_signal(sc, compute_geometry(sc), x, zc, gains, rng);
}

SnapshotMatrix synthesize_pr_signal(const Scenario& sc, const ScenarioGeometry& g, const CVec& x,
                                    const ZcSequence& zc, const PathGains& gains, Rng& rng) {
    require(x.size() == static_cast<Eigen::Index>(zc.size()),
            "reflected signal length must equal the preamble length");
    const int n_pr = sc.pr_antennas;
    const DelayMode mode = sc.channel.delay_mode;
    auto lag = [&](double tau) {
        return mode == DelayMode::Integer ? static_cast<double>(delay_lag(tau, sc.f_samp))
                                          : tau * sc.f_samp;
    };

    SnapshotMatrix out;
    out.role = SnapshotRole::PrRaw;
    out.data = CMatRM::Zero(n_pr, x.size());
    add_outer(out.data, gains.rho_ris_pr, steering_vector(n_pr, g.theta_ris_pr),
              delay_samples(x, lag(g.tau_ris_pr), mode));
    if (sc.ap_los) {
        add_outer(out.data, gains.rho_ap_pr,
                  steering_from_sine(n_pr, std::sin(deg2rad(g.theta_ap_pr))),
                  delay_samples(zc.samples, lag(g.tau_ap_pr), mode));
    }
    for (int k = 0; k < sc.num_targets(); ++k) {
        if (!sc.target_visible(k)) continue;
        add_outer(out.data, gains.rho.at(k),
                  steering_from_sine(n_pr, std::sin(deg2rad(g.theta_k_pr[k]))),
                  delay_samples(zc.samples, lag(g.tau_k_pr[k]), mode));
    }
    if (sc.channel.awgn) {
        CMatRM noise(n_pr, x.size());
        fill_complex_normal(rng, noise_variance(sc.snr_db),
                            {noise.data(), static_cast<std::size_t>(noise.size())});
        out.data += noise;
    }
    return out;
}

}  // namespace risloc
