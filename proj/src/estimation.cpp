#include "risloc/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "risloc/errors.hpp"

namespace risloc {

double RelayGate::excess(std::size_t lag, std::size_t length) const {
    const double len = static_cast<double>(length);
    double e = std::fmod(static_cast<double>(lag) - relay_lag(), len);
    if (e < 0.0) e += len;
    return e;
}

bool RelayGate::admits(std::size_t lag, std::size_t length) const {
    const double e = excess(lag, length);
    return e > guard_samples && e < static_cast<double>(length) - guard_samples;
}

double RelayGate::delay_of(std::size_t lag, std::size_t length) const {
    return (relay_lag() + excess(lag, length)) / f_samp;
}

std::vector<double> AoaParams::grid() const {
    if (!scan_grid.empty()) return scan_grid;
    std::vector<double> g;
    const auto n = static_cast<long>(std::floor(grid_limit_deg / grid_step_deg + 1e-9));
    for (long i = -n; i <= n; ++i) g.push_back(static_cast<double>(i) * grid_step_deg);
    return g;
}

void AoaParams::validate() const {
    auto fail = [](const std::string& m) { throw InvalidParameterError(m); };
    if (!(g_theta > 0.0 && g_theta < 1.0)) fail("g_theta must lie in (0, 1)");
    if (scan_grid.empty()) {
        if (!(grid_step_deg > 0.0)) fail("grid_step_deg must be positive");
        if (!(grid_limit_deg > 0.0 && grid_limit_deg < 90.0))
            fail("grid_limit_deg must lie in (0, 90)");
    } else {
        if (scan_grid.size() < 3) fail("scan grid needs at least three angles");
        for (std::size_t i = 0; i < scan_grid.size(); ++i) {
            if (!(std::abs(scan_grid[i]) < 90.0)) fail("scan grid angles must lie in (-90, 90)");
            if (i > 0 && !(scan_grid[i] > scan_grid[i - 1])) fail("scan grid must be ascending");
        }
    }
    if (!(min_separation_deg >= 0.0)) fail("min_separation_deg must be >= 0");
    if (!(regularization > 0.0)) fail("regularization must be positive");
    if (nlms_passes < 1) fail("nlms_passes must be >= 1");
    if (!(nlms_step > 0.0 && nlms_step < 2.0)) fail("nlms_step must lie in (0, 2)");
}

std::vector<std::size_t> find_peaks(const std::vector<double>& values, double threshold,
                                    double min_separation, bool cyclic) {
    const std::size_t n = values.size();
    std::vector<std::size_t> cand;
    if (n < 3) return cand;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo, hi;
        if (i == 0 || i + 1 == n) {
            if (!cyclic) continue;
            lo = (i + n - 1) % n;
            hi = (i + 1) % n;
        } else {
            lo = i - 1;
            hi = i + 1;
        }
        const double v = values[i];
        if (v > threshold && v > values[lo] && v >= values[hi]) cand.push_back(i);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    std::vector<std::size_t> kept;
    for (std::size_t c : cand) {
        bool close = false;
        for (std::size_t k : kept) {
            double d = std::abs(static_cast<double>(c) - static_cast<double>(k));
            if (cyclic) d = std::min(d, static_cast<double>(n) - d);
            if (d < min_separation) {
                close = true;
                break;
            }
        }
        if (!close) kept.push_back(c);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

namespace {

// S(theta) = h^H Q h for every grid angle, using the diagonal sums of
// diag(b)^H Q diag(b) so each angle costs O(M).
std::vector<double> power_spectrum(const CMat& q, const CVec& b, const std::vector<double>& grid) {
    const Eigen::Index m = q.rows();
    const CMat qp = b.conjugate().asDiagonal() * q * b.asDiagonal();
    std::vector<cd> diag_sum(static_cast<std::size_t>(m), cd{0.0, 0.0});
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i; j < m; ++j) diag_sum[static_cast<std::size_t>(j - i)] += qp(i, j);

    std::vector<double> s(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const cd z = std::polar(1.0, kPi * std::sin(deg2rad(grid[g])));
        cd acc{0.0, 0.0};
        for (Eigen::Index d = m - 1; d >= 1; --d) acc = (acc + diag_sum[static_cast<std::size_t>(d)]) * z;
        s[g] = std::max(0.0, diag_sum[0].real() + 2.0 * acc.real());
    }
    return s;
}

// Golden-section maximization of f on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

AoaEstimate estimate_aoas(const SnapshotMatrix& z0, const ReflectionMatrix& v0,
                          double phi_ris_pr_deg, const Correlator& correlator,
                          const RelayGate& gate, const AoaParams& params) {
    params.validate();
    const CMatRM& z = z0.data;
    const Eigen::Index n_ep = z.rows();
    const Eigen::Index m = v0.v.rows();
    const std::size_t len = correlator.length();
    if (n_ep < 1 || static_cast<std::size_t>(z.cols()) != len)
        throw InvalidParameterError("phase-0 snapshot must be N_epoch x L");
    if (v0.v.cols() != n_ep)
        throw InvalidParameterError("reflection matrix must have one column per epoch");

    // Correlate each centered epoch, keeping only the lags outside the relay gate.
    std::vector<Eigen::Index> lags;
    for (std::size_t l = 0; l < len; ++l)
        if (gate.admits(l, len)) lags.push_back(static_cast<Eigen::Index>(l));
    const auto n_lag = static_cast<Eigen::Index>(lags.size());
    CMatRM cg(n_ep, n_lag);
    {
        CVec centered(static_cast<Eigen::Index>(len)), corr(static_cast<Eigen::Index>(len)),
            scratch(static_cast<Eigen::Index>(len));
        for (Eigen::Index n = 0; n < n_ep; ++n) {
            centered = center_series({z.row(n).data(), len});
            correlator.correlate_into({centered.data(), len}, {corr.data(), len},
                                      {scratch.data(), len});
            for (Eigen::Index i = 0; i < n_lag; ++i) cg(n, i) = corr[lags[static_cast<std::size_t>(i)]];
        }
    }

    // Per-lag estimate of the RIS-domain response y_l with c_l = V^T y_l.
    const CMat vt = v0.v.transpose();
    CMat y(m, n_lag);
    switch (params.solver) {
        case AoaSolver::Matched:
            y = v0.v.conjugate() * cg;
            break;
        case AoaSolver::Ridge: {
            CMat a = v0.v.conjugate() * vt;
            a.diagonal().array() += params.regularization * static_cast<double>(n_ep);
            const CMat w = a.llt().solve(CMat(v0.v.conjugate()));
            y = w * cg;
            break;
        }
        case AoaSolver::Nlms: {
            y.setZero();
            const double mu = params.nlms_step / static_cast<double>(m);
            for (int pass = 0; pass < params.nlms_passes; ++pass) {
                for (Eigen::Index n = 0; n < n_ep; ++n) {
                    const Eigen::RowVectorXcd err = cg.row(n) - vt.row(n) * y;
                    y.noalias() += (mu * v0.v.col(n).conjugate()) * err;
                }
            }
            break;
        }
    }
    const CMat q = y * y.adjoint();
    const CVec b = steering_vector(static_cast<int>(m), phi_ris_pr_deg);

    AoaEstimate out;
    out.grid_deg = params.grid();
    out.spectrum = power_spectrum(q, b, out.grid_deg);
    const double peak = *std::max_element(out.spectrum.begin(), out.spectrum.end());
    if (!(peak > 0.0)) return out;
    for (double& s : out.spectrum) s /= peak;

    std::vector<std::size_t> idx = find_peaks(out.spectrum, params.g_theta, 0.0, false);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t c) { return out.spectrum[a] > out.spectrum[c]; });
    std::vector<std::size_t> kept;
    for (std::size_t i : idx) {
        bool close = false;
        for (std::size_t k : kept)
            if (std::abs(out.grid_deg[i] - out.grid_deg[k]) < params.min_separation_deg) close = true;
        if (!close) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());

    const double lo_lim = out.grid_deg.front(), hi_lim = out.grid_deg.back();
    for (std::size_t i : kept) {
        double theta = out.grid_deg[i];
        if (params.refine && n_lag > 0) {
            // Strongest lag along this direction, then maximize the normalized
            // single-lag statistic around the grid peak.
            const CVec hp = cascade_response(static_cast<int>(m), phi_ris_pr_deg, theta);
            const Eigen::RowVectorXcd proj = hp.adjoint() * y;
            Eigen::Index best = 0;
            proj.cwiseAbs2().maxCoeff(&best);
            const CVec c = cg.col(best);
            auto stat = [&](double th) {
                const CVec g = vt * cascade_response(static_cast<int>(m), phi_ris_pr_deg, th);
                const double gn = g.squaredNorm();
                return gn > 0.0 ? std::norm(g.dot(c)) / gn : 0.0;
            };
            const double left = out.grid_deg[i > 0 ? i - 1 : i];
            const double right = out.grid_deg[i + 1 < out.grid_deg.size() ? i + 1 : i];
            const double lo = std::max(lo_lim, theta - 2.0 * (theta - left));
            const double hi = std::min(hi_lim, theta + 2.0 * (right - theta));
            if (hi > lo) theta = golden_max(stat, lo, hi, 1e-7);
        }
        out.angles_deg.push_back(theta);
    }
    std::sort(out.angles_deg.begin(), out.angles_deg.end());
    return out;
}

CVec average_epochs(const SnapshotMatrix& z) {
    if (z.data.rows() < 1) throw InvalidParameterError("cannot average zero epochs");
    return z.data.colwise().mean().transpose();
}

ToaEstimate estimate_toas(const CVec& z, const Correlator& correlator, double g_tau,
                          const RelayGate& gate, int min_separation_lags, int phase) {
    if (!(g_tau > 0.0 && g_tau < 1.0)) throw InvalidParameterError("g_tau must lie in (0, 1)");
    const std::size_t len = correlator.length();
    if (static_cast<std::size_t>(z.size()) != len)
        throw InvalidParameterError("ToA input length must equal the preamble length");

    ToaEstimate out;
    out.phase = phase;
    const CVec centered = center_series({z.data(), len});
    const CVec c = correlator.correlate({centered.data(), len});
    out.profile.resize(len);
    double peak = 0.0;
    for (std::size_t l = 0; l < len; ++l) {
        out.profile[l] = std::abs(c[static_cast<Eigen::Index>(l)]);
        peak = std::max(peak, out.profile[l]);
    }
    if (!(peak > 0.0)) return out;
    for (double& v : out.profile) v /= peak;

    for (std::size_t l : find_peaks(out.profile, g_tau, min_separation_lags, true))
        if (gate.admits(l, len)) out.delays_s.push_back(gate.delay_of(l, len));
    std::sort(out.delays_s.begin(), out.delays_s.end());
    return out;
}

ToaEstimate estimate_toas(const CVec& z, const ZcSequence& zc, double g_tau,
                          const RelayGate& gate, int min_separation_lags, int phase) {
    return estimate_toas(z, Correlator(zc), g_tau, gate, min_separation_lags, phase);
}

int count_targets(const std::vector<ToaEstimate>& estimates) {
    std::size_t k = 0;
    for (const ToaEstimate& e : estimates) k += e.count();
    return static_cast<int>(k);
}

}  // namespace risloc
