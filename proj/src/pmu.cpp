#include "uflsim/pmu.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "uflsim/kernels.hpp"

namespace uflsim::pmu {

namespace {

constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kBandLo = 40.0;  // supported estimation band
constexpr double kBandHi = 60.0;

/// Wrap to (-pi, pi].
double wrap_pi(double x)
{
    double r = std::remainder(x, kTwoPi);
    if (r <= -kPi) r += kTwoPi;
    return r;
}

/// Bin magnitude as sqrt(re^2 + im^2) rather than hypot: every operation
/// here scales exactly under powers of two, which keeps the frequency
/// estimate bit-identical when the input amplitude is scaled by 2^k.
double mag(const std::complex<double>& z)
{
    return std::sqrt(z.real() * z.real() + z.imag() * z.imag());
}

}  // namespace

int EstimatorConfig::window_samples() const
{
    return static_cast<int>(std::llround(window_cycles * sample_rate_hz / nominal_hz));
}

int EstimatorConfig::hop_samples() const
{
    return static_cast<int>(std::llround(sample_rate_hz / reporting_rate_hz));
}

void EstimatorConfig::validate() const
{
    if (window_cycles < 1)
        throw std::invalid_argument("window_cycles must be >= 1");
    if (!(sample_rate_hz > 0.0) || !(reporting_rate_hz > 0.0) || !(nominal_hz > 0.0))
        throw std::invalid_argument("estimator rates must be positive");
    if (eipdft_iterations < 0)
        throw std::invalid_argument("eipdft_iterations must be >= 0");
    const double win = window_cycles * sample_rate_hz / nominal_hz;
    if (std::floor(win) != win || win < 4.0)
        throw std::invalid_argument(
            "window must hold a whole number of samples (>= 4)");
    const double hop = sample_rate_hz / reporting_rate_hz;
    if (std::floor(hop) != hop || hop < 1.0)
        throw std::invalid_argument(
            "reporting interval must hold a whole number of samples");
}

Estimator::Estimator(const EstimatorConfig& cfg) : cfg_(cfg)
{
    cfg_.validate();
    n_ = cfg_.window_samples();
    const double fs = cfg_.sample_rate_hz;

    bin_lo_ = static_cast<int>(std::lround(kBandLo * n_ / fs));
    bin_hi_ = static_cast<int>(std::lround(kBandHi * n_ / fs));
    bin_lo_ = std::max(bin_lo_, 1);
    bin_hi_ = std::min(bin_hi_, n_ / 2 - 1);
    if (bin_hi_ < bin_lo_)
        throw std::invalid_argument("window too short to resolve the 40-60 Hz band");
    tab_lo_ = bin_lo_ - 1;
    const int tab_hi = bin_hi_ + 1;

    // Hann-weighted correlation tables, phase-referenced to the window
    // center so arg X(k) is directly the phase at the center sample.
    const double c = n_ / 2.0;
    std::vector<double> w(n_);
    for (int i = 0; i < n_; ++i)
        w[i] = 0.5 * (1.0 - std::cos(kTwoPi * i / n_));
    cos_tab_.resize(tab_hi - tab_lo_ + 1);
    sin_tab_.resize(tab_hi - tab_lo_ + 1);
    for (int k = tab_lo_; k <= tab_hi; ++k) {
        auto& ct = cos_tab_[k - tab_lo_];
        auto& st = sin_tab_[k - tab_lo_];
        ct.resize(n_);
        st.resize(n_);
        for (int i = 0; i < n_; ++i) {
            const double ang = kTwoPi * k * (i - c) / n_;
            ct[i] = w[i] * std::cos(ang);
            st[i] = -w[i] * std::sin(ang);
        }
    }
}

std::complex<double> Estimator::window_transform(double mu) const
{
    // Periodic Hann, center-referenced:
    //   W(mu) = 0.5*Dc(mu) + 0.25*Dc(mu-1) + 0.25*Dc(mu+1)
    // with Dc(mu) = e^{j*pi*mu/N} * sin(pi*mu) / sin(pi*mu/N), Dc(0) = N.
    // The plus signs come from the half-window phase reference: e^{j*pi*mu}
    // applied to the shifted Dirichlet kernels flips the -1/4 Hann terms.
    const auto dc = [this](double mu_) -> std::complex<double> {
        if (std::abs(mu_) < 1e-12) return {static_cast<double>(n_), 0.0};
        const double ratio = std::sin(kPi * mu_) / std::sin(kPi * mu_ / n_);
        const double ph = kPi * mu_ / n_;
        return {ratio * std::cos(ph), ratio * std::sin(ph)};
    };
    return 0.5 * dc(mu) + 0.25 * dc(mu - 1.0) + 0.25 * dc(mu + 1.0);
}

PhasorEstimate Estimator::estimate(const double* window) const
{
    bool any = false;
    for (int i = 0; i < n_; ++i) {
        if (window[i] != 0.0) {
            any = true;
            break;
        }
    }
    if (!any) throw NoSignalError();

    const int tab_hi = tab_lo_ + static_cast<int>(cos_tab_.size()) - 1;
    std::vector<std::complex<double>> X(cos_tab_.size());
    for (int k = tab_lo_; k <= tab_hi; ++k) {
        const int j = k - tab_lo_;
        X[j] = {kernels::dot(window, cos_tab_[j].data(), static_cast<std::size_t>(n_)),
                kernels::dot(window, sin_tab_[j].data(), static_cast<std::size_t>(n_))};
    }

    int peak = bin_lo_;
    double peak_mag = mag(X[peak - tab_lo_]);
    for (int k = bin_lo_ + 1; k <= bin_hi_; ++k) {
        const double m = mag(X[k - tab_lo_]);
        if (m > peak_mag) {
            peak = k;
            peak_mag = m;
        }
    }

    // Two-point interpolation on the Hann-weighted spectrum.
    const auto interpolate = [&](const std::complex<double>* bins) {
        const double lo = mag(bins[peak - 1 - tab_lo_]);
        const double hi = mag(bins[peak + 1 - tab_lo_]);
        const double beta = mag(bins[peak - tab_lo_]);
        const double eps = hi >= lo ? 1.0 : -1.0;
        const double alpha = eps > 0 ? hi : lo;
        double delta = alpha + beta > 0.0 ? eps * (2.0 * alpha - beta) / (alpha + beta) : 0.0;
        if (!std::isfinite(delta)) delta = 0.0;
        return delta;
    };
    const auto refine = [&](const std::complex<double>* bins, double delta,
                            double& amp, double& phase) {
        const auto wd = window_transform(-delta);
        const auto xk = bins[peak - tab_lo_];
        amp = 2.0 * mag(xk) / mag(wd);
        phase = std::arg(xk) - std::arg(wd);
    };

    double delta = interpolate(X.data());
    double amp = 0.0, phase = 0.0;
    refine(X.data(), delta, amp, phase);

    // Iteratively strip the negative-frequency image: reconstruct it from the
    // current estimate, subtract, and re-interpolate on the cleaned bins.
    std::vector<std::complex<double>> Xc(X.size());
    for (int it = 0; it < cfg_.eipdft_iterations; ++it) {
        const double fcyc = peak + delta;
        const std::complex<double> rot = std::polar(amp / 2.0, -phase);
        for (int k = std::max(tab_lo_, peak - 1); k <= std::min(tab_hi, peak + 1); ++k)
            Xc[k - tab_lo_] = X[k - tab_lo_] - rot * window_transform(k + fcyc);
        delta = interpolate(Xc.data());
        refine(Xc.data(), delta, amp, phase);
    }

    PhasorEstimate est;
    est.frequency_hz = (peak + delta) * cfg_.sample_rate_hz / n_;
    est.amplitude_peak = amp;
    est.phase_rad = wrap_pi(phase);
    return est;
}

double rocof(double f_hz, double f_prev_hz, double reporting_rate_hz)
{
    const double interval = 1.0 / reporting_rate_hz;
    return (f_hz - f_prev_hz) / interval;
}

Frame make_frame(const Estimator& est, const double* window, double t0_s,
                 std::size_t start_sample, const Frame* prev)
{
    const auto& cfg = est.config();
    const int n = cfg.window_samples();
    const double fs = cfg.sample_rate_hz;
    const double f0 = cfg.nominal_hz;

    Frame fr;
    const double center = static_cast<double>(start_sample) + n / 2.0;
    fr.timestamp_s = t0_s + center / fs;
    try {
        const auto ph = est.estimate(window);
        fr.magnitude_pu = ph.amplitude_peak / std::sqrt(2.0);
        fr.frequency_hz = ph.frequency_hz;
        // Synchrophasor phase: measured phase minus the nominal-frequency
        // reference 2*pi*f0*t at the window center, reduced before scaling
        // so precision does not degrade with elapsed time.
        const double cyc = f0 * t0_s + (f0 * center) / fs;
        const double frac = cyc - std::nearbyint(cyc);
        fr.phase_rad = wrap_pi(ph.phase_rad - kTwoPi * frac);
        fr.valid = std::isfinite(ph.frequency_hz) && ph.amplitude_peak > 0.0 &&
                   ph.frequency_hz >= kBandLo && ph.frequency_hz <= kBandHi;
    } catch (const NoSignalError&) {
        fr.magnitude_pu = std::numeric_limits<double>::quiet_NaN();
        fr.phase_rad = std::numeric_limits<double>::quiet_NaN();
        fr.frequency_hz = std::numeric_limits<double>::quiet_NaN();
        fr.valid = false;
    }
    if (prev && fr.valid && prev->valid) {
        fr.rocof_hzps = rocof(fr.frequency_hz, prev->frequency_hz, cfg.reporting_rate_hz);
        fr.rocof_valid = true;
    }
    return fr;
}

std::vector<Frame> run(const signal::SampleStream& s, const EstimatorConfig& cfg)
{
    cfg.validate();
    const Estimator est(cfg);
    const int n = cfg.window_samples();
    const int hop = cfg.hop_samples();
    std::vector<Frame> frames;
    if (s.samples.size() < static_cast<std::size_t>(n))
        throw std::invalid_argument("stream shorter than one analysis window");
    const std::size_t count = (s.samples.size() - n) / hop + 1;
    frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t start = i * hop;
        const Frame* prev = frames.empty() ? nullptr : &frames.back();
        frames.push_back(make_frame(est, s.samples.data() + start, s.t0_s, start, prev));
    }
    return frames;
}

namespace {

ErrorReport compare_to_truth(const std::vector<Frame>& frames,
                             const signal::FrequencyTrajectory& traj,
                             double rocof_true, double nominal_hz)
{
    ErrorReport rep;
    if (frames.size() < 5) return rep;
    std::vector<double> rocofs;
    double sum_r = 0.0;
    for (std::size_t i = 2; i + 2 < frames.size(); ++i) {
        const auto& fr = frames[i];
        const double t = fr.timestamp_s;
        const double f_true = traj.frequency_at(t);
        rep.max_fe_hz = std::max(rep.max_fe_hz, std::abs(fr.frequency_hz - f_true));
        const double theta = kTwoPi * (traj.phase_cycles_at(t) - nominal_hz * t);
        const std::complex<double> ref = std::polar(1.0, theta);
        const std::complex<double> mea = std::polar(fr.magnitude_pu, fr.phase_rad);
        rep.max_tve = std::max(rep.max_tve, std::abs(mea - ref));
        if (fr.rocof_valid) {
            rep.max_rfe_hzps =
                std::max(rep.max_rfe_hzps, std::abs(fr.rocof_hzps - rocof_true));
            rocofs.push_back(fr.rocof_hzps);
            sum_r += fr.rocof_hzps;
        }
        ++rep.frames;
    }
    if (rocofs.size() > 1) {
        const double mean = sum_r / static_cast<double>(rocofs.size());
        double ss = 0.0;
        for (double r : rocofs) ss += (r - mean) * (r - mean);
        rep.rocof_std_hzps = std::sqrt(ss / static_cast<double>(rocofs.size() - 1));
    }
    return rep;
}

}  // namespace

ErrorReport ramp_compliance(const EstimatorConfig& cfg)
{
    const auto traj = signal::ramp_trajectory();
    signal::SynthesisOptions opts;
    opts.sample_rate_hz = cfg.sample_rate_hz;
    const auto stream = signal::synthesize(traj, 10.0, opts);
    return compare_to_truth(run(stream, cfg), traj, 1.0, cfg.nominal_hz);
}

ErrorReport static_compliance(const EstimatorConfig& cfg, double freq_hz)
{
    const signal::FrequencyTrajectory traj{{{0.0, freq_hz}}};
    signal::SynthesisOptions opts;
    opts.sample_rate_hz = cfg.sample_rate_hz;
    const auto stream = signal::synthesize(traj, 10.0, opts);
    return compare_to_truth(run(stream, cfg), traj, 0.0, cfg.nominal_hz);
}

void write_frames_csv(const std::vector<Frame>& frames, std::ostream& out)
{
    out << "timestamp_s,mag_pu,phase_rad,freq_hz,rocof_hzps,valid\n";
    char line[160];
    for (const auto& fr : frames) {
        std::snprintf(line, sizeof line, "%.15g,%.15g,%.15g,%.15g,%.15g,%d\n",
                      fr.timestamp_s, fr.magnitude_pu, fr.phase_rad,
                      fr.frequency_hz, fr.rocof_hzps, fr.valid ? 1 : 0);
        out << line;
    }
}

}  // namespace uflsim::pmu
