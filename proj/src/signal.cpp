#include "uflsim/signal.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "uflsim/kernels.hpp"

namespace uflsim::signal {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kFreqMin = 40.0;
constexpr double kFreqMax = 60.0;
constexpr double kReportingRate = 50.0;

/// Cumulative phase (cycles) at each breakpoint, relative to the first.
std::vector<double> cumulative_cycles(const FrequencyTrajectory& traj)
{
    const auto& p = traj.points;
    std::vector<double> cum(p.size(), 0.0);
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const double dt = p[i + 1].time_s - p[i].time_s;
        cum[i + 1] = cum[i] + 0.5 * (p[i].freq_hz + p[i + 1].freq_hz) * dt;
    }
    return cum;
}

}  // namespace

void FrequencyTrajectory::validate() const
{
    if (points.empty())
        throw std::invalid_argument("trajectory has no breakpoints");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& pt = points[i];
        if (!std::isfinite(pt.time_s) || !std::isfinite(pt.freq_hz))
            throw std::invalid_argument("trajectory breakpoint is not finite");
        if (pt.freq_hz < kFreqMin || pt.freq_hz > kFreqMax)
            throw std::invalid_argument(
                "trajectory frequency " + std::to_string(pt.freq_hz) +
                " Hz outside [40, 60] Hz");
        if (i > 0 && !(pt.time_s > points[i - 1].time_s))
            throw std::invalid_argument(
                "trajectory breakpoint times must be strictly increasing");
    }
}

double FrequencyTrajectory::frequency_at(double t) const
{
    if (t <= points.front().time_s) return points.front().freq_hz;
    if (t >= points.back().time_s) return points.back().freq_hz;
    std::size_t i = 0;
    while (i + 1 < points.size() && points[i + 1].time_s <= t) ++i;
    const auto& a = points[i];
    const auto& b = points[i + 1];
    const double w = (t - a.time_s) / (b.time_s - a.time_s);
    return a.freq_hz + w * (b.freq_hz - a.freq_hz);
}

double FrequencyTrajectory::phase_cycles_at(double t) const
{
    const auto cum = cumulative_cycles(*this);
    if (t <= points.front().time_s)
        return points.front().freq_hz * (t - points.front().time_s);
    if (t >= points.back().time_s)
        return cum.back() + points.back().freq_hz * (t - points.back().time_s);
    std::size_t i = 0;
    while (i + 1 < points.size() && points[i + 1].time_s <= t) ++i;
    const auto& a = points[i];
    const auto& b = points[i + 1];
    const double tau = t - a.time_s;
    const double slope = (b.freq_hz - a.freq_hz) / (b.time_s - a.time_s);
    return cum[i] + a.freq_hz * tau + 0.5 * slope * tau * tau;
}

SampleStream synthesize(const FrequencyTrajectory& traj, double duration_s,
                        const SynthesisOptions& opts)
{
    traj.validate();
    if (!(duration_s > 0.0))
        throw std::invalid_argument("duration must be positive");
    if (!(opts.amplitude_rms > 0.0))
        throw std::invalid_argument("amplitude must be positive");
    if (opts.noise_std < 0.0)
        throw std::invalid_argument("noise_std must be non-negative");
    const double fs = opts.sample_rate_hz;
    if (!(fs > 0.0) || std::floor(fs) != fs ||
        std::fmod(fs, kReportingRate) != 0.0)
        throw std::invalid_argument(
            "sample rate must be a positive integer multiple of the 50 Hz "
            "reporting rate");

    const auto n_samples = static_cast<std::size_t>(std::llround(duration_s * fs));
    if (n_samples == 0)
        throw std::invalid_argument("duration too short for one sample");

    SampleStream out;
    out.sample_rate_hz = fs;
    out.t0_s = traj.start_time();
    out.samples.resize(n_samples);

    // Phase of every sample in cycles, exact per segment: cum + f*tau + s/2*tau^2.
    const auto& pts = traj.points;
    const auto cum = cumulative_cycles(traj);
    const double phase0_cycles = opts.phase0_rad / kTwoPi;
    std::vector<double> phase(n_samples);
    std::size_t seg = 0;
    for (std::size_t n = 0; n < n_samples; ++n) {
        const double t = out.t0_s + static_cast<double>(n) / fs;
        while (seg + 1 < pts.size() && pts[seg + 1].time_s <= t) ++seg;
        const double tau = t - pts[seg].time_s;
        double phi;
        if (seg + 1 < pts.size()) {
            const double slope = (pts[seg + 1].freq_hz - pts[seg].freq_hz) /
                                 (pts[seg + 1].time_s - pts[seg].time_s);
            phi = cum[seg] + pts[seg].freq_hz * tau + 0.5 * slope * tau * tau;
        } else {
            phi = cum[seg] + pts[seg].freq_hz * tau;
        }
        phase[n] = phi + phase0_cycles;
    }

    const double amplitude = opts.amplitude_rms * std::sqrt(2.0);
    kernels::cosine_cycles(phase.data(), out.samples.data(), n_samples, amplitude);

    if (opts.noise_std > 0.0) {
        detail::NormalSource noise(opts.seed);
        for (auto& v : out.samples) v += opts.noise_std * noise.next();
    }
    return out;
}

FrequencyTrajectory ramp_trajectory()
{
    return FrequencyTrajectory{{{0.0, 45.0}, {10.0, 55.0}}};
}

SampleStream ramp_test_signal()
{
    return synthesize(ramp_trajectory(), 10.0);
}

void write_csv(const SampleStream& s, std::ostream& out)
{
    out << "time_s,value_pu\n";
    char line[80];
    for (std::size_t n = 0; n < s.samples.size(); ++n) {
        const double t = s.t0_s + static_cast<double>(n) / s.sample_rate_hz;
        std::snprintf(line, sizeof line, "%.15g,%.15g\n", t, s.samples[n]);
        out << line;
    }
}

namespace detail {

NormalSource::NormalSource(std::uint64_t seed) : rng_(seed) {}

double NormalSource::uniform()
{
    // 53-bit mantissa in [0, 1); engine output is bit-exact per the standard.
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

double NormalSource::next()
{
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
}

}  // namespace detail

}  // namespace uflsim::signal
