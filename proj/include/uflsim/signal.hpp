#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace uflsim::signal {

/*
 * Piecewise-linear frequency trajectory.  Between breakpoints the frequency
 * is interpolated linearly; outside the covered range the boundary value is
 * held.  Phase is the exact integral of the trajectory (piecewise quadratic),
 * not an Euler accumulation, so synthesized waveforms carry no integration
 * drift regardless of sample rate.
 */
struct FrequencyTrajectory {
    struct Point {
        double time_s;
        double freq_hz;
    };

    std::vector<Point> points;

    /// Throws std::invalid_argument on empty, non-increasing times, or
    /// frequencies outside [40, 60] Hz.
    void validate() const;

    double start_time() const { return points.front().time_s; }

    /// Instantaneous frequency (boundary-held outside the breakpoints).
    double frequency_at(double t) const;

    /// Exact integral of frequency from the first breakpoint to t, in cycles.
    double phase_cycles_at(double t) const;
};

/// Fixed-rate waveform with per-unit samples.  t0 is the timestamp of
/// samples[0]; sample n sits at t0 + n / sample_rate_hz.
struct SampleStream {
    double sample_rate_hz = 10000.0;
    double t0_s = 0.0;
    std::vector<double> samples;

    double duration_s() const
    {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

struct SynthesisOptions {
    double amplitude_rms = 1.0;  ///< RMS of the fundamental, per-unit
    double phase0_rad = 0.0;     ///< phase at the trajectory start
    double noise_std = 0.0;      ///< additive white Gaussian noise, 0 = off
    std::uint64_t seed = 0;      ///< noise generator seed
    double sample_rate_hz = 10000.0;
};

/// Render `duration_s` seconds of waveform starting at the trajectory start:
///   x[n] = amplitude_rms * sqrt(2) * cos(2*pi*phi(t_n) + phase0) + noise
/// with phi the exact phase integral.  With noise_std = 0 the output is a
/// pure deterministic tone; with noise it is reproducible for a given seed.
/// Throws std::invalid_argument for invalid trajectories, non-positive
/// duration/amplitude, negative noise_std, or a sample rate that is not a
/// positive integer multiple of the 50 Hz reporting rate (windows and
/// derivative intervals must hold whole numbers of samples).
SampleStream synthesize(const FrequencyTrajectory& traj, double duration_s,
                        const SynthesisOptions& opts = {});

/// 45 -> 55 Hz at +1 Hz/s over 10 s: the standard estimator stress ramp.
FrequencyTrajectory ramp_trajectory();

/// The ramp trajectory rendered noise-free at 1 pu, 10 kHz.
SampleStream ramp_test_signal();

/// Dump as "time_s,value_pu" rows with a header.
void write_csv(const SampleStream& s, std::ostream& out);

namespace detail {
/// Deterministic standard-normal generator: mt19937_64 (bit-exact by the
/// standard) plus our own Box-Muller, so outputs do not depend on library
/// distribution implementations.
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed);
    double next();

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
    double uniform();
};
}  // namespace detail

}  // namespace uflsim::signal
