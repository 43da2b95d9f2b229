#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "uflsim/signal.hpp"

namespace uflsim::pmu {

struct EstimatorConfig {
    int window_cycles = 3;        ///< analysis window length in nominal cycles
    double sample_rate_hz = 10000.0;
    int eipdft_iterations = 2;    ///< negative-image subtraction passes
    double reporting_rate_hz = 50.0;
    double nominal_hz = 50.0;

    int window_samples() const;   ///< window_cycles * sample_rate / nominal
    int hop_samples() const;      ///< sample_rate / reporting_rate
    /// Throws std::invalid_argument unless window and hop are whole sample
    /// counts, the window holds at least 4 samples, and iterations >= 0.
    void validate() const;
};

/// One reporting-rate measurement.  The timestamp is the center of the
/// analysis window that produced it; the frame becomes available one half
/// window later.
struct Frame {
    double timestamp_s = 0.0;
    double magnitude_pu = 0.0;   ///< RMS magnitude
    double phase_rad = 0.0;      ///< synchrophasor phase in (-pi, pi]
    double frequency_hz = 0.0;
    double rocof_hzps = 0.0;     ///< (f_k - f_{k-1}) / reporting interval
    bool valid = false;          ///< estimate health
    bool rocof_valid = false;    ///< false on the first frame of a stream
};

/// Raw single-window estimate: peak amplitude, frequency, and the phase of
/// the cosine argument at the window center (not yet nominal-referenced).
struct PhasorEstimate {
    double frequency_hz = 0.0;
    double amplitude_peak = 0.0;
    double phase_rad = 0.0;
};

struct NoSignalError : std::runtime_error {
    NoSignalError() : std::runtime_error("window contains no signal") {}
};

/*
 * Windowed interpolated-DFT estimator.
 *
 * A Hann-weighted DFT is evaluated on a handful of bins around nominal, the
 * fractional peak location is recovered from the two largest bins, and the
 * leakage of the negative-frequency image is then removed by reconstructing
 * it from the current estimate and re-interpolating (configurable number of
 * passes).  The window transform used for both interpolation and image
 * reconstruction is the exact closed form of the periodic Hann window, so
 * an on-bin tone is recovered to machine precision.
 *
 * DFT phases are referenced to the window center: estimates of phase are
 * directly the cosine argument at the center sample.
 */
class Estimator {
public:
    explicit Estimator(const EstimatorConfig& cfg);

    const EstimatorConfig& config() const { return cfg_; }

    /// Estimate from `window_samples()` contiguous samples.
    /// Throws NoSignalError if every sample is exactly zero.
    PhasorEstimate estimate(const double* window) const;

    /// Exact transform of the periodic Hann window at fractional bin mu,
    /// center-referenced.  Exposed for tests.
    std::complex<double> window_transform(double mu) const;

private:
    EstimatorConfig cfg_;
    int n_;                         // window length in samples
    int bin_lo_, bin_hi_;           // peak search range (integer bins)
    std::vector<std::vector<double>> cos_tab_, sin_tab_;  // per evaluated bin
    int tab_lo_;                    // bin index of tables[0]
};

/// ROCOF between consecutive frames.
double rocof(double f_hz, double f_prev_hz, double reporting_rate_hz);

/// Assemble one frame from the window starting at absolute sample index
/// `start_sample` of a stream whose sample 0 sits at t0_s.  `prev` links the
/// ROCOF chain (pass nullptr for the first frame of a stream); ROCOF is
/// computed only across consecutive valid frames.
Frame make_frame(const Estimator& est, const double* window, double t0_s,
                 std::size_t start_sample, const Frame* prev);

/// Run the estimator over a whole stream at the reporting rate.  Frame count
/// is floor((duration - window) / hop) + 1.  Estimation failures (no signal,
/// peak outside the supported band) yield frames with valid = false; ROCOF is
/// only computed across consecutive valid frames.
std::vector<Frame> run(const signal::SampleStream& s, const EstimatorConfig& cfg);

/// Accuracy summary against analytic ground truth.  The first and last two
/// frames of the stream are excluded (filter edge transients).
struct ErrorReport {
    double max_fe_hz = 0.0;        ///< max |frequency error|
    double max_rfe_hzps = 0.0;     ///< max |ROCOF error|
    double rocof_std_hzps = 0.0;   ///< std-dev of the ROCOF estimates
    double max_tve = 0.0;          ///< max total vector error (fraction)
    int frames = 0;                ///< frames contributing to the stats
};

/// Run on the standard 45 -> 55 Hz / 1 Hz/s ramp and compare to truth.
ErrorReport ramp_compliance(const EstimatorConfig& cfg);

/// Run on a constant tone at `freq_hz` (default nominal) and compare to truth.
ErrorReport static_compliance(const EstimatorConfig& cfg, double freq_hz = 50.0);

/// Dump frames as CSV with a header.
void write_frames_csv(const std::vector<Frame>& frames, std::ostream& out);

}  // namespace uflsim::pmu
