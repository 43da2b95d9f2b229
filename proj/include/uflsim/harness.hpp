#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uflsim/grid.hpp"
#include "uflsim/pmu.hpp"
#include "uflsim/relay.hpp"

namespace uflsim::harness {

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationSpec {
    double target_rocof_hzps = 0.0;
};

/// A complete closed-loop study: network, disturbance events, measurement
/// chain, and relay parameters, loaded from JSON.
struct Scenario {
    std::string name;
    double duration_s = 60.0;
    std::uint64_t seed = 0;
    double noise_std_pu = 0.0;   ///< additive waveform noise at every bus
    double amplitude_rms = 1.0;  ///< waveform magnitude, per-unit

    grid::GridConfig grid_config;
    grid::Perturbation perturbation;
    std::vector<grid::Generator> generators;
    std::vector<grid::WindFarm> wind;
    std::vector<grid::Load> loads;
    std::vector<grid::Event> events;

    pmu::EstimatorConfig estimator;
    relay::Settings relay_settings;  ///< scheme field = scenario default
    std::optional<CalibrationSpec> calibration;

    static Scenario from_json_file(const std::filesystem::path& path);
    static Scenario from_json_text(const std::string& text);

    /// Structural checks beyond parsing: initial power balance within 1e-6,
    /// samples/steps/frames commensurate, events on the step grid and inside
    /// the run, one load per bus.  Throws ScenarioError.
    void validate() const;

    double initial_load_mw() const;
    double initial_generation_mw() const;  ///< dispatch plus initial wind

    /// Generation lost in the first contingency (all trips sharing the
    /// earliest event time).  Zero if the scenario has no trips.
    double contingency_mw() const;
    /// Fleet with the first-contingency units removed.
    std::vector<grid::Generator> surviving_fleet() const;
};

struct CommandRecord {
    double time_s = 0.0;  ///< actuation time (the dynamics boundary it took effect)
    int bus = 0;
    double serve_factor_pct = 100.0;
    std::string reason;
    int level = 0;
    double trigger_hz = 0.0;
};

struct RunResult {
    std::string scenario;
    std::string scheme;
    double duration_s = 0.0;
    bool collapse = false;
    double nadir_hz = 0.0;
    double nadir_time_s = 0.0;
    double initial_rocof_hzps = 0.0;  ///< |df/dt| right after the first trip
    double calibration_factor = 1.0;  ///< inertia multiplier actually applied
    double max_ls_factor_pct = 0.0;   ///< largest share of load shed, percent
    std::optional<double> first_shed_time_s;
    std::optional<double> last_restore_time_s;
    double ls_lr_duration_s = 0.0;  ///< first shed to last restore (or run end)
    bool restoration_incomplete = false;
    double curtailed_mwh = 0.0;
    std::vector<CommandRecord> commands;

    std::vector<int> bus_ids;  ///< monitored buses, scenario order
    std::vector<std::pair<double, double>> coi_trace;  ///< (t, f) each tick
    std::vector<std::vector<std::pair<double, double>>> bus_freq_trace;
    std::vector<std::vector<pmu::Frame>> bus_frames;
};

/// Closed-loop run: dynamics -> per-bus waveform -> estimator -> relays ->
/// serve-factor commands applied at the next dynamics boundary.
RunResult run_scenario(const Scenario& sc, relay::Scheme scheme);

/// Open-loop run with a fixed serve-factor script instead of relays.
struct ScriptedChange {
    double time_s = 0.0;
    int bus = 0;
    double serve_factor_pct = 100.0;
};
RunResult run_scripted(const Scenario& sc, const std::vector<ScriptedChange>& script);

std::vector<RunResult> compare_schemes(const Scenario& sc,
                                       const std::vector<relay::Scheme>& schemes);

/// Deterministic serialization of the headline metrics.
std::string metrics_json(const RunResult& r);

/// metrics.json, commands.csv, frames_<bus>.csv, frequency_<bus>.csv.
void write_outputs(const RunResult& r, const std::filesystem::path& dir);

/// One row per run: the headline metrics side by side.
void write_compare_csv(const std::vector<RunResult>& runs, std::ostream& out);

}  // namespace uflsim::harness
