#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uflsim/pmu.hpp"

namespace uflsim::relay {

enum class Scheme { none, freq, rocof_a, rocof_b };

const char* scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);  // throws on unknown

/*
 * Staged shedding table.  Level 0 is normal operation (100 % served); level k
 * (1-based) serves serve_factor_pct[k] of load.  Arming thresholds are
 * indexed by the level they shed *to* (entry k-1 arms level k); restore
 * gates are indexed by the level they restore *to* (entry k-1 gates the
 * k -> k-1 transition).
 */
struct ThresholdTable {
    std::vector<double> serve_factor_pct;  // per level, starting at 100
    std::vector<double> rocof_a_hzps;      // scheme A magnitudes, per shed level
    std::vector<double> rocof_b_hzps;      // scheme B magnitudes, per shed level
    std::vector<double> f_ls_hz;           // underfrequency pickup, per shed level
    std::vector<double> f_lr_hz;           // restore gate, per restore target

    static ThresholdTable standard();
    int max_level() const { return static_cast<int>(serve_factor_pct.size()) - 1; }
    /// Throws std::invalid_argument on inconsistent sizes or non-monotonic
    /// entries (factors strictly decreasing, ROCOF thresholds non-decreasing,
    /// pickup/restore frequencies strictly decreasing, scheme B never less
    /// sensitive than scheme A).
    void validate() const;
};

struct Settings {
    Scheme scheme = Scheme::freq;
    ThresholdTable table = ThresholdTable::standard();
    int rocof_window_frames = 25;   ///< sustained-crossing length (500 ms at 50 fps)
    int freq_debounce_frames = 2;   ///< consecutive frames for underfrequency trip
    int restore_debounce_frames = 2;
    double restore_lockout_s = 5.0;      ///< spacing between restore steps
    double restore_after_shed_s = 5.0;   ///< quiet time after the last shed
};

struct Command {
    enum class Reason { shed_rocof, shed_freq, restore };
    double time_s = 0.0;  ///< frame timestamp; the actuation layer re-stamps
    int bus = 0;
    double serve_factor_pct = 100.0;
    Reason reason = Reason::shed_freq;
    int level = 0;          ///< level after the command
    double trigger_hz = 0.0;  ///< frequency (or ROCOF, for shed_rocof) that tripped
};

const char* reason_name(Command::Reason r);

/*
 * Per-bus shedding controller fed by measurement frames.
 *
 * ROCOF shedding arms level k only when every frame of the rolling
 * rocof_window_frames-long window lies at or below -threshold[k]; the window
 * never resets, so staying past a deeper threshold trips that level exactly
 * one window after the excursion began, regardless of commands issued in
 * between.  Underfrequency shedding requires freq_debounce_frames
 * consecutive frames at or below the pickup.  Shedding is one-directional
 * (deeper only) and at most one command is issued per frame, shed taking
 * priority over restore.  Restores step one level at a time, gated by the
 * target level's frequency threshold sustained restore_debounce_frames
 * frames, no sooner than restore_after_shed_s after the last shed and
 * restore_lockout_s after the last restore.  Invalid frames clear every
 * sustained condition (a gap cannot satisfy a threshold).
 */
class Relay {
public:
    Relay(Settings settings, int bus);

    /// Feed one frame; returns the command it triggers, if any.
    std::optional<Command> on_frame(const pmu::Frame& frame);

    void reset();

    int level() const { return level_; }
    int bus() const { return bus_; }
    double serve_factor_pct() const;
    const Settings& settings() const { return settings_; }

private:
    Settings settings_;
    int bus_;
    int level_ = 0;
    std::vector<int> rocof_run_;  // consecutive frames at/below each threshold
    std::vector<int> freq_run_;
    int restore_run_ = 0;
    double last_shed_t_;
    double last_restore_t_;

    const std::vector<double>& rocof_thresholds() const;
};

}  // namespace uflsim::relay
