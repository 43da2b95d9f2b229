#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace uflsim::grid {

enum class PlantType { thermal, hydro, wind };

/// Stepwise power series: values_mw[i] holds on [i*dt_s, (i+1)*dt_s); the
/// last value is held forever.  A single value is a constant.
struct Profile {
    double dt_s = 1.0;
    std::vector<double> values_mw;

    double value_at(double t) const;
    void validate() const;
};

struct Generator {
    std::string id;
    PlantType type = PlantType::thermal;
    int bus = 0;
    double capacity_mva = 0.0;
    double inertia_h_s = 0.0;    ///< on machine base
    double droop_pu = 0.05;      ///< per-unit speed droop on machine base
    double governor_t_s = 0.0;   ///< primary (turbine) time constant
    double governor_t2_s = 0.0;  ///< optional upstream servo stage, 0 = single lag
    double headroom_mw = 0.0;    ///< reserve above dispatch
    double dispatch_mw = 0.0;
    bool online = true;
};

struct WindFarm {
    std::string id;
    int bus = 0;
    double capacity_mva = 0.0;
    Profile output;  ///< injected as-is; no inertia, no governor
};

struct Load {
    int bus = 0;
    Profile demand;
    double serve_factor = 1.0;  ///< fraction of demand actually served
};

struct Event {
    enum class Kind { generator_trip, load_step };
    double time_s = 0.0;
    Kind kind = Kind::generator_trip;
    std::string generator_id;  ///< for generator_trip
    int bus = 0;               ///< for load_step
    double delta_mw = 0.0;     ///< for load_step (additive)
};

/// Local measurement-point deviation superposed on the common frequency:
/// a damped sinusoid restarted at every event.
struct Perturbation {
    double amp_hz = 0.0;
    double tau_s = 1.0;
    double freq_hz = 1.0;
};

struct GridConfig {
    double f0_hz = 50.0;
    double damping_pu = 1.0;  ///< load-frequency damping on total rating
    double dt_s = 0.001;
};

/*
 * Single-frequency (center-of-inertia) swing model:
 *
 *   (2 * H_sys / f0) * d(df)/dt = (P_mech + P_wind - P_served
 *                                  - D * S_sys * df / f0) / S_sys
 *
 * with H_sys = sum(H_i * S_i) / S_sys over online synchronous units,
 * recomputed whenever a unit trips.  Each synchronous unit carries a droop
 * governor modeled as one or two cascaded first-order lags whose output is
 * limited to [0, dispatch + headroom].  Integration is classical RK4 on a
 * fixed grid; events apply exactly at step boundaries.
 */
class Grid {
public:
    Grid(GridConfig cfg, std::vector<Generator> generators,
         std::vector<WindFarm> wind, std::vector<Load> loads,
         std::vector<Event> events, Perturbation pert = {});

    /// Advance one dt: apply events due at the current boundary, then
    /// integrate.  Integration continues after collapse; the flag latches.
    void step();

    double time_s() const { return t_; }
    double frequency_hz() const { return cfg_.f0_hz + delta_f_; }
    double delta_f_hz() const { return delta_f_; }
    bool collapsed() const { return collapsed_; }

    double s_sys_mva() const { return s_sys_; }
    double h_sys_s() const { return h_sys_; }

    /// Frequency seen at the measurement point of load `load_index`:
    /// common frequency plus the decaying local oscillation.
    double bus_frequency_hz(std::size_t load_index) const;

    /// d(df)/dt at the current state (the instantaneous ROCOF).
    double rocof_hzps() const;

    /// Net accelerating power in MW at the current state (zero at equilibrium).
    double power_residual_mw() const;

    /// Change the served fraction of every load on `bus` (1.0 = full).
    /// Takes effect from the current boundary.
    void set_serve_factor(int bus, double factor);

    double served_mw() const;      ///< total load currently served
    double unserved_mw() const;    ///< total load currently shed
    double mech_power_mw() const;  ///< sum of synchronous unit outputs
    double wind_power_mw() const;

    const std::vector<Generator>& generators() const { return gens_; }
    const std::vector<Load>& loads() const { return loads_; }
    const GridConfig& config() const { return cfg_; }

    /// Time of the most recent applied event (trip or load step), if any.
    std::optional<double> last_event_time() const { return last_event_t_; }

private:
    struct GovState {
        double pm;     // delivered mechanical power, MW
        double servo;  // first-stage state when governor_t2_s > 0
    };

    GridConfig cfg_;
    std::vector<Generator> gens_;
    std::vector<WindFarm> wind_;
    std::vector<Load> loads_;
    std::vector<Event> events_;  // sorted by time
    Perturbation pert_;
    std::vector<double> bus_phase_;  // per-load perturbation phase offset

    long long steps_ = 0;  // t_ = steps_ * dt, kept exact
    double t_ = 0.0;
    double delta_f_ = 0.0;
    std::vector<GovState> gov_;          // parallel to gens_
    std::vector<double> load_offset_mw_; // parallel to loads_ (load_step events)
    std::size_t next_event_ = 0;
    bool collapsed_ = false;
    std::optional<double> last_event_t_;

    double s_sys_ = 0.0;  // online synchronous rating
    double h_sys_ = 0.0;  // weighted system inertia

    // RK4 scratch, preallocated
    mutable std::vector<GovState> k1_, k2_, k3_, k4_, tmp_;

    void recompute_inertia();
    void apply_due_events();
    double load_at(double t) const;
    double wind_at(double t) const;
    // state derivative for RK4: df plus per-unit governor states
    void derivative(double t, double df, const std::vector<GovState>& gov,
                    double* d_df, std::vector<GovState>& d_gov) const;
};

/// Scalar inertia multiplier that makes the instantaneous ROCOF right after
/// losing `tripped_mw` equal `target_rocof_hzps` (absolute value), given the
/// surviving synchronous fleet.  Multiplying every H_i by the returned factor
/// achieves the target.  Throws std::invalid_argument on a non-positive
/// target, non-positive tripped power, or an empty surviving fleet.
double calibrate_inertia(double target_rocof_hzps, double tripped_mw,
                         const std::vector<Generator>& surviving, double f0_hz = 50.0);

/// Apply a multiplier to every synchronous unit's inertia in place.
void scale_inertia(std::vector<Generator>& gens, double factor);

}  // namespace uflsim::grid
