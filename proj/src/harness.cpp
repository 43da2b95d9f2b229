#include "uflsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "uflsim/kernels.hpp"
#include "uflsim/signal.hpp"

namespace uflsim::harness {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

grid::PlantType plant_type_from(const std::string& s)
{
    if (s == "thermal") return grid::PlantType::thermal;
    if (s == "hydro") return grid::PlantType::hydro;
    if (s == "wind") return grid::PlantType::wind;
    throw ScenarioError("unknown plant type '" + s + "'");
}

grid::Profile parse_profile(const json& j)
{
    grid::Profile p;
    if (j.is_number()) {
        p.values_mw = {j.get<double>()};
    } else if (j.is_object()) {
        p.dt_s = j.value("dt_s", 1.0);
        p.values_mw = j.at("values_mw").get<std::vector<double>>();
    } else {
        throw ScenarioError("profile must be a number or an object");
    }
    return p;
}

std::uint64_t mix_seed(std::uint64_t seed, std::size_t stream)
{
    // splitmix64 round: decorrelates per-bus noise streams from one seed
    std::uint64_t z = seed + (stream + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

bool near_integer(double x, double tol = 1e-9)
{
    return std::abs(x - std::nearbyint(x)) <= tol;
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

}  // namespace

Scenario Scenario::from_json_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

Scenario Scenario::from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("invalid scenario JSON: ") + e.what());
    }

    Scenario sc;
    try {
        sc.name = j.at("name").get<std::string>();
        sc.duration_s = j.at("duration_s").get<double>();
        sc.seed = j.value("seed", std::uint64_t{0});
        sc.noise_std_pu = j.value("noise_std_pu", 0.0);
        sc.amplitude_rms = j.value("amplitude_rms", 1.0);

        sc.grid_config.f0_hz = j.value("f0_hz", 50.0);
        sc.grid_config.damping_pu = j.value("damping_pu", 1.0);
        sc.grid_config.dt_s = j.value("dt_s", 0.001);

        if (j.contains("perturbation")) {
            const auto& p = j.at("perturbation");
            sc.perturbation.amp_hz = p.value("amp_hz", 0.0);
            sc.perturbation.tau_s = p.value("tau_s", 1.0);
            sc.perturbation.freq_hz = p.value("freq_hz", 1.0);
        }

        sc.estimator.nominal_hz = sc.grid_config.f0_hz;
        if (j.contains("estimator")) {
            const auto& e = j.at("estimator");
            sc.estimator.window_cycles = e.value("window_cycles", 3);
            sc.estimator.sample_rate_hz = e.value("sample_rate_hz", 10000.0);
            sc.estimator.eipdft_iterations = e.value("eipdft_iterations", 2);
            sc.estimator.reporting_rate_hz = e.value("reporting_rate_hz", 50.0);
            sc.estimator.nominal_hz = e.value("nominal_hz", sc.grid_config.f0_hz);
        }

        sc.relay_settings.scheme =
            relay::scheme_from_name(j.value("default_scheme", "f_ls"));
        if (j.contains("relay")) {
            const auto& r = j.at("relay");
            sc.relay_settings.rocof_window_frames = r.value("rocof_window_frames", 25);
            sc.relay_settings.freq_debounce_frames = r.value("freq_debounce_frames", 2);
            sc.relay_settings.restore_debounce_frames =
                r.value("restore_debounce_frames", 2);
            sc.relay_settings.restore_lockout_s = r.value("restore_lockout_s", 5.0);
            sc.relay_settings.restore_after_shed_s =
                r.value("restore_after_shed_s", 5.0);
        }

        if (j.contains("calibration")) {
            CalibrationSpec cal;
            cal.target_rocof_hzps =
                j.at("calibration").at("target_rocof_hzps").get<double>();
            sc.calibration = cal;
        }

        for (const auto& gj : j.at("generators")) {
            grid::Generator g;
            g.id = gj.at("id").get<std::string>();
            g.type = plant_type_from(gj.value("type", std::string("thermal")));
            g.bus = gj.value("bus", 0);
            g.capacity_mva = gj.at("capacity_mva").get<double>();
            g.inertia_h_s = gj.value("inertia_h_s", 0.0);
            g.droop_pu = gj.value("droop_pu", 0.05);
            g.governor_t_s = gj.value("governor_t_s", 0.0);
            g.governor_t2_s = gj.value("governor_t2_s", 0.0);
            g.headroom_mw = gj.value("headroom_mw", 0.0);
            g.dispatch_mw = gj.value("dispatch_mw", 0.0);
            sc.generators.push_back(std::move(g));
        }
        if (j.contains("wind")) {
            for (const auto& wj : j.at("wind")) {
                grid::WindFarm w;
                w.id = wj.at("id").get<std::string>();
                w.bus = wj.value("bus", 0);
                w.capacity_mva = wj.at("capacity_mva").get<double>();
                w.output = parse_profile(wj.at("output_mw"));
                sc.wind.push_back(std::move(w));
            }
        }
        for (const auto& lj : j.at("loads")) {
            grid::Load l;
            l.bus = lj.at("bus").get<int>();
            l.demand = parse_profile(lj.at("demand_mw"));
            sc.loads.push_back(std::move(l));
        }
        if (j.contains("events")) {
            for (const auto& ej : j.at("events")) {
                grid::Event e;
                e.time_s = ej.at("time_s").get<double>();
                const auto kind = ej.at("type").get<std::string>();
                if (kind == "generator_trip") {
                    e.kind = grid::Event::Kind::generator_trip;
                    e.generator_id = ej.at("generator").get<std::string>();
                } else if (kind == "load_step") {
                    e.kind = grid::Event::Kind::load_step;
                    e.bus = ej.at("bus").get<int>();
                    e.delta_mw = ej.at("delta_mw").get<double>();
                } else {
                    throw ScenarioError("unknown event type '" + kind + "'");
                }
                sc.events.push_back(std::move(e));
            }
        }
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("scenario field error: ") + e.what());
    }
    sc.validate();
    return sc;
}

void Scenario::validate() const
{
    try {
        if (name.empty()) throw ScenarioError("scenario needs a name");
        if (!(duration_s > 0.0)) throw ScenarioError("duration must be positive");
        estimator.validate();
        relay_settings.table.validate();

        const double dt = grid_config.dt_s;
        if (!(dt > 0.0)) throw ScenarioError("dt must be positive");
        const double spst = estimator.sample_rate_hz * dt;  // samples per step
        if (!near_integer(spst) || spst < 1.0)
            throw ScenarioError("sample rate and dt are not commensurate");
        const double tick_s = estimator.hop_samples() / estimator.sample_rate_hz;
        if (!near_integer(tick_s / dt))
            throw ScenarioError("reporting interval must be a whole number of steps");
        if (!near_integer(duration_s / tick_s))
            throw ScenarioError("duration must be a whole number of reporting intervals");
        const double window_s = estimator.window_samples() / estimator.sample_rate_hz;
        if (duration_s < window_s + 2.0 * tick_s)
            throw ScenarioError("duration too short for a single measurement");

        if (generators.empty()) throw ScenarioError("no generators");
        if (loads.empty()) throw ScenarioError("no loads");
        for (std::size_t i = 0; i < generators.size(); ++i)
            for (std::size_t k = i + 1; k < generators.size(); ++k)
                if (generators[i].id == generators[k].id)
                    throw ScenarioError("duplicate generator id " + generators[i].id);
        for (std::size_t i = 0; i < loads.size(); ++i)
            for (std::size_t k = i + 1; k < loads.size(); ++k)
                if (loads[i].bus == loads[k].bus)
                    throw ScenarioError("duplicate load bus");

        const double load0 = initial_load_mw();
        if (load0 < 0.0) throw ScenarioError("initial load must be non-negative");
        const double gen0 = initial_generation_mw();
        if (std::abs(gen0 - load0) > 1e-6 * std::max(load0, 1.0))
            throw ScenarioError("initial imbalance: generation " + fmt(gen0) +
                                " MW vs load " + fmt(load0) + " MW");

        for (const auto& e : events) {
            if (!(e.time_s > 0.0) || e.time_s >= duration_s)
                throw ScenarioError("event time outside the run");
            if (!near_integer(e.time_s / dt, 1e-6))
                throw ScenarioError("event time not on the step grid");
            if (e.kind == grid::Event::Kind::generator_trip) {
                const bool known = std::any_of(
                    generators.begin(), generators.end(),
                    [&](const grid::Generator& g) { return g.id == e.generator_id; });
                if (!known)
                    throw ScenarioError("trip references unknown generator " +
                                        e.generator_id);
            } else {
                const bool known = std::any_of(
                    loads.begin(), loads.end(),
                    [&](const grid::Load& l) { return l.bus == e.bus; });
                if (!known) throw ScenarioError("load step references unknown bus");
            }
        }
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception& e) {
        throw ScenarioError(e.what());
    }
}

double Scenario::initial_load_mw() const
{
    double p = 0.0;
    for (const auto& l : loads) p += l.demand.value_at(0.0);
    return p;
}

double Scenario::initial_generation_mw() const
{
    double p = 0.0;
    for (const auto& g : generators)
        if (g.online && g.type != grid::PlantType::wind) p += g.dispatch_mw;
    for (const auto& w : wind) p += w.output.value_at(0.0);
    return p;
}

double Scenario::contingency_mw() const
{
    double t_first = std::numeric_limits<double>::infinity();
    for (const auto& e : events)
        if (e.kind == grid::Event::Kind::generator_trip)
            t_first = std::min(t_first, e.time_s);
    if (!std::isfinite(t_first)) return 0.0;
    double p = 0.0;
    for (const auto& e : events) {
        if (e.kind != grid::Event::Kind::generator_trip) continue;
        if (std::abs(e.time_s - t_first) > 1e-9) continue;
        for (const auto& g : generators)
            if (g.id == e.generator_id) p += g.dispatch_mw;
    }
    return p;
}

std::vector<grid::Generator> Scenario::surviving_fleet() const
{
    double t_first = std::numeric_limits<double>::infinity();
    for (const auto& e : events)
        if (e.kind == grid::Event::Kind::generator_trip)
            t_first = std::min(t_first, e.time_s);
    auto fleet = generators;
    if (!std::isfinite(t_first)) return fleet;
    for (const auto& e : events) {
        if (e.kind != grid::Event::Kind::generator_trip) continue;
        if (std::abs(e.time_s - t_first) > 1e-9) continue;
        for (auto& g : fleet)
            if (g.id == e.generator_id) g.online = false;
    }
    return fleet;
}

namespace {

/// Shared closed-loop / scripted driver.
RunResult run_core(const Scenario& sc, relay::Scheme scheme,
                   const std::vector<ScriptedChange>* script)
{
    RunResult res;
    res.scenario = sc.name;
    res.scheme = script ? "scripted" : relay::scheme_name(scheme);
    res.duration_s = sc.duration_s;

    auto gens = sc.generators;
    if (sc.calibration) {
        res.calibration_factor = grid::calibrate_inertia(
            sc.calibration->target_rocof_hzps, sc.contingency_mw(),
            sc.surviving_fleet(), sc.grid_config.f0_hz);
        grid::scale_inertia(gens, res.calibration_factor);
    }

    // Instantaneous frequency slope the moment the first contingency hits:
    // the system is balanced until then, so the accelerating power is exactly
    // the lost dispatch against the surviving inertia.
    {
        const double lost = sc.contingency_mw();
        if (lost > 0.0) {
            double hs = 0.0;
            auto fleet = sc.surviving_fleet();
            for (const auto& g : fleet)
                if (g.online && g.type != grid::PlantType::wind)
                    hs += g.inertia_h_s * g.capacity_mva * res.calibration_factor;
            if (hs > 0.0)
                res.initial_rocof_hzps = sc.grid_config.f0_hz * lost / (2.0 * hs);
        }
    }

    grid::Grid g(sc.grid_config, gens, sc.wind, sc.loads, sc.events,
                 sc.perturbation);

    const pmu::Estimator est(sc.estimator);
    const int window = sc.estimator.window_samples();
    const int hop = sc.estimator.hop_samples();
    const double fs = sc.estimator.sample_rate_hz;
    const double dt = sc.grid_config.dt_s;
    const int samples_per_step = static_cast<int>(std::llround(fs * dt));
    const double tick_s = hop / fs;
    const int steps_per_tick = static_cast<int>(std::llround(tick_s / dt));
    const long long ticks = std::llround(sc.duration_s / tick_s);

    const std::size_t nbus = sc.loads.size();
    for (const auto& l : sc.loads) res.bus_ids.push_back(l.bus);
    const auto bus_index = [&](int bus) -> std::size_t {
        for (std::size_t i = 0; i < nbus; ++i)
            if (res.bus_ids[i] == bus) return i;
        throw std::invalid_argument("command for unmonitored bus");
    };

    std::vector<std::vector<double>> win_buf(nbus, std::vector<double>(window, 0.0));
    std::vector<double> phase_cycles(nbus, 0.0);
    std::vector<signal::detail::NormalSource> noise;
    noise.reserve(nbus);
    for (std::size_t i = 0; i < nbus; ++i)
        noise.emplace_back(mix_seed(sc.seed, i));

    std::vector<relay::Relay> relays;
    if (!script && scheme != relay::Scheme::none) {
        auto settings = sc.relay_settings;
        settings.scheme = scheme;
        relays.reserve(nbus);
        for (std::size_t i = 0; i < nbus; ++i)
            relays.emplace_back(settings, res.bus_ids[i]);
    }

    std::vector<pmu::Frame> prev_frame(nbus);
    std::vector<char> has_prev(nbus, 0);
    std::vector<relay::Command> pending;

    std::vector<ScriptedChange> ordered_script;
    if (script) {
        ordered_script = *script;
        std::stable_sort(ordered_script.begin(), ordered_script.end(),
                         [](const ScriptedChange& a, const ScriptedChange& b) {
                             return a.time_s < b.time_s;
                         });
    }
    std::size_t si = 0;

    std::vector<double> serve_pct(nbus, 100.0);
    double min_serve = 100.0;

    res.bus_frames.resize(nbus);
    res.bus_freq_trace.resize(nbus);
    res.coi_trace.reserve(static_cast<std::size_t>(ticks) + 1);
    res.coi_trace.emplace_back(0.0, g.frequency_hz());
    std::vector<double> carry(nbus);
    for (std::size_t i = 0; i < nbus; ++i) {
        carry[i] = g.bus_frequency_hz(i);
        res.bus_freq_trace[i].emplace_back(0.0, carry[i]);
    }

    double nadir = g.frequency_hz();
    double nadir_t = 0.0;
    double curtailed_mws = 0.0;

    const double amplitude = sc.amplitude_rms * std::sqrt(2.0);
    std::vector<std::vector<double>> bf(nbus,
                                        std::vector<double>(steps_per_tick + 1));
    std::vector<double> seg_phase(static_cast<std::size_t>(hop));
    std::vector<double> wave(static_cast<std::size_t>(hop));
    long long written = 0;

    const auto note_command = [&](double t_apply, int bus, double pct,
                                  const char* reason, int level, double trigger) {
        const std::size_t bi = bus_index(bus);
        g.set_serve_factor(bus, pct / 100.0);
        serve_pct[bi] = pct;
        min_serve = std::min(min_serve, *std::min_element(serve_pct.begin(),
                                                          serve_pct.end()));
        res.commands.push_back({t_apply, bus, pct, reason, level, trigger});
        const bool is_restore = std::strcmp(reason, "restore") == 0;
        const bool is_shed = !is_restore && pct < 100.0;
        if (is_shed && !res.first_shed_time_s) res.first_shed_time_s = t_apply;
        if (is_restore || pct == 100.0) res.last_restore_time_s = t_apply;
    };

    for (long long tick = 0; tick < ticks; ++tick) {
        const double t_tick = static_cast<double>(tick * hop) / fs;

        // Actuate what the relays decided on the frame that closed the
        // previous tick: commands take effect at dynamics boundaries.
        for (const auto& c : pending)
            note_command(t_tick, c.bus, c.serve_factor_pct,
                         relay::reason_name(c.reason), c.level, c.trigger_hz);
        pending.clear();
        while (si < ordered_script.size() &&
               ordered_script[si].time_s <= t_tick + 0.25 * dt) {
            const auto& s = ordered_script[si];
            note_command(t_tick, s.bus, s.serve_factor_pct, "scripted", 0, 0.0);
            ++si;
        }

        for (std::size_t i = 0; i < nbus; ++i) bf[i][0] = carry[i];
        for (int s = 0; s < steps_per_tick; ++s) {
            curtailed_mws += g.unserved_mw() * dt;  // state holds over [t, t+dt)
            g.step();
            const double f = g.frequency_hz();
            if (f < nadir) {
                nadir = f;
                nadir_t = g.time_s();
            }
            for (std::size_t i = 0; i < nbus; ++i)
                bf[i][s + 1] = g.bus_frequency_hz(i);
        }

        for (std::size_t i = 0; i < nbus; ++i) {
            std::size_t w = 0;
            double phi = phase_cycles[i];
            for (int s = 0; s < steps_per_tick; ++s) {
                // Estimators only support [40, 60] Hz; synthesis saturates
                // there so a collapsing system yields off-nominal-but-finite
                // waveforms rather than invalid trajectories.
                const double fa = std::clamp(bf[i][s], 40.0, 60.0);
                const double fb = std::clamp(bf[i][s + 1], 40.0, 60.0);
                const double slope = (fb - fa) / dt;
                for (int k = 0; k < samples_per_step; ++k) {
                    const double tau = static_cast<double>(k) / fs;
                    seg_phase[w++] = phi + fa * tau + 0.5 * slope * tau * tau;
                }
                phi += 0.5 * (fa + fb) * dt;
            }
            phase_cycles[i] = phi;
            kernels::cosine_cycles(seg_phase.data(), wave.data(), seg_phase.size(),
                                   amplitude);
            if (sc.noise_std_pu > 0.0)
                for (auto& v : wave) v += sc.noise_std_pu * noise[i].next();
            auto& buf = win_buf[i];
            std::memmove(buf.data(), buf.data() + hop,
                         static_cast<std::size_t>(window - hop) * sizeof(double));
            std::memcpy(buf.data() + (window - hop), wave.data(),
                        static_cast<std::size_t>(hop) * sizeof(double));
        }
        written += hop;

        const double t_end = static_cast<double>((tick + 1) * hop) / fs;
        res.coi_trace.emplace_back(t_end, g.frequency_hz());
        for (std::size_t i = 0; i < nbus; ++i) {
            carry[i] = bf[i][steps_per_tick];
            res.bus_freq_trace[i].emplace_back(t_end, carry[i]);
        }

        if (written >= window) {
            const auto start_sample = static_cast<std::size_t>(written - window);
            for (std::size_t i = 0; i < nbus; ++i) {
                const pmu::Frame fr =
                    pmu::make_frame(est, win_buf[i].data(), 0.0, start_sample,
                                    has_prev[i] ? &prev_frame[i] : nullptr);
                res.bus_frames[i].push_back(fr);
                prev_frame[i] = fr;
                has_prev[i] = 1;
                if (!relays.empty()) {
                    if (auto cmd = relays[i].on_frame(fr)) pending.push_back(*cmd);
                }
            }
        }
    }

    res.collapse = g.collapsed();
    res.nadir_hz = nadir;
    res.nadir_time_s = nadir_t;
    res.max_ls_factor_pct = 100.0 - min_serve;
    res.curtailed_mwh = curtailed_mws / 3600.0;
    const bool any_shed = res.first_shed_time_s.has_value();
    bool all_restored = true;
    for (double s : serve_pct) all_restored = all_restored && s == 100.0;
    res.restoration_incomplete = any_shed && !all_restored;
    if (any_shed) {
        // Incomplete restoration still ends at the last restore command; the
        // horizon is used only when no restore ever happened.
        if (res.last_restore_time_s)
            res.ls_lr_duration_s = *res.last_restore_time_s - *res.first_shed_time_s;
        else
            res.ls_lr_duration_s = sc.duration_s - *res.first_shed_time_s;
    }
    return res;
}

}  // namespace

RunResult run_scenario(const Scenario& sc, relay::Scheme scheme)
{
    return run_core(sc, scheme, nullptr);
}

RunResult run_scripted(const Scenario& sc, const std::vector<ScriptedChange>& script)
{
    return run_core(sc, relay::Scheme::none, &script);
}

std::vector<RunResult> compare_schemes(const Scenario& sc,
                                       const std::vector<relay::Scheme>& schemes)
{
    std::vector<RunResult> out;
    out.reserve(schemes.size());
    for (auto s : schemes) out.push_back(run_scenario(sc, s));
    return out;
}

std::string metrics_json(const RunResult& r)
{
    ordered_json j;
    j["scenario"] = r.scenario;
    j["scheme"] = r.scheme;
    j["duration_s"] = r.duration_s;
    j["collapse"] = r.collapse;
    j["nadir_hz"] = r.nadir_hz;
    j["nadir_time_s"] = r.nadir_time_s;
    j["initial_rocof_hzps"] = r.initial_rocof_hzps;
    j["calibration_factor"] = r.calibration_factor;
    j["max_ls_factor_pct"] = r.max_ls_factor_pct;
    if (r.first_shed_time_s)
        j["first_shed_time_s"] = *r.first_shed_time_s;
    else
        j["first_shed_time_s"] = nullptr;
    if (r.last_restore_time_s)
        j["last_restore_time_s"] = *r.last_restore_time_s;
    else
        j["last_restore_time_s"] = nullptr;
    j["ls_lr_duration_s"] = r.ls_lr_duration_s;
    j["restoration_incomplete"] = r.restoration_incomplete;
    j["curtailed_mwh"] = r.curtailed_mwh;
    j["command_count"] = r.commands.size();
    j["backend"] = kernels::backend_name(kernels::active_backend());
    return j.dump(2) + "\n";
}

void write_outputs(const RunResult& r, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    {
        std::ofstream out(dir / "metrics.json", std::ios::binary);
        out << metrics_json(r);
    }
    {
        std::ofstream out(dir / "commands.csv", std::ios::binary);
        out << "time_s,bus,serve_factor_pct,reason\n";
        char line[160];
        for (const auto& c : r.commands) {
            std::snprintf(line, sizeof line, "%.15g,%d,%.15g,%s\n", c.time_s, c.bus,
                          c.serve_factor_pct, c.reason.c_str());
            out << line;
        }
    }
    for (std::size_t i = 0; i < r.bus_ids.size(); ++i) {
        {
            std::ofstream out(dir / ("frames_" + std::to_string(r.bus_ids[i]) + ".csv"),
                              std::ios::binary);
            pmu::write_frames_csv(r.bus_frames[i], out);
        }
        {
            std::ofstream out(
                dir / ("frequency_" + std::to_string(r.bus_ids[i]) + ".csv"),
                std::ios::binary);
            out << "time_s,frequency_hz\n";
            char line[80];
            for (const auto& [t, f] : r.bus_freq_trace[i]) {
                std::snprintf(line, sizeof line, "%.15g,%.15g\n", t, f);
                out << line;
            }
        }
    }
}

void write_compare_csv(const std::vector<RunResult>& runs, std::ostream& out)
{
    out << "scheme,collapse,nadir_hz,nadir_time_s,max_ls_factor_pct,"
           "first_shed_time_s,ls_lr_duration_s,restoration_incomplete,"
           "curtailed_mwh\n";
    for (const auto& r : runs) {
        out << r.scheme << ',' << (r.collapse ? 1 : 0) << ',' << fmt(r.nadir_hz)
            << ',' << fmt(r.nadir_time_s) << ',' << fmt(r.max_ls_factor_pct) << ',';
        if (r.first_shed_time_s) out << fmt(*r.first_shed_time_s);
        out << ',' << fmt(r.ls_lr_duration_s) << ','
            << (r.restoration_incomplete ? 1 : 0) << ',' << fmt(r.curtailed_mwh)
            << '\n';
    }
}

}  // namespace uflsim::harness
