#include "uflsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uflsim::grid {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kCollapseHz = 45.0;
constexpr double kGolden = 0.6180339887498949;  // spreads bus phase offsets

bool is_synchronous(const Generator& g)
{
    return g.type != PlantType::wind;
}

}  // namespace

double Profile::value_at(double t) const
{
    if (values_mw.empty()) return 0.0;
    if (t <= 0.0) return values_mw.front();
    const auto idx = static_cast<std::size_t>(t / dt_s);
    return idx < values_mw.size() ? values_mw[idx] : values_mw.back();
}

void Profile::validate() const
{
    if (values_mw.empty())
        throw std::invalid_argument("profile has no values");
    if (!(dt_s > 0.0))
        throw std::invalid_argument("profile step must be positive");
    for (double v : values_mw)
        if (!std::isfinite(v))
            throw std::invalid_argument("profile value is not finite");
}

Grid::Grid(GridConfig cfg, std::vector<Generator> generators,
           std::vector<WindFarm> wind, std::vector<Load> loads,
           std::vector<Event> events, Perturbation pert)
    : cfg_(cfg),
      gens_(std::move(generators)),
      wind_(std::move(wind)),
      loads_(std::move(loads)),
      events_(std::move(events)),
      pert_(pert)
{
    if (!(cfg_.dt_s > 0.0))
        throw std::invalid_argument("dt must be positive");
    if (!(cfg_.f0_hz > 0.0))
        throw std::invalid_argument("nominal frequency must be positive");
    if (cfg_.damping_pu < 0.0)
        throw std::invalid_argument("damping must be non-negative");
    for (const auto& g : gens_) {
        if (g.capacity_mva <= 0.0)
            throw std::invalid_argument("generator " + g.id +
                                        ": capacity must be positive");
        if (g.inertia_h_s < 0.0 || g.dispatch_mw < 0.0 || g.headroom_mw < 0.0)
            throw std::invalid_argument("generator " + g.id +
                                        ": negative physical parameter");
        if (is_synchronous(g) && g.droop_pu <= 0.0)
            throw std::invalid_argument("generator " + g.id +
                                        ": droop must be positive");
    }
    for (const auto& w : wind_) w.output.validate();
    for (const auto& l : loads_) l.demand.validate();
    for (const auto& l : loads_)
        if (l.serve_factor < 0.0 || l.serve_factor > 1.0)
            throw std::invalid_argument("serve factor outside [0, 1]");
    for (const auto& e : events_) {
        if (e.time_s < 0.0)
            throw std::invalid_argument("event before t = 0");
        if (e.kind == Event::Kind::generator_trip) {
            const auto it = std::find_if(
                gens_.begin(), gens_.end(),
                [&](const Generator& g) { return g.id == e.generator_id; });
            if (it == gens_.end())
                throw std::invalid_argument("trip event for unknown generator " +
                                            e.generator_id);
        }
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const Event& a, const Event& b) { return a.time_s < b.time_s; });

    gov_.resize(gens_.size());
    for (std::size_t i = 0; i < gens_.size(); ++i)
        gov_[i] = {gens_[i].dispatch_mw, gens_[i].dispatch_mw};
    load_offset_mw_.assign(loads_.size(), 0.0);
    bus_phase_.resize(loads_.size());
    for (std::size_t i = 0; i < loads_.size(); ++i) {
        const double x = kGolden * static_cast<double>(i + 1);
        bus_phase_[i] = kTwoPi * (x - std::floor(x));
    }
    k1_.resize(gens_.size());
    k2_.resize(gens_.size());
    k3_.resize(gens_.size());
    k4_.resize(gens_.size());
    tmp_.resize(gens_.size());

    recompute_inertia();
    if (s_sys_ <= 0.0)
        throw std::invalid_argument("no online synchronous capacity");
}

void Grid::recompute_inertia()
{
    double s = 0.0, hs = 0.0;
    for (const auto& g : gens_) {
        if (!g.online || !is_synchronous(g)) continue;
        s += g.capacity_mva;
        hs += g.inertia_h_s * g.capacity_mva;
    }
    s_sys_ = s;
    h_sys_ = s > 0.0 ? hs / s : 0.0;
}

double Grid::load_at(double t) const
{
    double p = 0.0;
    for (std::size_t i = 0; i < loads_.size(); ++i)
        p += loads_[i].serve_factor *
             (loads_[i].demand.value_at(t) + load_offset_mw_[i]);
    return p;
}

double Grid::wind_at(double t) const
{
    double p = 0.0;
    for (const auto& w : wind_) p += w.output.value_at(t);
    return p;
}

double Grid::served_mw() const { return load_at(t_); }

double Grid::unserved_mw() const
{
    double p = 0.0;
    for (std::size_t i = 0; i < loads_.size(); ++i)
        p += (1.0 - loads_[i].serve_factor) *
             (loads_[i].demand.value_at(t_) + load_offset_mw_[i]);
    return p;
}

double Grid::mech_power_mw() const
{
    double p = 0.0;
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].online && is_synchronous(gens_[i])) p += gov_[i].pm;
    return p;
}

double Grid::wind_power_mw() const { return wind_at(t_); }

void Grid::derivative(double t, double df, const std::vector<GovState>& gov,
                      double* d_df, std::vector<GovState>& d_gov) const
{
    double p_mech = 0.0;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
        const auto& g = gens_[i];
        if (!g.online || !is_synchronous(g)) {
            d_gov[i] = {0.0, 0.0};
            continue;
        }
        p_mech += gov[i].pm;
        if (g.governor_t_s > 0.0) {
            // Droop demand in MW on the machine base; the limiter acts on the
            // integrated states, not here, so the lag sees the raw demand.
            const double target =
                g.dispatch_mw - (g.capacity_mva / g.droop_pu) * (df / cfg_.f0_hz);
            if (g.governor_t2_s > 0.0) {
                d_gov[i].servo = (target - gov[i].servo) / g.governor_t2_s;
                d_gov[i].pm = (gov[i].servo - gov[i].pm) / g.governor_t_s;
            } else {
                d_gov[i].servo = 0.0;
                d_gov[i].pm = (target - gov[i].pm) / g.governor_t_s;
            }
        } else {
            d_gov[i] = {0.0, 0.0};  // governor disabled: constant output
        }
    }
    const double residual = p_mech + wind_at(t) - load_at(t) -
                            cfg_.damping_pu * s_sys_ * (df / cfg_.f0_hz);
    *d_df = cfg_.f0_hz * residual / (2.0 * h_sys_ * s_sys_);
}

void Grid::apply_due_events()
{
    const double eps = 0.25 * cfg_.dt_s;
    while (next_event_ < events_.size() && events_[next_event_].time_s <= t_ + eps) {
        const auto& e = events_[next_event_];
        if (e.kind == Event::Kind::generator_trip) {
            for (auto& g : gens_)
                if (g.id == e.generator_id) g.online = false;
            recompute_inertia();
            if (s_sys_ <= 0.0) collapsed_ = true;
        } else {
            for (std::size_t i = 0; i < loads_.size(); ++i)
                if (loads_[i].bus == e.bus) {
                    load_offset_mw_[i] += e.delta_mw;
                    break;
                }
        }
        last_event_t_ = t_;
        ++next_event_;
    }
}

void Grid::step()
{
    apply_due_events();
    if (s_sys_ <= 0.0) {
        ++steps_;
        t_ = static_cast<double>(steps_) * cfg_.dt_s;
        return;
    }

    const double dt = cfg_.dt_s;
    double kd1, kd2, kd3, kd4;
    derivative(t_, delta_f_, gov_, &kd1, k1_);
    for (std::size_t i = 0; i < gov_.size(); ++i)
        tmp_[i] = {gov_[i].pm + 0.5 * dt * k1_[i].pm,
                   gov_[i].servo + 0.5 * dt * k1_[i].servo};
    derivative(t_ + 0.5 * dt, delta_f_ + 0.5 * dt * kd1, tmp_, &kd2, k2_);
    for (std::size_t i = 0; i < gov_.size(); ++i)
        tmp_[i] = {gov_[i].pm + 0.5 * dt * k2_[i].pm,
                   gov_[i].servo + 0.5 * dt * k2_[i].servo};
    derivative(t_ + 0.5 * dt, delta_f_ + 0.5 * dt * kd2, tmp_, &kd3, k3_);
    for (std::size_t i = 0; i < gov_.size(); ++i)
        tmp_[i] = {gov_[i].pm + dt * k3_[i].pm, gov_[i].servo + dt * k3_[i].servo};
    derivative(t_ + dt, delta_f_ + dt * kd3, tmp_, &kd4, k4_);

    delta_f_ += dt / 6.0 * (kd1 + 2.0 * kd2 + 2.0 * kd3 + kd4);
    for (std::size_t i = 0; i < gov_.size(); ++i) {
        gov_[i].pm += dt / 6.0 *
                      (k1_[i].pm + 2.0 * k2_[i].pm + 2.0 * k3_[i].pm + k4_[i].pm);
        gov_[i].servo += dt / 6.0 *
                         (k1_[i].servo + 2.0 * k2_[i].servo + 2.0 * k3_[i].servo +
                          k4_[i].servo);
        // Output limiter with anti-windup: both stages live inside
        // [0, dispatch + headroom], so recovery is not delayed by an
        // unbounded accumulated command.
        const auto& g = gens_[i];
        if (g.online && is_synchronous(g) && g.governor_t_s > 0.0) {
            const double cap = g.dispatch_mw + g.headroom_mw;
            gov_[i].pm = std::clamp(gov_[i].pm, 0.0, cap);
            gov_[i].servo = std::clamp(gov_[i].servo, 0.0, cap);
        }
    }

    ++steps_;
    t_ = static_cast<double>(steps_) * dt;
    if (frequency_hz() < kCollapseHz) collapsed_ = true;
}

double Grid::bus_frequency_hz(std::size_t load_index) const
{
    if (load_index >= loads_.size())
        throw std::out_of_range("load index out of range");
    double f = frequency_hz();
    if (pert_.amp_hz != 0.0 && last_event_t_) {
        const double tau = t_ - *last_event_t_;
        f += pert_.amp_hz * std::exp(-tau / pert_.tau_s) *
             std::sin(kTwoPi * pert_.freq_hz * tau + bus_phase_[load_index]);
    }
    return f;
}

double Grid::rocof_hzps() const
{
    double d_df = 0.0;
    auto scratch = gov_;
    derivative(t_, delta_f_, gov_, &d_df, scratch);
    return d_df;
}

double Grid::power_residual_mw() const
{
    return mech_power_mw() + wind_at(t_) - load_at(t_) -
           cfg_.damping_pu * s_sys_ * (delta_f_ / cfg_.f0_hz);
}

void Grid::set_serve_factor(int bus, double factor)
{
    if (factor < 0.0 || factor > 1.0)
        throw std::invalid_argument("serve factor outside [0, 1]");
    bool found = false;
    for (auto& l : loads_)
        if (l.bus == bus) {
            l.serve_factor = factor;
            found = true;
        }
    if (!found) throw std::invalid_argument("no load on requested bus");
}

double calibrate_inertia(double target_rocof_hzps, double tripped_mw,
                         const std::vector<Generator>& surviving, double f0_hz)
{
    if (!(target_rocof_hzps > 0.0))
        throw std::invalid_argument("target ROCOF must be positive");
    if (!(tripped_mw > 0.0))
        throw std::invalid_argument("tripped power must be positive");
    double hs = 0.0;
    for (const auto& g : surviving)
        if (g.online && is_synchronous(g)) hs += g.inertia_h_s * g.capacity_mva;
    if (hs <= 0.0)
        throw std::invalid_argument("surviving fleet has no inertia");
    const double rocof_now = f0_hz * tripped_mw / (2.0 * hs);
    return rocof_now / target_rocof_hzps;
}

void scale_inertia(std::vector<Generator>& gens, double factor)
{
    if (!(factor > 0.0))
        throw std::invalid_argument("inertia factor must be positive");
    for (auto& g : gens)
        if (is_synchronous(g)) g.inertia_h_s *= factor;
}

}  // namespace uflsim::grid
