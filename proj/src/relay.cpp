#include "uflsim/relay.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace uflsim::relay {

namespace {
constexpr double kNeverT = -std::numeric_limits<double>::infinity();
}

const char* scheme_name(Scheme s)
{
    switch (s) {
        case Scheme::none: return "none";
        case Scheme::freq: return "f_ls";
        case Scheme::rocof_a: return "rocof_a";
        case Scheme::rocof_b: return "rocof_b";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name)
{
    if (name == "none") return Scheme::none;
    if (name == "f_ls") return Scheme::freq;
    if (name == "rocof_a") return Scheme::rocof_a;
    if (name == "rocof_b") return Scheme::rocof_b;
    throw std::invalid_argument("unknown scheme '" + name +
                                "' (expected none, f_ls, rocof_a, rocof_b)");
}

const char* reason_name(Command::Reason r)
{
    switch (r) {
        case Command::Reason::shed_rocof: return "shed_rocof";
        case Command::Reason::shed_freq: return "shed_freq";
        case Command::Reason::restore: return "restore";
    }
    return "?";
}

ThresholdTable ThresholdTable::standard()
{
    ThresholdTable t;
    t.serve_factor_pct = {100.0, 95.0, 90.0, 85.0, 75.0, 60.0, 50.0};
    t.rocof_a_hzps = {0.2, 0.4, 0.6, 0.7, 1.0, 1.3};
    t.rocof_b_hzps = {0.2, 0.3, 0.4, 0.5, 1.0, 1.3};
    t.f_ls_hz = {48.9, 48.8, 48.6, 48.4, 48.2, 48.0};
    t.f_lr_hz = {49.75, 49.6, 49.5, 49.4, 49.2, 49.0};
    return t;
}

void ThresholdTable::validate() const
{
    const std::size_t levels = serve_factor_pct.size();
    if (levels < 2)
        throw std::invalid_argument("table needs at least one shed level");
    if (rocof_a_hzps.size() != levels - 1 || rocof_b_hzps.size() != levels - 1 ||
        f_ls_hz.size() != levels - 1 || f_lr_hz.size() != levels - 1)
        throw std::invalid_argument("threshold arrays must have one entry per shed level");
    if (serve_factor_pct.front() != 100.0)
        throw std::invalid_argument("level 0 must serve 100 %");
    for (std::size_t i = 1; i < levels; ++i)
        if (!(serve_factor_pct[i] < serve_factor_pct[i - 1]) ||
            serve_factor_pct[i] < 0.0)
            throw std::invalid_argument("serve factors must decrease with level");
    for (std::size_t i = 0; i + 1 < levels; ++i) {
        if (!(rocof_a_hzps[i] > 0.0) || !(rocof_b_hzps[i] > 0.0))
            throw std::invalid_argument("ROCOF thresholds must be positive");
        if (rocof_b_hzps[i] > rocof_a_hzps[i])
            throw std::invalid_argument("scheme B must be at least as sensitive as A");
        if (i > 0 && (rocof_a_hzps[i] < rocof_a_hzps[i - 1] ||
                      rocof_b_hzps[i] < rocof_b_hzps[i - 1]))
            throw std::invalid_argument("ROCOF thresholds must not decrease with level");
        if (i > 0 && !(f_ls_hz[i] < f_ls_hz[i - 1]))
            throw std::invalid_argument("pickup frequencies must decrease with level");
        if (i > 0 && !(f_lr_hz[i] < f_lr_hz[i - 1]))
            throw std::invalid_argument("restore gates must decrease with level");
        if (!(f_lr_hz[i] > f_ls_hz[i]))
            throw std::invalid_argument("restore gate must sit above the pickup");
    }
}

Relay::Relay(Settings settings, int bus)
    : settings_(std::move(settings)),
      bus_(bus),
      last_shed_t_(kNeverT),
      last_restore_t_(kNeverT)
{
    settings_.table.validate();
    if (settings_.rocof_window_frames < 1 || settings_.freq_debounce_frames < 1 ||
        settings_.restore_debounce_frames < 1)
        throw std::invalid_argument("frame counts must be >= 1");
    if (settings_.restore_lockout_s < 0.0 || settings_.restore_after_shed_s < 0.0)
        throw std::invalid_argument("restore timers must be non-negative");
    const auto shed_levels = static_cast<std::size_t>(settings_.table.max_level());
    rocof_run_.assign(shed_levels, 0);
    freq_run_.assign(shed_levels, 0);
}

void Relay::reset()
{
    level_ = 0;
    std::fill(rocof_run_.begin(), rocof_run_.end(), 0);
    std::fill(freq_run_.begin(), freq_run_.end(), 0);
    restore_run_ = 0;
    last_shed_t_ = kNeverT;
    last_restore_t_ = kNeverT;
}

double Relay::serve_factor_pct() const
{
    return settings_.table.serve_factor_pct[static_cast<std::size_t>(level_)];
}

const std::vector<double>& Relay::rocof_thresholds() const
{
    return settings_.scheme == Scheme::rocof_b ? settings_.table.rocof_b_hzps
                                               : settings_.table.rocof_a_hzps;
}

std::optional<Command> Relay::on_frame(const pmu::Frame& frame)
{
    if (settings_.scheme == Scheme::none) return std::nullopt;
    if (!frame.valid) {
        // A gap can satisfy no threshold: every sustained condition restarts.
        std::fill(rocof_run_.begin(), rocof_run_.end(), 0);
        std::fill(freq_run_.begin(), freq_run_.end(), 0);
        restore_run_ = 0;
        return std::nullopt;
    }

    const auto& tab = settings_.table;
    const bool rocof_scheme =
        settings_.scheme == Scheme::rocof_a || settings_.scheme == Scheme::rocof_b;

    int target = level_;
    double trigger = 0.0;
    Command::Reason reason = Command::Reason::shed_freq;
    if (rocof_scheme) {
        const auto& thr = rocof_thresholds();
        if (frame.rocof_valid) {
            for (std::size_t k = 0; k < thr.size(); ++k)
                rocof_run_[k] = frame.rocof_hzps <= -thr[k] ? rocof_run_[k] + 1 : 0;
        } else {
            std::fill(rocof_run_.begin(), rocof_run_.end(), 0);
        }
        for (int k = static_cast<int>(thr.size()) - 1; k >= 0; --k)
            if (rocof_run_[static_cast<std::size_t>(k)] >= settings_.rocof_window_frames) {
                if (k + 1 > target) {
                    target = k + 1;
                    trigger = frame.rocof_hzps;
                    reason = Command::Reason::shed_rocof;
                }
                break;
            }
    } else {
        for (std::size_t k = 0; k < tab.f_ls_hz.size(); ++k)
            freq_run_[k] = frame.frequency_hz <= tab.f_ls_hz[k] ? freq_run_[k] + 1 : 0;
        for (int k = static_cast<int>(tab.f_ls_hz.size()) - 1; k >= 0; --k)
            if (freq_run_[static_cast<std::size_t>(k)] >= settings_.freq_debounce_frames) {
                if (k + 1 > target) {
                    target = k + 1;
                    trigger = frame.frequency_hz;
                    reason = Command::Reason::shed_freq;
                }
                break;
            }
    }

    if (target > level_) {
        level_ = target;
        last_shed_t_ = frame.timestamp_s;
        restore_run_ = 0;
        return Command{frame.timestamp_s, bus_, serve_factor_pct(), reason, level_,
                       trigger};
    }

    if (level_ > 0) {
        const double gate = tab.f_lr_hz[static_cast<std::size_t>(level_ - 1)];
        restore_run_ = frame.frequency_hz >= gate ? restore_run_ + 1 : 0;
        if (restore_run_ >= settings_.restore_debounce_frames &&
            frame.timestamp_s - last_shed_t_ >= settings_.restore_after_shed_s &&
            frame.timestamp_s - last_restore_t_ >= settings_.restore_lockout_s) {
            --level_;
            last_restore_t_ = frame.timestamp_s;
            restore_run_ = 0;
            return Command{frame.timestamp_s, bus_, serve_factor_pct(),
                           Command::Reason::restore, level_, frame.frequency_hz};
        }
    }
    return std::nullopt;
}

}  // namespace uflsim::relay
