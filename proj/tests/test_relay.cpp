#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "uflsim/relay.hpp"

using namespace uflsim;

namespace {

pmu::Frame fr(double t, double freq, double rocof, bool valid = true,
              bool rocof_valid = true)
{
    pmu::Frame f;
    f.timestamp_s = t;
    f.magnitude_pu = valid ? 1.0 : std::numeric_limits<double>::quiet_NaN();
    f.phase_rad = 0.0;
    f.frequency_hz = valid ? freq : std::numeric_limits<double>::quiet_NaN();
    f.rocof_hzps = valid && rocof_valid ? rocof : 0.0;
    f.valid = valid;
    f.rocof_valid = valid && rocof_valid;
    return f;
}

relay::Settings settings(relay::Scheme s)
{
    relay::Settings st;
    st.scheme = s;
    return st;
}

/// Frame stream of (freq, rocof) pairs at 50 fps starting at t = 0.
struct Feeder {
    relay::Relay& r;
    int k = 0;
    std::vector<relay::Command> log = {};

    std::optional<relay::Command> feed(double freq, double rocof, bool valid = true,
                                       bool rocof_valid = true)
    {
        auto cmd = r.on_frame(fr(0.02 * k++, freq, rocof, valid, rocof_valid));
        if (cmd) log.push_back(*cmd);
        return cmd;
    }
    std::optional<relay::Command> feed_n(int n, double freq, double rocof)
    {
        std::optional<relay::Command> last;
        for (int i = 0; i < n; ++i)
            if (auto c = feed(freq, rocof)) last = c;
        return last;
    }
};

/// Self-consistent random walk: rocof is the actual frame-to-frame frequency
/// difference, with calm / dive / recover regimes and occasional dropouts.
std::vector<pmu::Frame> random_walk(unsigned seed, int n)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.002);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<pmu::Frame> frames;
    frames.reserve(n);
    double f = 50.0, prev = 50.0, drift = 0.0;
    bool prev_valid = false;
    for (int k = 0; k < n; ++k) {
        if (u(rng) < 0.01) {
            const double pick = u(rng);
            drift = pick < 0.4 ? 0.0 : (pick < 0.75 ? -0.015 : 0.010);
        }
        f = std::min(50.5, std::max(47.5, f + drift + jitter(rng)));
        const bool valid = u(rng) >= 0.002;
        const double rocof = prev_valid ? (f - prev) / 0.02 : 0.0;
        frames.push_back(fr(0.02 * k, f, rocof, valid, valid && prev_valid));
        prev = f;
        prev_valid = valid;
    }
    return frames;
}

}  // namespace

TEST_CASE("deployed threshold table: levels, sensitivities, gates")
{
    const auto t = relay::ThresholdTable::standard();
    CHECK_NOTHROW(t.validate());
    CHECK(t.max_level() == 6);
    CHECK(t.serve_factor_pct == std::vector<double>{100, 95, 90, 85, 75, 60, 50});
    CHECK(t.rocof_a_hzps == std::vector<double>{0.2, 0.4, 0.6, 0.7, 1.0, 1.3});
    CHECK(t.rocof_b_hzps == std::vector<double>{0.2, 0.3, 0.4, 0.5, 1.0, 1.3});
    CHECK(t.f_ls_hz == std::vector<double>{48.9, 48.8, 48.6, 48.4, 48.2, 48.0});
    CHECK(t.f_lr_hz == std::vector<double>{49.75, 49.6, 49.5, 49.4, 49.2, 49.0});
}

TEST_CASE("table validation rejects every inconsistency")
{
    using relay::ThresholdTable;
    auto ok = ThresholdTable::standard();

    auto t = ok;
    t.rocof_a_hzps.pop_back();
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.serve_factor_pct[0] = 99.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.serve_factor_pct[3] = 91.0;  // not decreasing
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.rocof_a_hzps[2] = 0.0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.rocof_b_hzps[1] = 0.5;  // less sensitive than A's 0.4
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.rocof_a_hzps[3] = 0.5;  // decreases after 0.6
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.f_ls_hz[2] = 48.85;  // not below the previous pickup
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.f_lr_hz[1] = 49.8;  // not below the previous gate
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.f_lr_hz[5] = 47.5;  // gate below its own pickup
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);

    t = ok;
    t.serve_factor_pct = {100.0};
    t.rocof_a_hzps.clear();
    t.rocof_b_hzps.clear();
    t.f_ls_hz.clear();
    t.f_lr_hz.clear();
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("scheme names round-trip and reject unknowns")
{
    for (auto s : {relay::Scheme::none, relay::Scheme::freq, relay::Scheme::rocof_a,
                   relay::Scheme::rocof_b})
        CHECK(relay::scheme_from_name(relay::scheme_name(s)) == s);
    CHECK(std::string(relay::scheme_name(relay::Scheme::freq)) == "f_ls");
    CHECK_THROWS_AS(relay::scheme_from_name("rocof_c"), std::invalid_argument);
}

TEST_CASE("relay construction rejects bad settings")
{
    auto st = settings(relay::Scheme::freq);
    st.rocof_window_frames = 0;
    CHECK_THROWS_AS(relay::Relay(st, 1), std::invalid_argument);
    st = settings(relay::Scheme::freq);
    st.restore_lockout_s = -1.0;
    CHECK_THROWS_AS(relay::Relay(st, 1), std::invalid_argument);
    st = settings(relay::Scheme::freq);
    st.table.f_ls_hz[0] = 49.8;  // above the restore gate
    CHECK_THROWS_AS(relay::Relay(st, 1), std::invalid_argument);
}

TEST_CASE("underfrequency pickup needs two consecutive frames")
{
    relay::Relay r(settings(relay::Scheme::freq), 7);
    Feeder f{r};

    CHECK(!f.feed(49.5, -0.1));
    CHECK(!f.feed(48.85, -0.3));     // first frame below 48.9
    auto cmd = f.feed(48.85, -0.3);  // second one trips
    REQUIRE(cmd);
    CHECK(cmd->reason == relay::Command::Reason::shed_freq);
    CHECK(cmd->level == 1);
    CHECK(cmd->serve_factor_pct == 95.0);
    CHECK(cmd->bus == 7);
    CHECK(cmd->trigger_hz == 48.85);
    CHECK(cmd->time_s == doctest::Approx(0.04));
    CHECK(r.level() == 1);
    CHECK(r.serve_factor_pct() == 95.0);

    // a single-frame dip does not re-trip deeper
    r.reset();
    Feeder g{r};
    g.feed(48.85, -0.3);
    g.feed(49.5, 0.0);
    g.feed(48.85, -0.3);
    CHECK(g.log.empty());
}

TEST_CASE("underfrequency jumps straight to the deepest satisfied level")
{
    relay::Relay r(settings(relay::Scheme::freq), 3);
    Feeder f{r};
    f.feed(48.1, -0.5);
    auto cmd = f.feed(48.1, -0.5);  // below 48.2 but not 48.0
    REQUIRE(cmd);
    CHECK(cmd->level == 5);
    CHECK(cmd->serve_factor_pct == 60.0);
    CHECK(f.log.size() == 1);

    CHECK(!f.feed_n(10, 48.1, -0.1));  // holding there adds nothing

    auto deeper = f.feed_n(2, 47.9, -0.2);
    REQUIRE(deeper);
    CHECK(deeper->level == 6);
    CHECK(deeper->serve_factor_pct == 50.0);
}

TEST_CASE("rocof shedding waits out the full sustained window")
{
    relay::Relay r(settings(relay::Scheme::rocof_a), 1);
    Feeder f{r};
    f.feed_n(10, 49.9, -0.05);

    // 24 frames at threshold strength, then one below: no command
    CHECK(!f.feed_n(24, 49.7, -0.25));
    CHECK(!f.feed(49.7, -0.15));
    CHECK(r.level() == 0);

    // a full 25-frame run trips on exactly the 25th frame
    for (int i = 0; i < 24; ++i) CHECK(!f.feed(49.5, -0.25));
    auto cmd = f.feed(49.5, -0.25);
    REQUIRE(cmd);
    CHECK(cmd->reason == relay::Command::Reason::shed_rocof);
    CHECK(cmd->level == 1);
    CHECK(cmd->trigger_hz == -0.25);
    // latency from first crossing frame to command: 24 hops of 20 ms
    CHECK(cmd->time_s - 0.02 * 35 == doctest::Approx(0.48));
}

TEST_CASE("the rolling window keeps counting through a shallower trip")
{
    relay::Relay r(settings(relay::Scheme::rocof_a), 1);
    Feeder f{r};
    f.feed_n(10, 49.9, -0.25);  // arms only the first threshold
    // now the dive deepens past the second threshold (0.4)
    std::optional<relay::Command> first, second;
    for (int i = 0; i < 40; ++i) {
        auto c = f.feed(49.5, -0.45);
        if (c && !first)
            first = c;
        else if (c && !second)
            second = c;
    }
    REQUIRE(first);
    CHECK(first->level == 1);
    // 10 frames at -0.25 plus 15 more at -0.45 complete the 25-frame run
    CHECK(first->time_s == doctest::Approx(0.02 * 24));
    REQUIRE(second);
    CHECK(second->level == 2);
    // the deeper run started at frame 10 and was unaffected by the level-1 shed
    CHECK(second->time_s == doctest::Approx(0.02 * 34));
    CHECK(f.log.size() == 2);
}

TEST_CASE("a deep dive trips the deepest sustained level in one command")
{
    relay::Relay r(settings(relay::Scheme::rocof_b), 1);
    Feeder f{r};
    auto cmd = f.feed_n(25, 49.0, -0.55);
    REQUIRE(cmd);
    CHECK(cmd->level == 4);  // -0.55 with scheme B sits past 0.5 but short of 1.0
    CHECK(cmd->serve_factor_pct == 75.0);
    CHECK(f.log.size() == 1);
}

TEST_CASE("invalid frames and rocof gaps clear every sustained run")
{
    relay::Relay r(settings(relay::Scheme::rocof_a), 1);
    Feeder f{r};
    f.feed_n(20, 49.6, -0.45);
    f.feed(0.0, 0.0, false);  // dropout
    CHECK(!f.feed_n(24, 49.6, -0.45));
    auto cmd = f.feed(49.6, -0.45);  // 25th after the gap
    REQUIRE(cmd);
    CHECK(cmd->level == 2);

    // a valid frame whose rocof chain restarted also clears the runs
    r.reset();
    Feeder g{r};
    g.feed_n(20, 49.6, -0.45);
    g.feed(49.6, 0.0, true, false);  // valid frame, no usable rocof
    CHECK(!g.feed_n(24, 49.6, -0.45));
    CHECK(g.feed(49.6, -0.45));

    // underfrequency debounce restarts across a dropout too
    relay::Relay rf(settings(relay::Scheme::freq), 1);
    Feeder h{rf};
    h.feed(48.85, -0.1);
    h.feed(0.0, 0.0, false);
    CHECK(!h.feed(48.85, -0.1));
    CHECK(h.feed(48.85, -0.1));
}

TEST_CASE("restores step one level at a time, spaced by the timers")
{
    relay::Relay r(settings(relay::Scheme::freq), 2);
    Feeder f{r};
    f.feed_n(5, 49.9, 0.0);
    auto shed = f.feed_n(2, 48.75, -0.4);  // straight to level 2
    REQUIRE(shed);
    CHECK(shed->level == 2);
    const double t_shed = shed->time_s;

    // recovery: hold well above every gate and collect restores for 12 s
    std::optional<relay::Command> r1, r2;
    for (int i = 0; i < 600; ++i) {
        auto c = f.feed(49.9, 0.1);
        if (c && !r1)
            r1 = c;
        else if (c && !r2)
            r2 = c;
    }
    REQUIRE(r1);
    REQUIRE(r2);
    CHECK(r1->reason == relay::Command::Reason::restore);
    CHECK(r1->level == 1);
    CHECK(r1->serve_factor_pct == 95.0);
    CHECK(r2->level == 0);
    CHECK(r2->serve_factor_pct == 100.0);
    CHECK(f.log.size() == 3);
    // no restore sooner than the post-shed quiet time; steps spaced by the lockout
    CHECK(r1->time_s - t_shed >= 5.0 - 1e-9);
    CHECK(r1->time_s - t_shed <= 5.05);
    CHECK(r2->time_s - r1->time_s >= 5.0 - 1e-9);
    CHECK(r2->time_s - r1->time_s <= 5.05);
    CHECK(r.level() == 0);
}

TEST_CASE("a recovery that stalls under the top gate strands the last level")
{
    relay::Relay r(settings(relay::Scheme::freq), 2);
    Feeder f{r};
    f.feed_n(2, 48.75, -0.4);  // level 2
    // 49.65 clears the level-1 gate (49.6) but not the level-0 gate (49.75)
    std::optional<relay::Command> only;
    for (int i = 0; i < 1500; ++i)
        if (auto c = f.feed(49.65, 0.0)) {
            CHECK(!only);
            only = c;
        }
    REQUIRE(only);
    CHECK(only->reason == relay::Command::Reason::restore);
    CHECK(only->level == 1);
    CHECK(r.level() == 1);  // stuck: 30 s was not enough without 49.75
}

TEST_CASE("restore gate frames must be consecutive")
{
    auto st = settings(relay::Scheme::freq);
    st.restore_after_shed_s = 0.0;
    st.restore_lockout_s = 0.0;
    relay::Relay r(st, 1);
    Feeder f{r};
    f.feed_n(2, 48.85, -0.2);  // level 1
    // alternate above/below the 49.75 gate: the two-frame debounce never fills
    for (int i = 0; i < 50; ++i) {
        CHECK(!f.feed(49.8, 0.0));
        CHECK(!f.feed(49.7, 0.0));
    }
    CHECK(!f.feed(49.8, 0.0));
    CHECK(f.feed(49.8, 0.0));  // two in a row finally restore
}

TEST_CASE("shedding outranks restoring on the same frame")
{
    auto st = settings(relay::Scheme::rocof_a);
    // timed so restore eligibility opens on exactly the frame that completes
    // the deeper sustained run: level-1 shed at t = 0.48, the -0.45 run spans
    // t = 0.50 .. 0.98, and 0.98 - 0.48 first satisfies the quiet time
    st.restore_after_shed_s = 0.5;
    relay::Relay r(st, 1);
    Feeder f{r};
    auto first = f.feed_n(25, 49.9, -0.25);
    REQUIRE(first);
    CHECK(first->level == 1);
    CHECK(first->time_s == doctest::Approx(0.48));

    // frequency satisfies the restore gate the whole time, yet the sustained
    // deeper excursion wins the contested frame
    std::optional<relay::Command> next;
    for (int i = 0; i < 25; ++i) {
        auto c = f.feed(49.9, -0.45);
        if (c) {
            CHECK(!next);
            next = c;
        }
    }
    REQUIRE(next);
    CHECK(next->reason == relay::Command::Reason::shed_rocof);
    CHECK(next->level == 2);
    CHECK(next->time_s == doctest::Approx(0.98));

    // with the excursion over, the restore lands once its quiet time does
    std::optional<relay::Command> back;
    for (int i = 0; i < 30; ++i) {
        auto c = f.feed(49.9, 0.0);
        if (c) {
            CHECK(!back);
            back = c;
        }
    }
    REQUIRE(back);
    CHECK(back->reason == relay::Command::Reason::restore);
    CHECK(back->level == 1);
    CHECK(back->time_s - next->time_s >= 0.5 - 1e-9);
}

TEST_CASE("scheme none never acts")
{
    relay::Relay r(settings(relay::Scheme::none), 1);
    Feeder f{r};
    f.feed_n(100, 47.6, -2.5);
    CHECK(f.log.empty());
    CHECK(r.level() == 0);
    CHECK(r.serve_factor_pct() == 100.0);
}

TEST_CASE("reset returns the relay to pristine state")
{
    relay::Relay r(settings(relay::Scheme::freq), 1);
    Feeder f{r};
    f.feed_n(2, 48.1, -0.5);
    CHECK(r.level() == 5);
    r.reset();
    CHECK(r.level() == 0);
    CHECK(r.serve_factor_pct() == 100.0);
    Feeder g{r};
    CHECK(!g.feed(48.85, -0.2));  // debounce starts over
    CHECK(g.feed(48.85, -0.2));
}

TEST_CASE("identical streams produce identical command sequences")
{
    for (auto scheme : {relay::Scheme::freq, relay::Scheme::rocof_a}) {
        relay::Relay a(settings(scheme), 4);
        relay::Relay b(settings(scheme), 4);
        const auto frames = random_walk(11u, 20000);
        std::vector<relay::Command> la, lb;
        for (const auto& frame : frames) {
            if (auto c = a.on_frame(frame)) la.push_back(*c);
            if (auto c = b.on_frame(frame)) lb.push_back(*c);
        }
        REQUIRE(la.size() == lb.size());
        for (std::size_t i = 0; i < la.size(); ++i) {
            CHECK(la[i].time_s == lb[i].time_s);
            CHECK(la[i].level == lb[i].level);
            CHECK(la[i].reason == lb[i].reason);
            CHECK(la[i].serve_factor_pct == lb[i].serve_factor_pct);
        }
    }
}

TEST_CASE("levels ratchet deeper except through explicit restores")
{
    for (auto scheme : {relay::Scheme::freq, relay::Scheme::rocof_a,
                        relay::Scheme::rocof_b}) {
        for (unsigned seed : {1u, 2u, 3u}) {
            relay::Relay r(settings(scheme), 1);
            const auto frames = random_walk(seed, 20000);
            int prev = 0;
            for (const auto& frame : frames) {
                const auto cmd = r.on_frame(frame);
                const int now = r.level();
                if (cmd && cmd->reason == relay::Command::Reason::restore) {
                    CHECK(now == prev - 1);
                    CHECK(cmd->level == now);
                } else {
                    CHECK(now >= prev);
                    if (cmd) CHECK(cmd->level == now);
                }
                const auto& pct = r.settings().table.serve_factor_pct;
                CHECK(r.serve_factor_pct() == pct[static_cast<std::size_t>(now)]);
                prev = now;
            }
        }
    }
}

TEST_CASE("the more sensitive table dominates: pointwise without restores")
{
    auto sa = settings(relay::Scheme::rocof_a);
    auto sb = settings(relay::Scheme::rocof_b);
    sa.restore_after_shed_s = sb.restore_after_shed_s = 1e9;
    for (unsigned seed : {5u, 6u, 7u, 8u}) {
        relay::Relay a(sa, 1), b(sb, 1);
        for (const auto& frame : random_walk(seed, 20000)) {
            a.on_frame(frame);
            b.on_frame(frame);
            CHECK(b.level() >= a.level());
        }
    }
}

TEST_CASE("the more sensitive table dominates: deepest level with restores")
{
    for (unsigned seed : {5u, 6u, 7u, 8u, 9u}) {
        relay::Relay a(settings(relay::Scheme::rocof_a), 1);
        relay::Relay b(settings(relay::Scheme::rocof_b), 1);
        int max_a = 0, max_b = 0;
        for (const auto& frame : random_walk(seed, 20000)) {
            a.on_frame(frame);
            b.on_frame(frame);
            max_a = std::max(max_a, a.level());
            max_b = std::max(max_b, b.level());
            CHECK(max_b >= max_a);
        }
    }
}

TEST_CASE("a million nominal frames never draw a command")
{
    std::mt19937 rng(99u);
    std::normal_distribution<double> noise(0.0, 1e-3);
    std::vector<relay::Relay> relays;
    for (auto s : {relay::Scheme::freq, relay::Scheme::rocof_a,
                   relay::Scheme::rocof_b, relay::Scheme::none})
        relays.emplace_back(settings(s), 1);

    double prev = 50.0;
    long commands = 0;
    for (int k = 0; k < 1000000; ++k) {
        const double f = 50.0 + noise(rng);
        const double rocof = k == 0 ? 0.0 : (f - prev) / 0.02;
        const auto frame = fr(0.02 * k, f, rocof, true, k > 0);
        for (auto& r : relays)
            if (r.on_frame(frame)) ++commands;
        prev = f;
    }
    CHECK(commands == 0);
    for (auto& r : relays) CHECK(r.level() == 0);
}
