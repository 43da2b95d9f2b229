#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "uflsim/grid.hpp"
#include "uflsim/harness.hpp"
#include "uflsim/pmu.hpp"
#include "uflsim/relay.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;       // internal failure
constexpr int kExitBadInput = 2;    // invalid scenario or arguments
constexpr int kExitCollapse = 3;    // a run ended in frequency collapse

std::vector<uflsim::relay::Scheme> parse_schemes(const std::string& csv)
{
    std::vector<uflsim::relay::Scheme> out;
    std::string token;
    for (std::size_t i = 0; i <= csv.size(); ++i) {
        if (i == csv.size() || csv[i] == ',') {
            if (!token.empty()) out.push_back(uflsim::relay::scheme_from_name(token));
            token.clear();
        } else {
            token += csv[i];
        }
    }
    if (out.empty()) throw std::invalid_argument("no schemes given");
    return out;
}

int cmd_simulate(const std::string& scenario_path, const std::string& scheme_name,
                 const std::string& out_dir)
{
    const auto sc = uflsim::harness::Scenario::from_json_file(scenario_path);
    const auto scheme = scheme_name.empty()
                            ? sc.relay_settings.scheme
                            : uflsim::relay::scheme_from_name(scheme_name);
    const auto res = uflsim::harness::run_scenario(sc, scheme);
    uflsim::harness::write_outputs(res, out_dir);
    std::cout << uflsim::harness::metrics_json(res);
    return res.collapse ? kExitCollapse : kExitOk;
}

int cmd_compare(const std::string& scenario_path, const std::string& schemes_csv,
                const std::string& out_dir)
{
    const auto sc = uflsim::harness::Scenario::from_json_file(scenario_path);
    const auto schemes = parse_schemes(schemes_csv);
    const auto runs = uflsim::harness::compare_schemes(sc, schemes);
    for (const auto& r : runs)
        uflsim::harness::write_outputs(r, std::filesystem::path(out_dir) / r.scheme);
    {
        std::ofstream out(std::filesystem::path(out_dir) / "compare.csv",
                          std::ios::binary);
        uflsim::harness::write_compare_csv(runs, out);
    }
    uflsim::harness::write_compare_csv(runs, std::cout);
    bool collapsed = false;
    for (const auto& r : runs) collapsed = collapsed || r.collapse;
    return collapsed ? kExitCollapse : kExitOk;
}

int cmd_pmu_test(const std::string& mode, const std::string& out_dir)
{
    uflsim::pmu::EstimatorConfig cfg;
    uflsim::pmu::ErrorReport rep;
    if (mode == "ramp")
        rep = uflsim::pmu::ramp_compliance(cfg);
    else if (mode == "static")
        rep = uflsim::pmu::static_compliance(cfg);
    else
        throw std::invalid_argument("pmu-test mode must be 'ramp' or 'static'");
    nlohmann::ordered_json j;
    j["mode"] = mode;
    j["max_fe_hz"] = rep.max_fe_hz;
    j["max_rfe_hzps"] = rep.max_rfe_hzps;
    j["rocof_std_hzps"] = rep.rocof_std_hzps;
    j["max_tve"] = rep.max_tve;
    j["frames"] = rep.frames;
    const std::string text = j.dump(2) + "\n";
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        std::ofstream out(std::filesystem::path(out_dir) / "pmu_test.json",
                          std::ios::binary);
        if (!out) throw std::runtime_error("cannot write pmu test report");
        out << text;
    }
    std::cout << text;
    return kExitOk;
}

int cmd_calibrate(const std::string& scenario_path, double target_override)
{
    const auto sc = uflsim::harness::Scenario::from_json_file(scenario_path);
    double target = target_override;
    if (!(target > 0.0)) {
        if (!sc.calibration)
            throw std::invalid_argument(
                "scenario has no calibration block; pass --target-rocof");
        target = sc.calibration->target_rocof_hzps;
    }
    const double lost = sc.contingency_mw();
    const auto fleet = sc.surviving_fleet();
    const double factor =
        uflsim::grid::calibrate_inertia(target, lost, fleet, sc.grid_config.f0_hz);
    double hs = 0.0, s = 0.0;
    for (const auto& g : fleet) {
        if (!g.online || g.type == uflsim::grid::PlantType::wind) continue;
        hs += g.inertia_h_s * g.capacity_mva;
        s += g.capacity_mva;
    }
    nlohmann::ordered_json j;
    j["scenario"] = sc.name;
    j["target_rocof_hzps"] = target;
    j["tripped_mw"] = lost;
    j["inertia_factor"] = factor;
    j["surviving_mva"] = s;
    j["h_sys_before_s"] = s > 0.0 ? hs / s : 0.0;
    j["h_sys_after_s"] = s > 0.0 ? factor * hs / s : 0.0;
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"deterministic grid-frequency and load-shedding study runner"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string scheme;
    std::string schemes_csv = "none,f_ls,rocof_a,rocof_b";
    std::string out_dir = "out";
    std::string pmu_mode = "ramp";
    double target_rocof = 0.0;

    auto* sim = app.add_subcommand("simulate", "run one scheme closed-loop");
    sim->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    sim->add_option("--scheme", scheme, "none|f_ls|rocof_a|rocof_b (default: scenario)");
    sim->add_option("--out", out_dir, "output directory");

    auto* cmp = app.add_subcommand("compare", "run several schemes on one scenario");
    cmp->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    cmp->add_option("--schemes", schemes_csv, "comma-separated scheme list");
    cmp->add_option("--out", out_dir, "output directory");

    auto* pmt = app.add_subcommand("pmu-test", "estimator accuracy self-test");
    pmt->add_option("mode", pmu_mode, "ramp|static");
    std::string pmu_out;
    pmt->add_option("--out", pmu_out, "directory for the report (optional)");

    auto* cal = app.add_subcommand("calibrate", "inertia factor for a target ROCOF");
    cal->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    cal->add_option("--target-rocof", target_rocof, "Hz/s (default: scenario value)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitBadInput;
    }

    try {
        if (sim->parsed()) return cmd_simulate(scenario_path, scheme, out_dir);
        if (cmp->parsed()) return cmd_compare(scenario_path, schemes_csv, out_dir);
        if (pmt->parsed()) return cmd_pmu_test(pmu_mode, pmu_out);
        if (cal->parsed()) return cmd_calibrate(scenario_path, target_rocof);
    } catch (const uflsim::harness::ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitBadInput;
}
