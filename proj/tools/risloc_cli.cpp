#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "risloc/errors.hpp"
#include "risloc/harness/config.hpp"
#include "risloc/harness/sweep.hpp"

using namespace risloc;
using nlohmann::json;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    try {
        return json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("malformed JSON: ") + e.what());
    }
}

json scene_json(const SweepConfig& c, int k, std::size_t trial) {
    const Scenario s = trial_scenario(c, c.snr_db.front(), c.ris_elements.front(), k, trial);
    const ScenarioGeometry g = compute_geometry(s);
    auto pt = [](const Vec2& p) { return json::array({p.x(), p.y()}); };
    json targets = json::array();
    for (int i = 0; i < s.num_targets(); ++i) {
        const SensingPair sp = forward_sensing(s.targets[i], s.layout);
        targets.push_back({{"position", pt(s.targets[i])},
                           {"theta_ris_deg", sp.theta_ris_deg},
                           {"tau_s", sp.tau_s},
                           {"los_to_pr", s.target_visible(i)}});
    }
    return {{"cell", {s.layout.cell_width, s.layout.cell_height}},
            {"ap", pt(s.layout.ap)},
            {"ris", pt(s.layout.ris)},
            {"pr", pt(s.layout.pr)},
            {"ris_boresight_deg", s.layout.ris_boresight_deg},
            {"pr_boresight_deg", s.layout.pr_boresight_deg},
            {"theta_ap_ris_deg", g.theta_ap_ris},
            {"phi_ris_pr_deg", g.phi_ris_pr},
            {"relay_delay_s", g.tau_ap_ris + g.tau_ris_pr},
            {"ap_los_to_pr", s.ap_los},
            {"trial", trial},
            {"targets", targets}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte-Carlo simulator for RIS-aided passive radar localization"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int trials = 0, threads = -1;
    std::uint64_t seed = 0;
    std::vector<std::string> overrides;

    auto* sim = app.add_subcommand("simulate", "run the configured sweep and write the CSV");
    sim->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    auto* out_opt = sim->add_option("--out", out_path, "CSV output path (overrides output.csv)");
    auto* trials_opt = sim->add_option("--trials", trials, "trials per grid point")->check(CLI::PositiveNumber);
    auto* seed_opt = sim->add_option("--seed", seed, "master seed");
    auto* threads_opt = sim->add_option("--threads", threads, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sim->add_option("--override", overrides, "dotted key=value applied to the config")->take_all();

    auto* val = app.add_subcommand("validate", "check a config file");
    val->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    val->add_option("--override", overrides, "dotted key=value applied to the config")->take_all();

    int scene_k = -1;
    std::size_t scene_trial = 0;
    bool render = false;
    auto* scn = app.add_subcommand("scene", "draw one random scene");
    scn->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    scn->add_flag("--render", render, "emit the scene as JSON");
    scn->add_option("--targets", scene_k, "number of targets (default: first K of the sweep)");
    scn->add_option("--trial", scene_trial, "trial index of the scene");
    scn->add_option("--override", overrides, "dotted key=value applied to the config")->take_all();

    CLI11_PARSE(app, argc, argv);

    try {
        json j = read_json(config_path);
        for (const std::string& o : overrides) apply_override(j, o);
        SweepConfig config = parse_config(j);
        if (*out_opt) config.output_csv = out_path;
        if (*trials_opt) config.trials = trials;
        if (*seed_opt) config.master_seed = seed;
        if (*threads_opt) config.threads = threads;
        config.validate();

        if (*val) {
            std::cout << "config OK: " << config.snr_db.size() * config.ris_elements.size() *
                                              config.target_counts.size()
                      << " grid points x " << config.trials << " trials\n";
            return 0;
        }
        if (*scn) {
            const int k = scene_k >= 0 ? scene_k : config.target_counts.front();
            const json s = scene_json(config, k, scene_trial);
            if (render) {
                std::cout << s.dump(2) << '\n';
            } else {
                std::cout << "scene with " << k << " targets:\n";
                for (const auto& t : s["targets"])
                    std::cout << "  (" << t["position"][0] << ", " << t["position"][1]
                              << ")  theta=" << t["theta_ris_deg"] << " deg\n";
            }
            return 0;
        }

        std::cerr << csv_header() << '\n';
        SweepHooks hooks;
        hooks.on_row = [](const ResultRow& r) { std::cerr << format_csv_row(r) << std::endl; };
        run_sweep(config, hooks);
        if (!config.output_csv.empty())
            std::cerr << "wrote " << config.output_csv << " and " << sidecar_path(config.output_csv) << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
