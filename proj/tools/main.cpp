// SPDX-License-Identifier: Apache-2.0
//
// Experiment CLI: scenario runs, tradeoff sweeps, beampattern dumps, and
// config validation. Exit codes: 0 success, 2 config error, 3 numeric abort.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "metaopt/harness.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int parallel = 1;
    std::string scale = "desk";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "Scenario config file")
        ->required();
    cmd->add_option("--seed", opts.seed, "Override run.seed")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_option("--out", opts.out_path, "Override output.path");
    cmd->add_option("--parallel", opts.parallel, "Worker count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--scale", opts.scale, "Size preset")
        ->check(CLI::IsMember({"paper", "desk"}));
}

// The desk preset clamps the problem to CI-sized dimensions so paper-scale
// configs stay runnable on a laptop; the paper preset leaves them untouched.
void apply_scale(metaopt::ScenarioConfig& config, const std::string& scale) {
    if (scale != "desk")
        return;
    config.num_tx = std::min<Eigen::Index>(config.num_tx, 16);
    config.num_users = std::min<Eigen::Index>(config.num_users, 8);
    config.num_groups = std::min(config.num_groups, config.num_users);
    config.num_samples = std::min<Eigen::Index>(config.num_samples, 64);
    config.iterations = std::min(config.iterations, 2500);
    config.realizations = std::min(config.realizations, 20);
    if (!config.thresholds.empty())
        config.thresholds.resize(static_cast<std::size_t>(config.num_users),
                                 config.thresholds.back());
}

metaopt::ScenarioConfig load(const CommonOpts& opts) {
    metaopt::ScenarioConfig config = metaopt::load_config(opts.config_path);
    if (opts.seed_set)
        config.seed = opts.seed;
    if (!opts.out_path.empty())
        config.output_path = opts.out_path;
    apply_scale(config, opts.scale);
    config.validate();
    return config;
}

void write_beampattern(const metaopt::BeampatternTable& table,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw metaopt::IoError("cannot open '" + path + "' for writing");
    out << "angle,total";
    for (Eigen::Index s = 0; s < table.per_stream.cols(); ++s)
        out << ",stream_" << s;
    out << "\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf;
    };
    for (std::size_t i = 0; i < table.angles.size(); ++i) {
        const Eigen::Index row = static_cast<Eigen::Index>(i);
        put(table.angles[i]);
        out << ',';
        put(table.total[row]);
        for (Eigen::Index s = 0; s < table.per_stream.cols(); ++s) {
            out << ',';
            put(table.per_stream(row, s));
        }
        out << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Meta-learned wireless optimization experiments"};
    app.require_subcommand(1);

    CommonOpts run_opts, sweep_opts, beam_opts, validate_opts;
    int resolution = 181;

    CLI::App* run_cmd = app.add_subcommand("run", "Run the configured scenario");
    add_common(run_cmd, run_opts);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "ISAC tradeoff sweep over the lambda grid");
    add_common(sweep_cmd, sweep_opts);
    CLI::App* beam_cmd =
        app.add_subcommand("beampattern", "Dump the buffered-precoder beampattern");
    add_common(beam_cmd, beam_opts);
    beam_cmd->add_option("--resolution", resolution, "Angle grid size")
        ->check(CLI::Range(2, 1 << 20));
    CLI::App* validate_cmd =
        app.add_subcommand("validate-config", "Validate and echo a config");
    add_common(validate_cmd, validate_opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            const metaopt::ScenarioConfig config = load(run_opts);
            metaopt::write_csv(metaopt::run_scenario(config, run_opts.parallel),
                               config.output_path);
            std::cout << config.output_path << "\n";
        } else if (sweep_cmd->parsed()) {
            const metaopt::ScenarioConfig config = load(sweep_opts);
            metaopt::write_csv(metaopt::tradeoff_sweep(config, sweep_opts.parallel),
                               config.output_path);
            std::cout << config.output_path << "\n";
        } else if (beam_cmd->parsed()) {
            const metaopt::ScenarioConfig config = load(beam_opts);
            write_beampattern(metaopt::beampattern_dump(config, resolution),
                              config.output_path);
            std::cout << config.output_path << "\n";
        } else if (validate_cmd->parsed()) {
            const metaopt::ScenarioConfig config = load(validate_opts);
            std::cout << metaopt::serialize_config(config);
        }
    } catch (const metaopt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const metaopt::IoError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const metaopt::NonFiniteLossError& e) {
        std::cerr << "numeric abort: " << e.what() << "\n";
        return 3;
    } catch (const metaopt::NonFiniteError& e) {
        std::cerr << "numeric abort: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
