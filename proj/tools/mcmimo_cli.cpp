// SPDX-License-Identifier: Apache-2.0
//
// mcmimo - multi-cell massive MIMO uplink simulation library
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// Command-line front end: sweeps over the antenna count or the array-gain
// spread, runs the Monte Carlo engine and the closed-form approximations,
// and emits one CSV row per (axis, detector, cell, user).

#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcmimo/mcmimo.hpp"

namespace {

using namespace mcmimo;

std::vector<double> parse_value_list(const std::string &text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(item, &pos);
            if (pos != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception &) {
            throw ConfigError("cannot parse sweep value: " + item);
        }
    }
    return out;
}

void apply_sweep_argument(SweepSpec &spec, const std::string &sweep_arg, const ScenarioConfig &cfg) {
    if (!sweep_arg.empty()) {
        if (sweep_arg.rfind("n=", 0) == 0) {
            spec.axis = SweepAxis::antennas;
            spec.axis_values = parse_value_list(sweep_arg.substr(2));
        } else if (sweep_arg.rfind("sigma=", 0) == 0) {
            spec.axis = SweepAxis::sigma_c;
            spec.axis_values = parse_value_list(sweep_arg.substr(6));
        } else {
            throw ConfigError("--sweep expects n=... or sigma=...");
        }
        return;
    }
    // Defaults per correlation model.
    if (cfg.corr.kind == CorrelationKind::lognormal_diag) {
        spec.axis = SweepAxis::sigma_c;
        spec.axis_values = {0, 1, 2, 4, 6, 8};
    } else {
        spec.axis = SweepAxis::antennas;
        spec.axis_values = {32, 64, 128, 256, 512};
    }
}

std::vector<Detector> parse_detectors(const std::string &text) {
    std::vector<Detector> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "mrc") out.push_back(Detector::mrc);
        else if (item == "smmse") out.push_back(Detector::smmse);
        else if (item == "mmmse") out.push_back(Detector::mmmse);
        else throw ConfigError("unknown detector: " + item + " (expected mrc, smmse, mmmse)");
    }
    if (out.empty()) throw ConfigError("detector list must be nonempty");
    return out;
}

ZsMode parse_zs_mode(const std::string &text) {
    if (text == "plain") return ZsMode::plain;
    if (text == "cov_design") return ZsMode::cov_design;
    if (text == "los_projector") return ZsMode::los_projector;
    throw ConfigError("unknown zs-mode: " + text);
}

struct CommonArgs {
    std::string config_path;
    std::string sweep;
    std::string detectors = "mrc,smmse,mmmse";
    std::string zs_mode = "cov_design";
    std::string unit = "nats";
    std::string out_path = "sweep.csv";
    std::vector<double> d_diag;
    double zs_eps = 0.0;
    std::uint64_t trials = 1000;
    std::int64_t seed = -1;
    int threads = 0;
    double cap = 1e12;
};

void add_common_options(CLI::App *cmd, CommonArgs &args, bool with_trials) {
    cmd->add_option("--config", args.config_path, "scenario file (JSON)")->required();
    cmd->add_option("--sweep", args.sweep, "sweep axis: n=32,64,... or sigma=0,1,...");
    cmd->add_option("--detectors", args.detectors, "comma list of mrc,smmse,mmmse");
    cmd->add_option("--zs-mode", args.zs_mode, "smmse design: plain|cov_design|los_projector");
    cmd->add_option("--zs-eps", args.zs_eps, "ridge added to the los_projector design before inversion");
    cmd->add_option("--d-diag", args.d_diag, "los_projector D diagonal entries (K values)");
    if (with_trials) cmd->add_option("--trials", args.trials, "Monte Carlo trials per sweep point");
    cmd->add_option("--seed", args.seed, "override the config base seed");
    cmd->add_option("--unit", args.unit, "rate unit: nats|bits");
    cmd->add_option("--out", args.out_path, "output CSV path");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
    cmd->add_option("--cap", args.cap, "SINR cap substituted for flagged infinite values");
}

SweepSpec build_spec(const CommonArgs &args, const ScenarioConfig &cfg, std::uint64_t trials) {
    SweepSpec spec;
    apply_sweep_argument(spec, args.sweep, cfg);
    spec.detectors = parse_detectors(args.detectors);
    spec.zs_mode = parse_zs_mode(args.zs_mode);
    if (!args.d_diag.empty()) {
        RealVec d(static_cast<Eigen::Index>(args.d_diag.size()));
        for (std::size_t i = 0; i < args.d_diag.size(); ++i) d(static_cast<Eigen::Index>(i)) = args.d_diag[i];
        spec.d_diag = d;
    }
    if (args.zs_eps > 0.0) spec.zs_eps = args.zs_eps;
    spec.trials = trials;
    if (args.seed >= 0) spec.seed = static_cast<std::uint64_t>(args.seed);
    if (args.unit == "nats") spec.unit = RateUnit::nats;
    else if (args.unit == "bits") spec.unit = RateUnit::bits;
    else throw ConfigError("unknown unit: " + args.unit);
    spec.threads = args.threads;
    spec.sinr_cap = args.cap;
    return spec;
}

int run_sweep_command(const CommonArgs &args, bool asymptotic_only,
                      const std::string &dump_stats_path) {
    const ScenarioConfig cfg = load_scenario(args.config_path);
    const SweepSpec spec = build_spec(args, cfg, asymptotic_only ? 0 : args.trials);

    if (!dump_stats_path.empty()) {
        ScenarioConfig point = cfg;
        if (spec.axis == SweepAxis::antennas) point.antennas = static_cast<int>(spec.axis_values.front());
        else point.corr.sigma_c = spec.axis_values.front();
        const ChannelStatistics st = build_channel_statistics(point);
        const EstimationModel em = build_estimation_model(st);
        dump_statistics_json(st, em, dump_stats_path);
    }

    const std::vector<SweepRow> rows = run_sweep(cfg, spec);
    write_csv(rows, args.out_path);
    std::cout << "wrote " << rows.size() << " rows to " << args.out_path << "\n";
    return 0;
}

int run_check_assumption2(const std::string &config_path, int n_override, double sigma_override,
                          const std::string &out_path) {
    ScenarioConfig cfg = load_scenario(config_path);
    if (n_override > 0) cfg.antennas = n_override;
    if (sigma_override >= 0.0) {
        if (cfg.corr.kind != CorrelationKind::lognormal_diag)
            throw ConfigError("--sigma override requires the lognormal_diag correlation model");
        cfg.corr.sigma_c = sigma_override;
    }
    validate(cfg);
    const ChannelStatistics st = build_channel_statistics(cfg);

    std::ostringstream out;
    out << "cell,user,min_margin,margins\n";
    for (int j = 0; j < cfg.cells; ++j)
        for (int k = 0; k < cfg.users_per_cell; ++k) {
            const Assumption2Report rep = check_assumption2(st, j, k);
            out << j << ',' << k << ',';
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.12g", rep.min_margin);
            out << buf << ',';
            for (std::size_t l = 0; l < rep.margin.size(); ++l) {
                std::snprintf(buf, sizeof(buf), "%.12g", rep.margin[l]);
                out << (l ? ";" : "") << buf;
            }
            out << '\n';
        }
    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw IoError("cannot open output file: " + out_path);
        f << out.str();
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"multi-cell massive MIMO uplink simulator: empirical and closed-form "
                 "large-antenna rates for MRC, single-cell MMSE and multi-cell MMSE combining"};
    app.require_subcommand(1);

    CommonArgs sim_args, ana_args;
    std::string dump_stats_path;

    CLI::App *sim = app.add_subcommand("simulate", "Monte Carlo sweep plus asymptotic values");
    add_common_options(sim, sim_args, /*with_trials=*/true);

    CLI::App *ana = app.add_subcommand("analyze", "asymptotic values only (trials = 0)");
    add_common_options(ana, ana_args, /*with_trials=*/false);
    ana->add_option("--dump-stats", dump_stats_path,
                    "write the second-order statistics of the first sweep point as JSON");

    std::string chk_config, chk_out;
    int chk_n = -1;
    double chk_sigma = -1.0;
    CLI::App *chk = app.add_subcommand(
        "check-assumption2", "linear-independence margins of the per-user covariance families");
    chk->add_option("--config", chk_config, "scenario file (JSON)")->required();
    chk->add_option("--n", chk_n, "override the antenna count");
    chk->add_option("--sigma", chk_sigma, "override sigma_c (lognormal_diag model)");
    chk->add_option("--out", chk_out, "output CSV path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sim->parsed()) return run_sweep_command(sim_args, /*asymptotic_only=*/false, "");
        if (ana->parsed()) return run_sweep_command(ana_args, /*asymptotic_only=*/true, dump_stats_path);
        if (chk->parsed()) return run_check_assumption2(chk_config, chk_n, chk_sigma, chk_out);
    } catch (const mcmimo::ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const mcmimo::NumericalError &e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const mcmimo::IoError &e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
