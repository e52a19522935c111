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

#ifndef MCMIMO_SWEEP_HPP
#define MCMIMO_SWEEP_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mcmimo/asymptotics.hpp"
#include "mcmimo/config.hpp"
#include "mcmimo/metrics.hpp"

namespace mcmimo {

enum class SweepAxis { antennas, sigma_c };
enum class RateUnit { nats, bits };

struct SweepSpec {
    SweepAxis axis = SweepAxis::antennas;
    std::vector<double> axis_values;
    std::vector<Detector> detectors{Detector::mrc, Detector::smmse, Detector::mmmse};
    ZsMode zs_mode = ZsMode::cov_design;
    std::optional<RealVec> d_diag;
    std::optional<double> zs_eps;
    std::uint64_t trials = 1000;
    std::optional<std::uint64_t> seed; // overrides the config seed
    RateUnit unit = RateUnit::nats;
    int threads = 0;
    double sinr_cap = 1e12;
};

struct SweepRow {
    double axis = 0.0;
    Detector detector = Detector::mrc;
    int cell = 0;
    int user = 0;
    std::optional<double> rate_mean;
    std::optional<double> rate_ci95;
    std::optional<double> rate_asymptotic;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string warning;
};

inline void validate(const SweepSpec &spec) {
    if (spec.axis_values.empty()) throw ConfigError("sweep axis list must be nonempty");
    if (spec.detectors.empty()) throw ConfigError("detector list must be nonempty");
    for (double v : spec.axis_values) {
        if (spec.axis == SweepAxis::antennas && !(v >= 1.0 && v == std::floor(v)))
            throw ConfigError("antenna counts must be positive integers");
        if (spec.axis == SweepAxis::sigma_c && !(v >= 0.0))
            throw ConfigError("sigma_c values must be >= 0");
    }
}

namespace detail {

inline int detector_order(Detector d) {
    switch (d) {
    case Detector::mrc: return 0;
    case Detector::smmse: return 1;
    case Detector::mmmse: return 2;
    }
    return 3;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

// Runs one sweep point: asymptotic values always, empirical values when
// trials > 0. Returns unsorted rows for that point.
inline std::vector<SweepRow> run_sweep_point(const ScenarioConfig &base_cfg, const SweepSpec &spec,
                                             double axis_value) {
    ScenarioConfig cfg = base_cfg;
    if (spec.axis == SweepAxis::antennas) {
        cfg.antennas = static_cast<int>(axis_value);
        if (cfg.corr.kind == CorrelationKind::lognormal_diag)
            throw ConfigError("antenna sweep expects the exponential (or identity) correlation model");
    } else {
        if (cfg.corr.kind != CorrelationKind::lognormal_diag)
            throw ConfigError("sigma_c sweep requires the lognormal_diag correlation model");
        cfg.corr.sigma_c = axis_value;
    }
    validate(cfg);

    const ChannelStatistics st = build_channel_statistics(cfg);
    const EstimationModel em = build_estimation_model(st);
    const int L = cfg.cells, K = cfg.users_per_cell;
    const double prefactor = rate_prefactor(cfg.pilot_symbols, cfg.coherence_symbols, K);
    const double to_unit = spec.unit == RateUnit::bits ? 1.0 / std::log(2.0) : 1.0;
    const std::uint64_t seed = spec.seed.value_or(cfg.base_seed);

    std::optional<MonteCarloRun> mc;
    if (spec.trials > 0) {
        const SamplingModel sm = build_sampling_model(st);
        MonteCarloOptions opts;
        opts.detectors = spec.detectors;
        opts.zs_mode = spec.zs_mode;
        opts.d_diag = spec.d_diag;
        opts.zs_eps = spec.zs_eps;
        opts.seed = seed;
        opts.threads = spec.threads;
        mc = run_monte_carlo(st, em, sm, spec.trials, opts);
    }

    std::vector<SweepRow> rows;
    for (std::size_t d = 0; d < spec.detectors.size(); ++d) {
        const Detector det = spec.detectors[d];

        // Exact (unregularized) design matrices for the asymptotic formulas.
        std::vector<Mat> zs_exact;
        if (det == Detector::smmse) {
            zs_exact.reserve(L);
            for (int j = 0; j < L; ++j)
                zs_exact.push_back(zs_design_matrix(spec.zs_mode, st, em, j, cfg.rho_d, spec.d_diag));
        }

        for (int j = 0; j < L; ++j)
            for (int k = 0; k < K; ++k) {
                SweepRow row;
                row.axis = axis_value;
                row.detector = det;
                row.cell = j;
                row.user = k;
                row.trials = spec.trials;
                row.seed = seed;

                try {
                    switch (det) {
                    case Detector::mrc: {
                        const MrcAsymptotic a = asymptotic_sinr_mrc(st, em, j, k);
                        row.rate_asymptotic =
                            to_unit * asymptotic_rate(a.gamma, a.infinite, prefactor, spec.sinr_cap);
                        if (a.infinite) row.warning = "infinite_sinr_capped";
                        break;
                    }
                    case Detector::smmse: {
                        const SmmseAsymptotic a = asymptotic_sinr_smmse(st, em, zs_exact[j], j, k);
                        row.rate_asymptotic =
                            to_unit * asymptotic_rate(a.gamma, a.infinite, prefactor, spec.sinr_cap);
                        if (a.infinite) row.warning = "infinite_sinr_capped";
                        break;
                    }
                    case Detector::mmmse: {
                        const MmmseAsymptotic a = asymptotic_sinr_mmmse(st, em, j, k);
                        row.rate_asymptotic =
                            to_unit * asymptotic_rate(a.gamma, false, prefactor, spec.sinr_cap);
                        break;
                    }
                    }
                } catch (const NumericalError &) {
                    const Assumption2Report a2 = check_assumption2(st, j, k);
                    row.rate_asymptotic.reset();
                    row.warning = "covariance_independence_margin=" +
                                  detail::format_double(a2.min_margin) + " asymptotic_unavailable";
                }

                if (mc) {
                    const UserRate &ur = mc->per_detector[d].users[cfg.user_index(j, k)];
                    row.rate_mean = to_unit * ur.rate_mean;
                    row.rate_ci95 = to_unit * ur.rate_ci95;
                }
                rows.push_back(std::move(row));
            }
    }
    return rows;
}

inline std::vector<SweepRow> run_sweep(const ScenarioConfig &cfg, const SweepSpec &spec) {
    validate(spec);
    std::vector<double> axis = spec.axis_values;
    std::sort(axis.begin(), axis.end());
    std::vector<SweepRow> rows;
    for (double v : axis) {
        std::vector<SweepRow> point = run_sweep_point(cfg, spec, v);
        rows.insert(rows.end(), point.begin(), point.end());
    }
    std::sort(rows.begin(), rows.end(), [](const SweepRow &a, const SweepRow &b) {
        if (a.axis != b.axis) return a.axis < b.axis;
        const int da = detail::detector_order(a.detector), db = detail::detector_order(b.detector);
        if (da != db) return da < db;
        if (a.cell != b.cell) return a.cell < b.cell;
        return a.user < b.user;
    });
    return rows;
}

inline std::string csv_header() {
    return "axis,detector,cell,user,rate_mean,rate_ci95,rate_asymptotic,trials,seed,warning";
}

inline std::string to_csv_line(const SweepRow &row) {
    std::ostringstream out;
    out << detail::format_double(row.axis) << ',' << detector_name(row.detector) << ',' << row.cell
        << ',' << row.user << ',';
    if (row.rate_mean) out << detail::format_double(*row.rate_mean);
    out << ',';
    if (row.rate_ci95) out << detail::format_double(*row.rate_ci95);
    out << ',';
    if (row.rate_asymptotic) out << detail::format_double(*row.rate_asymptotic);
    out << ',' << row.trials << ',' << row.seed << ',' << row.warning;
    return out.str();
}

inline void write_csv(const std::vector<SweepRow> &rows, const std::string &path) {
    std::ofstream out(path, std::ios::binary); // fixed newline convention on every platform
    if (!out) throw IoError("cannot open output file: " + path);
    out << csv_header() << '\n';
    for (const SweepRow &row : rows) out << to_csv_line(row) << '\n';
    if (!out) throw IoError("failed writing output file: " + path);
}

} // namespace mcmimo

#endif
