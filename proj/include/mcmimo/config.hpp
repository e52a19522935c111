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

#ifndef MCMIMO_CONFIG_HPP
#define MCMIMO_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mcmimo/errors.hpp"
#include "mcmimo/linalg.hpp"

namespace mcmimo {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double deg_to_rad(double deg) { return deg * (3.14159265358979323846 / 180.0); }

enum class CorrelationKind { exponential, lognormal_diag, identity, explicit_matrices };

struct CorrelationModel {
    CorrelationKind kind = CorrelationKind::exponential;
    double r = 0.5;         // exponential decay, valid in [0, 1)
    double sigma_c = 0.0;   // std deviation (dB) of the per-antenna log-normal gains
    std::vector<Mat> theta; // explicit matrices, indexed like the (j,l,k) link table
};

// Full system parameterization. Angles are radians, powers linear; the file
// loader converts from degrees and dB. beta/theta are (j,l,k) link tables
// flattened with link_index(); kappa is a (j,k) user table.
struct ScenarioConfig {
    int cells = 0;             // L
    int users_per_cell = 0;    // K
    int antennas = 0;          // N
    int coherence_symbols = 0; // T_c
    int pilot_symbols = 0;     // tau
    double rho_tr = 1.0;       // training SNR, linear
    double rho_d = 1.0;        // data SNR, linear
    std::vector<double> beta;  // [L][L][K] large-scale gains, linear
    std::vector<double> kappa; // [L][K] Rician factors
    std::vector<double> theta; // [L][L][K] angles of arrival, radians
    CorrelationModel corr;
    std::uint64_t base_seed = 1;

    int link_index(int j, int l, int k) const { return (j * cells + l) * users_per_cell + k; }
    int user_index(int j, int k) const { return j * users_per_cell + k; }

    double beta_at(int j, int l, int k) const { return beta[link_index(j, l, k)]; }
    double kappa_at(int j, int k) const { return kappa[user_index(j, k)]; }
    double theta_at(int j, int l, int k) const { return theta[link_index(j, l, k)]; }
};

// Checks every invariant; throws ConfigError naming the violated one.
inline void validate(const ScenarioConfig &cfg) {
    const auto fail = [](const std::string &msg) { throw ConfigError("invalid scenario: " + msg); };
    if (cfg.cells < 1) fail("L must be >= 1");
    if (cfg.users_per_cell < 1) fail("K must be >= 1");
    if (cfg.antennas < 1) fail("N must be >= 1");
    if (cfg.pilot_symbols < cfg.users_per_cell) fail("tau < K (orthogonal pilots require tau >= K)");
    if (cfg.coherence_symbols <= cfg.pilot_symbols) fail("T_c must be > tau");
    if (!(cfg.rho_tr > 0.0)) fail("rho_tr must be > 0");
    if (!(cfg.rho_d > 0.0)) fail("rho_d must be > 0");

    const std::size_t links = static_cast<std::size_t>(cfg.cells) * cfg.cells * cfg.users_per_cell;
    const std::size_t users = static_cast<std::size_t>(cfg.cells) * cfg.users_per_cell;
    if (cfg.beta.size() != links) fail("beta table must have L*L*K entries");
    if (cfg.kappa.size() != users) fail("kappa table must have L*K entries");
    if (cfg.theta.size() != links) fail("theta table must have L*L*K entries");
    for (double b : cfg.beta)
        if (!(b > 0.0)) fail("beta must be > 0");
    for (double k : cfg.kappa)
        if (!(k >= 0.0)) fail("kappa must be >= 0");

    switch (cfg.corr.kind) {
    case CorrelationKind::exponential:
        if (!(cfg.corr.r >= 0.0 && cfg.corr.r < 1.0)) fail("r must be in [0, 1)");
        break;
    case CorrelationKind::lognormal_diag:
        if (!(cfg.corr.sigma_c >= 0.0)) fail("sigma_c must be >= 0");
        break;
    case CorrelationKind::identity:
        break;
    case CorrelationKind::explicit_matrices:
        if (cfg.corr.theta.size() != links) fail("explicit correlation needs L*L*K matrices");
        for (const Mat &m : cfg.corr.theta)
            if (m.rows() != cfg.antennas || m.cols() != cfg.antennas)
                fail("explicit correlation matrices must be N x N");
        break;
    }
}

namespace detail {

inline const nlohmann::json &require_key(const nlohmann::json &j, const char *key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError(std::string("missing config key: ") + key);
    return *it;
}

template <typename T> T get_num(const nlohmann::json &j, const char *key) {
    const auto &v = require_key(j, key);
    if (!v.is_number()) throw ConfigError(std::string("config key is not a number: ") + key);
    return v.get<T>();
}

inline Mat parse_complex_matrix(const nlohmann::json &j, int n) {
    Mat m(n, n);
    if (static_cast<int>(j.size()) != n) throw ConfigError("explicit matrix has wrong number of rows");
    for (int r = 0; r < n; ++r) {
        const auto &row = j[r];
        if (static_cast<int>(row.size()) != n) throw ConfigError("explicit matrix has wrong row length");
        for (int c = 0; c < n; ++c) {
            const auto &e = row[c];
            if (e.is_number()) {
                m(r, c) = cplx(e.get<double>(), 0.0);
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
            } else {
                throw ConfigError("explicit matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

} // namespace detail

// Declared in scenario.hpp; the loader fills the geometry tables when the
// file asks for the built-in layout.
void apply_default_geometry(ScenarioConfig &cfg);

// Loads and validates a scenario file. Angles are given in degrees and SNRs
// in dB; both are converted on load. See the README for the schema.
inline ScenarioConfig load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);

    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("malformed scenario file " + path + ": " + e.what());
    }

    ScenarioConfig cfg;
    cfg.cells = detail::get_num<int>(j, "cells");
    cfg.users_per_cell = detail::get_num<int>(j, "users_per_cell");
    cfg.antennas = detail::get_num<int>(j, "antennas");
    cfg.coherence_symbols = detail::get_num<int>(j, "coherence_symbols");
    cfg.pilot_symbols = detail::get_num<int>(j, "pilot_symbols");
    cfg.rho_tr = db_to_linear(detail::get_num<double>(j, "training_snr_db"));
    cfg.rho_d = db_to_linear(detail::get_num<double>(j, "data_snr_db"));
    cfg.base_seed = j.value("base_seed", std::uint64_t{1});

    const auto &corr = detail::require_key(j, "correlation");
    const std::string model = detail::require_key(corr, "model").get<std::string>();
    if (model == "exponential") {
        cfg.corr.kind = CorrelationKind::exponential;
        cfg.corr.r = detail::get_num<double>(corr, "r");
    } else if (model == "lognormal_diag") {
        cfg.corr.kind = CorrelationKind::lognormal_diag;
        cfg.corr.sigma_c = detail::get_num<double>(corr, "sigma_c");
    } else if (model == "identity") {
        cfg.corr.kind = CorrelationKind::identity;
    } else if (model == "explicit") {
        cfg.corr.kind = CorrelationKind::explicit_matrices;
        const auto &mats = detail::require_key(corr, "matrices");
        for (const auto &m : mats) cfg.corr.theta.push_back(detail::parse_complex_matrix(m, cfg.antennas));
    } else {
        throw ConfigError("unknown correlation model: " + model);
    }

    const auto &geo = detail::require_key(j, "geometry");
    if (geo.is_string() && geo.get<std::string>() == "default") {
        if (cfg.cells < 1 || cfg.users_per_cell < 1) throw ConfigError("invalid scenario: L must be >= 1");
        apply_default_geometry(cfg);
    } else if (geo.is_object()) {
        const auto read_table = [&](const char *key, std::size_t want) {
            const auto &t = detail::require_key(geo, key);
            std::vector<double> out;
            for (const auto &row : t)
                for (const auto &col : row) {
                    if (col.is_array())
                        for (const auto &v : col) out.push_back(v.get<double>());
                    else
                        out.push_back(col.get<double>());
                }
            if (out.size() != want)
                throw ConfigError(std::string("geometry table ") + key + " has the wrong shape");
            return out;
        };
        const std::size_t links = static_cast<std::size_t>(cfg.cells) * cfg.cells * cfg.users_per_cell;
        const std::size_t users = static_cast<std::size_t>(cfg.cells) * cfg.users_per_cell;
        cfg.beta = read_table("beta_db", links);
        for (double &b : cfg.beta) b = db_to_linear(b);
        cfg.kappa = read_table("kappa", users);
        cfg.theta = read_table("theta_deg", links);
        for (double &t : cfg.theta) t = deg_to_rad(t);
    } else {
        throw ConfigError("geometry must be \"default\" or an object with explicit tables");
    }

    validate(cfg);
    return cfg;
}

} // namespace mcmimo

#endif
