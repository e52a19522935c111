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

#ifndef MCMIMO_SCENARIO_HPP
#define MCMIMO_SCENARIO_HPP

#include <cmath>
#include <complex>

#include "mcmimo/config.hpp"
#include "mcmimo/linalg.hpp"
#include "mcmimo/rng.hpp"

namespace mcmimo {

// Exponential spatial correlation for a uniform linear array:
// entry (m,n) = r^|m-n| * exp(i (m-n) theta). Hermitian, unit diagonal,
// positive definite for r in [0, 1).
inline Mat build_exponential_correlation(double r, double theta, int n) {
    if (!(r >= 0.0 && r < 1.0)) throw ConfigError("invalid scenario: r must be in [0, 1)");
    Mat m(n, n);
    for (int row = 0; row < n; ++row) {
        m(row, row) = 1.0;
        for (int col = row + 1; col < n; ++col) {
            const int d = col - row; // row - col = -d
            const double mag = std::pow(r, d);
            const cplx v = mag * std::polar(1.0, -d * theta); // (m-n) = -d for m=row < n=col
            m(row, col) = v;
            m(col, row) = std::conj(v);
        }
    }
    return m;
}

// Uncorrelated fading with independent per-antenna large-scale variations:
// diagonal entries 10^(f/10) with f ~ N(0, sigma_c^2). The unscaled normal
// draws come from the stream, so sweeping sigma_c rescales a fixed draw.
inline Mat build_lognormal_diag_correlation(double sigma_c, int n, PhiloxStream &stream) {
    if (!(sigma_c >= 0.0)) throw ConfigError("invalid scenario: sigma_c must be >= 0");
    Mat m = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double f = sigma_c * stream.next_normal();
        m(i, i) = std::pow(10.0, f / 10.0);
    }
    return m;
}

// Array response of a half-wavelength uniform linear array:
// entry n = exp(-i (n-1) pi sin(theta)), first entry exactly 1.
inline Vec build_los_steering(double theta, int n) {
    Vec z(n);
    const double phase_step = -3.14159265358979323846 * std::sin(theta);
    for (int i = 0; i < n; ++i) z(i) = std::polar(1.0, i * phase_step);
    z(0) = 1.0;
    return z;
}

// Built-in 4-cell, 2-user cell-edge layout. All users of a pilot group sit
// near a common corner: per-group base angle drawn from a 60 degree sector,
// per-user jitter within +/-2 degrees, so same-pilot users in different
// cells arrive at nearly equal angles. Link SNRs (with sigma^2 = 1): -6 dB
// intra-cell; inter-cell links evenly spaced over [-6.3, -11.5] dB in link
// order. Rician factors are uniform on (0, 2]. All draws are keyed by
// base_seed, so the same (config, seed) reproduces the same tables.
inline void apply_default_geometry(ScenarioConfig &cfg) {
    if (cfg.cells != 4 || cfg.users_per_cell != 2)
        throw ConfigError("default geometry supports L=4, K=2 only; use explicit tables otherwise");

    const int L = cfg.cells, K = cfg.users_per_cell;
    cfg.beta.assign(static_cast<std::size_t>(L) * L * K, 0.0);
    cfg.kappa.assign(static_cast<std::size_t>(L) * K, 0.0);
    cfg.theta.assign(static_cast<std::size_t>(L) * L * K, 0.0);

    const double intra_snr_db = -6.0;
    const double inter_hi_db = -6.3;
    const double inter_lo_db = -11.5;
    const int inter_links = (L - 1) * K;

    for (int j = 0; j < L; ++j) {
        int rank = 0;
        for (int l = 0; l < L; ++l) {
            for (int k = 0; k < K; ++k) {
                double snr_db;
                if (l == j) {
                    snr_db = intra_snr_db;
                } else {
                    const double step = (inter_links > 1) ? (inter_hi_db - inter_lo_db) / (inter_links - 1) : 0.0;
                    snr_db = inter_hi_db - rank * step;
                    ++rank;
                }
                cfg.beta[cfg.link_index(j, l, k)] = db_to_linear(snr_db) / cfg.rho_d;
            }
        }
    }

    for (int j = 0; j < L; ++j) {
        for (int k = 0; k < K; ++k) {
            PhiloxStream s = PhiloxStream::derive(cfg.base_seed, StreamTag::rician_factor, 0, j, 0, k);
            cfg.kappa[cfg.user_index(j, k)] = 2.0 * (1.0 - s.next_double()); // uniform on (0, 2]
        }
    }

    // One angle per user, shared by every observing BS (co-located corner).
    for (int k = 0; k < K; ++k) {
        PhiloxStream sb = PhiloxStream::derive(cfg.base_seed, StreamTag::angle_base, 0, 0, 0, k);
        const double base_deg = -30.0 + 60.0 * sb.next_double();
        for (int l = 0; l < L; ++l) {
            PhiloxStream so = PhiloxStream::derive(cfg.base_seed, StreamTag::angle_offset, 0, 0, l, k);
            const double user_deg = base_deg + (-2.0 + 4.0 * so.next_double());
            for (int j = 0; j < L; ++j) cfg.theta[cfg.link_index(j, l, k)] = deg_to_rad(user_deg);
        }
    }
}

// Correlation matrix of link (j,l,k) under the configured model.
inline Mat build_theta_matrix(const ScenarioConfig &cfg, int j, int l, int k) {
    switch (cfg.corr.kind) {
    case CorrelationKind::exponential:
        return build_exponential_correlation(cfg.corr.r, cfg.theta_at(j, l, k), cfg.antennas);
    case CorrelationKind::lognormal_diag: {
        PhiloxStream s = PhiloxStream::derive(cfg.base_seed, StreamTag::array_gain, 0, j, l, k);
        return build_lognormal_diag_correlation(cfg.corr.sigma_c, cfg.antennas, s);
    }
    case CorrelationKind::identity:
        return Mat::Identity(cfg.antennas, cfg.antennas);
    case CorrelationKind::explicit_matrices:
        return cfg.corr.theta[cfg.link_index(j, l, k)];
    }
    throw ConfigError("unknown correlation model");
}

} // namespace mcmimo

#endif
