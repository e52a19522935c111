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

#ifndef MCMIMO_CHANNEL_STATS_HPP
#define MCMIMO_CHANNEL_STATS_HPP

#include <vector>

#include "mcmimo/config.hpp"
#include "mcmimo/linalg.hpp"
#include "mcmimo/scenario.hpp"

namespace mcmimo {

// Effective covariance of the random channel component: beta/(1+kappa) *
// Theta for a local link (the LoS part carries the remaining power), plain
// beta * Theta for an inter-cell link.
inline Mat effective_covariance(double beta, double kappa, bool same_cell, const Mat &theta) {
    const double scale = same_cell ? beta / (1.0 + kappa) : beta;
    return scale * theta;
}

// Deterministic LoS component sqrt(beta*kappa/(1+kappa)) * zbar; the zero
// vector when kappa = 0.
inline Vec los_component(double beta, double kappa, const Vec &zbar) {
    if (kappa == 0.0) return Vec::Zero(zbar.size());
    return std::sqrt(beta * kappa / (1.0 + kappa)) * zbar;
}

// Second-order statistics of every link, frozen once per scenario and then
// shared read-only: the BSs are assumed to know them.
struct ChannelStatistics {
    ScenarioConfig cfg;
    std::vector<Mat> theta; // [L][L][K] spatial correlation
    std::vector<Mat> r;     // [L][L][K] effective covariance of the random part
    std::vector<Vec> hbar;  // [L][K] LoS mean of local channels
    std::vector<Mat> hbar_cell; // [L] N x K aggregate LoS matrix per cell

    int cells() const { return cfg.cells; }
    int users() const { return cfg.users_per_cell; }
    int antennas() const { return cfg.antennas; }

    const Mat &theta_at(int j, int l, int k) const { return theta[cfg.link_index(j, l, k)]; }
    const Mat &r_at(int j, int l, int k) const { return r[cfg.link_index(j, l, k)]; }
    const Vec &hbar_at(int j, int k) const { return hbar[cfg.user_index(j, k)]; }
};

inline ChannelStatistics build_channel_statistics(const ScenarioConfig &cfg) {
    validate(cfg);
    ChannelStatistics st;
    st.cfg = cfg;
    const int L = cfg.cells, K = cfg.users_per_cell, N = cfg.antennas;
    st.theta.resize(static_cast<std::size_t>(L) * L * K);
    st.r.resize(st.theta.size());
    st.hbar.resize(static_cast<std::size_t>(L) * K);
    st.hbar_cell.assign(L, Mat::Zero(N, K));

    for (int j = 0; j < L; ++j)
        for (int l = 0; l < L; ++l)
            for (int k = 0; k < K; ++k) {
                const int idx = cfg.link_index(j, l, k);
                st.theta[idx] = build_theta_matrix(cfg, j, l, k);
                st.r[idx] = effective_covariance(cfg.beta_at(j, l, k), cfg.kappa_at(l, k), l == j,
                                                 st.theta[idx]);
            }

    for (int j = 0; j < L; ++j)
        for (int k = 0; k < K; ++k) {
            const Vec steering = build_los_steering(cfg.theta_at(j, j, k), N);
            st.hbar[cfg.user_index(j, k)] = los_component(cfg.beta_at(j, j, k), cfg.kappa_at(j, k), steering);
            st.hbar_cell[j].col(k) = st.hbar[cfg.user_index(j, k)];
        }
    return st;
}

} // namespace mcmimo

#endif
