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

#ifndef MCMIMO_SAMPLING_HPP
#define MCMIMO_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "mcmimo/channel_stats.hpp"
#include "mcmimo/linalg.hpp"
#include "mcmimo/rng.hpp"

namespace mcmimo {

// Square roots of the effective covariances, built once per scenario.
// Only needed when channels are actually sampled, so kept out of
// ChannelStatistics (asymptotic-only runs skip the eigendecompositions).
struct SamplingModel {
    std::vector<Mat> sqrt_r; // [L][L][K]
};

inline SamplingModel build_sampling_model(const ChannelStatistics &st) {
    SamplingModel sm;
    sm.sqrt_r.resize(st.r.size());
    for (std::size_t i = 0; i < st.r.size(); ++i) sm.sqrt_r[i] = hermitian_sqrt(st.r[i]);
    return sm;
}

// One coherence block: h[(j,l,k)] is the channel from user k of cell l to
// BS j. Local channels are LoS mean plus correlated scatter; inter-cell
// channels are zero-mean correlated scatter.
struct ChannelRealization {
    std::uint64_t trial = 0;
    std::vector<Vec> h; // [L][L][K]

    const Vec &at(const ScenarioConfig &cfg, int j, int l, int k) const {
        return h[cfg.link_index(j, l, k)];
    }
};

inline Vec draw_cnormal_vector(PhiloxStream &stream, int n) {
    Vec z(n);
    for (int i = 0; i < n; ++i) z(i) = stream.next_cnormal();
    return z;
}

inline ChannelRealization sample_channels(const ChannelStatistics &st, const SamplingModel &sm,
                                          std::uint64_t base_seed, std::uint64_t trial) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell, N = cfg.antennas;
    ChannelRealization rlz;
    rlz.trial = trial;
    rlz.h.resize(st.r.size());
    for (int j = 0; j < L; ++j)
        for (int l = 0; l < L; ++l)
            for (int k = 0; k < K; ++k) {
                PhiloxStream s = PhiloxStream::derive(base_seed, StreamTag::channel_draw, trial, j, l, k);
                const int idx = cfg.link_index(j, l, k);
                Vec h = sm.sqrt_r[idx] * draw_cnormal_vector(s, N);
                if (l == j) h += st.hbar_at(j, k);
                rlz.h[idx] = h;
            }
    return rlz;
}

// Despread pilot observation for user index k at BS j: the sum of the
// channels of every same-pilot user plus scaled training noise. Pilot
// sequences are orthogonal within a cell and reused across cells, so the
// per-user despread observation is formed directly.
inline Vec sample_training_observation(const ChannelRealization &rlz, const ScenarioConfig &cfg,
                                       int j, int k, double tau, double rho_tr,
                                       PhiloxStream &stream) {
    const int N = cfg.antennas;
    Vec y = Vec::Zero(N);
    for (int l = 0; l < cfg.cells; ++l) y += rlz.at(cfg, j, l, k);
    const double noise_scale = 1.0 / std::sqrt(tau * rho_tr);
    for (int i = 0; i < N; ++i) y(i) += noise_scale * stream.next_cnormal();
    return y;
}

// All (j,k) observations of one trial, with streams keyed by the trial.
inline std::vector<Vec> sample_all_observations(const ChannelStatistics &st,
                                                const ChannelRealization &rlz,
                                                std::uint64_t base_seed) {
    const ScenarioConfig &cfg = st.cfg;
    std::vector<Vec> obs(static_cast<std::size_t>(cfg.cells) * cfg.users_per_cell);
    for (int j = 0; j < cfg.cells; ++j)
        for (int k = 0; k < cfg.users_per_cell; ++k) {
            PhiloxStream s =
                PhiloxStream::derive(base_seed, StreamTag::training_noise, rlz.trial, j, 0, k);
            obs[cfg.user_index(j, k)] = sample_training_observation(
                rlz, cfg, j, k, static_cast<double>(cfg.pilot_symbols), cfg.rho_tr, s);
        }
    return obs;
}

} // namespace mcmimo

#endif
