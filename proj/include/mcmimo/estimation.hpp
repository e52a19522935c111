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

#ifndef MCMIMO_ESTIMATION_HPP
#define MCMIMO_ESTIMATION_HPP

#include <vector>

#include "mcmimo/channel_stats.hpp"
#include "mcmimo/linalg.hpp"

namespace mcmimo {

// Inverse covariance of the despread pilot observation:
// (sum_l R_l + (1/(tau*rho_tr)) I)^-1, Hermitian positive definite.
inline Mat compute_phi(const std::vector<const Mat *> &r_list, double tau, double rho_tr) {
    if (r_list.empty()) throw NumericalError("compute_phi: empty covariance list");
    const auto n = r_list.front()->rows();
    Mat sum = Mat::Zero(n, n);
    for (const Mat *r : r_list) sum += *r;
    sum += (1.0 / (tau * rho_tr)) * Mat::Identity(n, n);
    return hermitian_inverse(sum, "compute_phi");
}

// Covariance of the MMSE estimate: R * Phi * R, symmetrized.
inline Mat estimate_covariance(const Mat &r, const Mat &phi) { return symmetrize(r * phi * r); }

// Estimation-side quantities that depend only on the channel statistics:
// the per-user observation whitener Phi, the estimate covariances, and the
// per-cell matrix (1/rho_d) I + sum_{l,i} (R - Rtilde) that plays the role
// of the conditional error-plus-noise covariance.
struct EstimationModel {
    std::vector<Mat> phi;        // [L][K]
    std::vector<Mat> rtilde;     // [L][L][K]
    std::vector<Mat> zm_inverse; // [L]
};

inline EstimationModel build_estimation_model(const ChannelStatistics &st) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell, N = cfg.antennas;
    EstimationModel em;
    em.phi.resize(static_cast<std::size_t>(L) * K);
    em.rtilde.resize(st.r.size());
    em.zm_inverse.assign(L, Mat::Zero(N, N));

    const double tau = static_cast<double>(cfg.pilot_symbols);
    for (int j = 0; j < L; ++j) {
        Mat err_sum = Mat::Zero(N, N);
        for (int k = 0; k < K; ++k) {
            std::vector<const Mat *> r_list;
            r_list.reserve(L);
            for (int l = 0; l < L; ++l) r_list.push_back(&st.r_at(j, l, k));
            em.phi[cfg.user_index(j, k)] = compute_phi(r_list, tau, cfg.rho_tr);
            for (int l = 0; l < L; ++l) {
                const int idx = cfg.link_index(j, l, k);
                em.rtilde[idx] = estimate_covariance(st.r[idx], em.phi[cfg.user_index(j, k)]);
                err_sum += st.r[idx] - em.rtilde[idx];
            }
        }
        em.zm_inverse[j] =
            symmetrize(err_sum + (1.0 / cfg.rho_d) * Mat::Identity(N, N));
    }
    return em;
}

// MMSE estimate of the channel of the l-th same-pilot user from the
// observation of user k at BS j. The known LoS mean of the local channel is
// removed before whitening and restored afterwards, so every estimate has
// mean delta_{jl} hbar and covariance Rtilde.
inline Vec mmse_estimate(const Vec &observation, int j, int l, int k, const ChannelStatistics &st,
                         const EstimationModel &em) {
    const ScenarioConfig &cfg = st.cfg;
    const Vec centered = observation - st.hbar_at(j, k);
    Vec est = st.r_at(j, l, k) * (em.phi[cfg.user_index(j, k)] * centered);
    if (l == j) est += st.hbar_at(j, k);
    return est;
}

enum class EstimationScope { single_cell, multi_cell };

// Channel estimates of one realization. Multi-cell scope fills every (j,l,k)
// slot; single-cell scope only l == j. Both are computed from the same
// per-(j,k) observation.
struct EstimateSet {
    EstimationScope scope = EstimationScope::multi_cell;
    std::vector<Vec> hhat; // [L][L][K]; empty vectors where out of scope

    const Vec &at(const ScenarioConfig &cfg, int j, int l, int k) const {
        return hhat[cfg.link_index(j, l, k)];
    }
};

inline EstimateSet estimate_all(const ChannelStatistics &st, const EstimationModel &em,
                                const std::vector<Vec> &observations, EstimationScope scope) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell;
    EstimateSet es;
    es.scope = scope;
    es.hhat.resize(st.r.size());
    for (int j = 0; j < L; ++j)
        for (int k = 0; k < K; ++k) {
            const Vec &y = observations[cfg.user_index(j, k)];
            const Vec centered = y - st.hbar_at(j, k);
            const Vec whitened = em.phi[cfg.user_index(j, k)] * centered;
            for (int l = 0; l < L; ++l) {
                if (scope == EstimationScope::single_cell && l != j) continue;
                Vec est = st.r_at(j, l, k) * whitened;
                if (l == j) est += st.hbar_at(j, k);
                es.hhat[cfg.link_index(j, l, k)] = std::move(est);
            }
        }
    return es;
}

} // namespace mcmimo

#endif
