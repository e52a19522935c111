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

#ifndef MCMIMO_DETECTION_HPP
#define MCMIMO_DETECTION_HPP

#include <optional>
#include <string>
#include <vector>

#include "mcmimo/channel_stats.hpp"
#include "mcmimo/estimation.hpp"
#include "mcmimo/linalg.hpp"

namespace mcmimo {

enum class Detector { mrc, smmse, mmmse };

inline const char *detector_name(Detector d) {
    switch (d) {
    case Detector::mrc: return "mrc";
    case Detector::smmse: return "smmse";
    case Detector::mmmse: return "mmmse";
    }
    return "?";
}

// Regularization menu for the single-cell MMSE combiner. The combiner
// consumes (Z^S)^-1 = (1/rho_d) I + A with A Hermitian PSD:
//   plain:         A = 0, i.e. Z^S = rho_d I
//   cov_design:    A = sum_i (R_jji - Rtilde_jji) + sum_{l!=j, i} R_jli
//   los_projector: Z^S = Hbar (Hbar^H Hbar)^-1 D (Hbar^H Hbar)^-1 Hbar^H,
//                  which whitens onto the LoS subspace
enum class ZsMode { plain, cov_design, los_projector };

inline const char *zs_mode_name(ZsMode m) {
    switch (m) {
    case ZsMode::plain: return "plain";
    case ZsMode::cov_design: return "cov_design";
    case ZsMode::los_projector: return "los_projector";
    }
    return "?";
}

// The exact Z^S design matrix of cell j (eps = 0 allowed; the projector is
// then rank K and must not be inverted).
inline Mat zs_design_matrix(ZsMode mode, const ChannelStatistics &st, const EstimationModel &em,
                            int j, double rho_d, const std::optional<RealVec> &d_diag = {},
                            double eps = 0.0) {
    const ScenarioConfig &cfg = st.cfg;
    const int N = cfg.antennas, K = cfg.users_per_cell, L = cfg.cells;
    switch (mode) {
    case ZsMode::plain:
        return rho_d * Mat::Identity(N, N);
    case ZsMode::cov_design: {
        Mat a = Mat::Zero(N, N);
        for (int i = 0; i < K; ++i) {
            const int idx = cfg.link_index(j, j, i);
            a += st.r[idx] - em.rtilde[idx];
        }
        for (int l = 0; l < L; ++l) {
            if (l == j) continue;
            for (int i = 0; i < K; ++i) a += st.r_at(j, l, i);
        }
        Mat zs_inv = symmetrize(a + (1.0 / rho_d) * Mat::Identity(N, N));
        return hermitian_inverse(zs_inv, "zs_design_matrix(cov_design)");
    }
    case ZsMode::los_projector: {
        const Mat &hb = st.hbar_cell[j];
        Mat gram = symmetrize(hb.adjoint() * hb); // K x K
        Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
        const double lmax = std::max(eig.eigenvalues().maxCoeff(), 0.0);
        if (eig.eigenvalues().minCoeff() <= 1e-12 * std::max(1.0, lmax)) {
            // Identify what broke: a zero column (no LoS) or two aligned columns.
            std::string msg = "los_projector: LoS matrix of cell " + std::to_string(j) +
                              " is rank-deficient";
            for (int k = 0; k < K; ++k)
                if (hb.col(k).norm() == 0.0) msg += "; user " + std::to_string(k) + " has no LoS component";
            for (int a = 0; a < K; ++a)
                for (int b = a + 1; b < K; ++b) {
                    const double na = hb.col(a).norm(), nb_ = hb.col(b).norm();
                    if (na > 0 && nb_ > 0 &&
                        std::abs(std::abs(cplx(hb.col(a).adjoint() * hb.col(b))) / (na * nb_) - 1.0) < 1e-9)
                        msg += "; users " + std::to_string(a) + " and " + std::to_string(b) +
                               " have colliding steering vectors";
                }
            throw NumericalError(msg);
        }
        Mat d = Mat::Identity(K, K);
        if (d_diag) {
            if (d_diag->size() != K)
                throw ConfigError("los_projector: D diagonal must have K entries");
            d = d_diag->cast<cplx>().asDiagonal();
        }
        HpdSolver gram_solver(gram, "los_projector gram");
        const Mat ginv_h = gram_solver.solve(Mat(hb.adjoint())); // (Hbar^H Hbar)^-1 Hbar^H
        Mat zs = symmetrize(ginv_h.adjoint() * d * ginv_h);
        if (eps > 0.0) zs += eps * Mat::Identity(N, N);
        return zs;
    }
    }
    throw ConfigError("unknown ZsMode");
}

// Z^S and its inverse, consistent to solver accuracy. The projector design
// is rank-deficient, so a ridge eps (default 1e-6 * rho_d) is added before
// inversion; asymptotic evaluations use the exact eps = 0 matrix instead.
struct ZsPair {
    Mat z;
    Mat z_inv;
};

inline ZsPair build_zs(ZsMode mode, const ChannelStatistics &st, const EstimationModel &em, int j,
                       double rho_d, const std::optional<RealVec> &d_diag = {},
                       std::optional<double> eps = {}) {
    ZsPair p;
    switch (mode) {
    case ZsMode::plain:
        p.z = rho_d * Mat::Identity(st.antennas(), st.antennas());
        p.z_inv = (1.0 / rho_d) * Mat::Identity(st.antennas(), st.antennas());
        return p;
    case ZsMode::cov_design:
        p.z = zs_design_matrix(mode, st, em, j, rho_d, d_diag);
        p.z_inv = hermitian_inverse(p.z, "build_zs(cov_design)");
        return p;
    case ZsMode::los_projector: {
        const double e = eps.value_or(1e-6 * rho_d);
        if (!(e > 0.0)) throw ConfigError("los_projector: eps must be > 0 for inversion");
        p.z = zs_design_matrix(mode, st, em, j, rho_d, d_diag, e);
        p.z_inv = hermitian_inverse(p.z, "build_zs(los_projector)");
        return p;
    }
    }
    throw ConfigError("unknown ZsMode");
}

// Matched filter: the local channel estimate itself.
inline Vec mrc_combiner(const EstimateSet &es, const ScenarioConfig &cfg, int j, int k) {
    return es.at(cfg, j, j, k);
}

// Shared solve g = system^-1 rhs for the regularized combiners.
inline Vec combiner_solve(const Mat &system, const Vec &rhs) {
    HpdSolver solver(system, "combiner_solve");
    return solver.solve(rhs);
}

// Gram matrix of the local estimates: sum_i hhat_jji hhat_jji^H.
inline Mat single_cell_gram(const EstimateSet &es, const ScenarioConfig &cfg, int j) {
    Mat g = Mat::Zero(cfg.antennas, cfg.antennas);
    for (int i = 0; i < cfg.users_per_cell; ++i) {
        const Vec &h = es.at(cfg, j, j, i);
        g.noalias() += h * h.adjoint();
    }
    return g;
}

// Gram matrix of all estimates at BS j: sum_{l,i} hhat_jli hhat_jli^H.
inline Mat multi_cell_gram(const EstimateSet &es, const ScenarioConfig &cfg, int j) {
    Mat g = Mat::Zero(cfg.antennas, cfg.antennas);
    for (int l = 0; l < cfg.cells; ++l)
        for (int i = 0; i < cfg.users_per_cell; ++i) {
            const Vec &h = es.at(cfg, j, l, i);
            g.noalias() += h * h.adjoint();
        }
    return g;
}

// Single-cell MMSE: (sum_i hhat hhat^H + (Z^S)^-1)^-1 hhat_jjk.
inline Vec smmse_combiner(const EstimateSet &es, const ScenarioConfig &cfg, const Mat &zs_inverse,
                          int j, int k) {
    return combiner_solve(single_cell_gram(es, cfg, j) + zs_inverse, es.at(cfg, j, j, k));
}

// Multi-cell MMSE: (sum_{l,i} hhat hhat^H + (Z^M)^-1)^-1 hhat_jjk, the
// maximizer of the conditional SINR quotient.
inline Vec mmmse_combiner(const EstimateSet &es, const ChannelStatistics &st,
                          const EstimationModel &em, int j, int k) {
    if (es.scope != EstimationScope::multi_cell)
        throw NumericalError("mmmse_combiner requires multi-cell estimates");
    const ScenarioConfig &cfg = st.cfg;
    return combiner_solve(multi_cell_gram(es, cfg, j) + em.zm_inverse[j], es.at(cfg, j, j, k));
}

// All combiners of one detector for one realization. The per-cell system
// matrix is factorized once and reused across the K right-hand sides.
struct CombinerSet {
    Detector tag = Detector::mrc;
    std::vector<Vec> g; // [L][K]
};

inline CombinerSet build_combiners(Detector det, const EstimateSet &es, const ChannelStatistics &st,
                                   const EstimationModel &em, const std::vector<ZsPair> &zs_per_cell) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell;
    CombinerSet cs;
    cs.tag = det;
    cs.g.resize(static_cast<std::size_t>(L) * K);
    for (int j = 0; j < L; ++j) {
        switch (det) {
        case Detector::mrc:
            for (int k = 0; k < K; ++k) cs.g[cfg.user_index(j, k)] = es.at(cfg, j, j, k);
            break;
        case Detector::smmse: {
            HpdSolver solver(single_cell_gram(es, cfg, j) + zs_per_cell[j].z_inv, "smmse system");
            for (int k = 0; k < K; ++k)
                cs.g[cfg.user_index(j, k)] = solver.solve(es.at(cfg, j, j, k));
            break;
        }
        case Detector::mmmse: {
            if (es.scope != EstimationScope::multi_cell)
                throw NumericalError("mmmse combiners require multi-cell estimates");
            HpdSolver solver(multi_cell_gram(es, cfg, j) + em.zm_inverse[j], "mmmse system");
            for (int k = 0; k < K; ++k)
                cs.g[cfg.user_index(j, k)] = solver.solve(es.at(cfg, j, j, k));
            break;
        }
        }
    }
    return cs;
}

} // namespace mcmimo

#endif
