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
// Closed-form large-antenna SINR approximations for the three combiners,
// plus the linear-independence margin that the multi-cell form requires.
// Everything here is a pure function of the frozen channel statistics; the
// Monte Carlo path never feeds back into these values, which is what makes
// the empirical-vs-asymptotic comparison a meaningful test.

#ifndef MCMIMO_ASYMPTOTICS_HPP
#define MCMIMO_ASYMPTOTICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "mcmimo/channel_stats.hpp"
#include "mcmimo/detection.hpp"
#include "mcmimo/estimation.hpp"
#include "mcmimo/metrics.hpp"

namespace mcmimo {

// (1/N) tr(A B) without forming the product: sum over A^T elementwise B.
inline cplx scaled_product_trace(const Mat &a, const Mat &b) {
    return a.transpose().cwiseProduct(b).sum() / static_cast<double>(a.rows());
}

// Cross coefficient (1/N) tr(R_a Phi R_b Z); the building block of every
// deterministic interference term. Complex in general, with
// coeff(a,b) = conj(coeff(b,a)).
inline cplx trace_coefficient(const Mat &r_a, const Mat &phi, const Mat &r_b, const Mat &z) {
    const Mat left = r_a * phi;
    const Mat right = r_b * z;
    return scaled_product_trace(left, right);
}

// (1/N) tr(R_a Phi R_b).
inline cplx trace_coefficient(const Mat &r_a, const Mat &phi, const Mat &r_b) {
    const Mat left = r_a * phi;
    return scaled_product_trace(left, r_b);
}

// All coefficients (1/N) tr(R_{jum} Phi_{jm} R_{jvm} Z) of user m at BS j
// as an L x L matrix; the one-sided products are formed once per cell pair.
inline Eigen::MatrixXcd cross_coefficient_matrix(const ChannelStatistics &st,
                                                 const EstimationModel &em, const Mat &z, int j,
                                                 int m) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells;
    const Mat &phi = em.phi[cfg.user_index(j, m)];
    std::vector<Mat> left(L), right(L);
    for (int l = 0; l < L; ++l) {
        left[l] = st.r_at(j, l, m) * phi;
        right[l] = st.r_at(j, l, m) * z;
    }
    Eigen::MatrixXcd beta(L, L);
    for (int u = 0; u < L; ++u)
        for (int v = 0; v < L; ++v) beta(u, v) = scaled_product_trace(left[u], right[v]);
    return beta;
}

struct MrcAsymptotic {
    double gamma = 0.0;
    bool infinite = false;      // empty interference denominator
    double signal = 0.0;        // squared numerator
    double los_intra = 0.0;     // LoS-induced intra-cell interference
    double pilot_contamination = 0.0;
};

// Large-N SINR of the matched filter:
//   ((1/N) tr Rtilde_jjk + (1/N)|hbar_jk|^2)^2 /
//   ( (1/N^2) sum_{i!=k} |hbar_jk^H hbar_ji|^2
//     + sum_{l!=j} |(1/N) tr(R_jjk Phi_jk R_jlk)|^2 )
inline MrcAsymptotic asymptotic_sinr_mrc(const ChannelStatistics &st, const EstimationModel &em,
                                         int j, int k, bool favorable_propagation = false) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell;
    const double n = cfg.antennas;
    MrcAsymptotic out;

    const int jj = cfg.link_index(j, j, k);
    const double tr_rtilde = std::real(em.rtilde[jj].trace()) / n;
    const double los_power = st.hbar_at(j, k).squaredNorm() / n;
    out.signal = (tr_rtilde + los_power) * (tr_rtilde + los_power);

    if (!favorable_propagation) {
        for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            out.los_intra += std::norm(cplx(st.hbar_at(j, k).adjoint() * st.hbar_at(j, i))) / (n * n);
        }
    }
    const Mat &phi = em.phi[cfg.user_index(j, k)];
    for (int l = 0; l < L; ++l) {
        if (l == j) continue;
        out.pilot_contamination +=
            std::norm(trace_coefficient(st.r_at(j, j, k), phi, st.r_at(j, l, k)));
    }

    const double den = out.los_intra + out.pilot_contamination;
    if (den <= 0.0) {
        out.infinite = true;
        out.gamma = std::numeric_limits<double>::infinity();
    } else {
        out.gamma = out.signal / den;
    }
    return out;
}

// Matched-filter limit under favorable propagation (vanishing LoS overlap):
// the LoS intra-cell term is dropped.
inline MrcAsymptotic asymptotic_sinr_mrc_favorable(const ChannelStatistics &st,
                                                   const EstimationModel &em, int j, int k) {
    return asymptotic_sinr_mrc(st, em, j, k, /*favorable_propagation=*/true);
}

struct SmmseAsymptotic {
    double gamma = 0.0;
    bool infinite = false;   // single cell: no inter-cell interference terms
    Mat q;                   // K x K combining response matrix
    double pilot_term = 0.0;
    double uncorr_term = 0.0;
};

// Large-N SINR of the single-cell MMSE combiner with design matrix zs
// (the exact design matrix; the rank-deficient LoS projector is allowed).
// With beta[i][l] = (1/N) tr(R_jli Phi_ji R_jji Z^S) and
// Q = ((1/N) Hbar^H Z^S Hbar + diag{beta[i][j]})^-1:
//   gamma = 1 / ( sum_{l!=j} |Q_kk beta[k][l]|^2
//                 + sum_{l!=j} sum_{i!=k} |Q_ki beta[i][l]|^2 )
inline SmmseAsymptotic asymptotic_sinr_smmse(const ChannelStatistics &st, const EstimationModel &em,
                                             const Mat &zs, int j, int k) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell;
    const double n = cfg.antennas;
    SmmseAsymptotic out;

    Eigen::MatrixXcd beta(K, L);
    for (int i = 0; i < K; ++i) {
        const Mat &phi = em.phi[cfg.user_index(j, i)];
        const Mat right = st.r_at(j, j, i) * zs;
        for (int l = 0; l < L; ++l)
            beta(i, l) = scaled_product_trace(Mat(st.r_at(j, l, i) * phi), right);
    }

    Mat q_arg = symmetrize(st.hbar_cell[j].adjoint() * zs * st.hbar_cell[j]) / n;
    for (int i = 0; i < K; ++i) q_arg(i, i) += std::real(beta(i, j));
    try {
        out.q = hermitian_inverse(q_arg, "smmse Q");
    } catch (const NumericalError &) {
        throw NumericalError("asymptotic_sinr_smmse: singular combining-response matrix in cell " +
                             std::to_string(j));
    }

    for (int l = 0; l < L; ++l) {
        if (l == j) continue;
        out.pilot_term += std::norm(out.q(k, k) * beta(k, l));
        for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            out.uncorr_term += std::norm(out.q(k, i) * beta(i, l));
        }
    }

    const double den = out.pilot_term + out.uncorr_term;
    if (den <= 0.0) {
        out.infinite = true;
        out.gamma = std::numeric_limits<double>::infinity();
    } else {
        out.gamma = 1.0 / den;
    }
    return out;
}

// Finite-N refinement of the numerator: |1 - (1/N) Q_kk|^2 instead of the
// limiting constant 1. Diagnostic only; converges to the plain form.
inline double smmse_signal_refinement(const SmmseAsymptotic &asym, int n, int k) {
    return std::norm(1.0 - asym.q(k, k) / static_cast<double>(n));
}

struct Assumption2Report {
    std::vector<double> margin; // per reference cell l'
    double min_margin = 0.0;
};

// Linear-independence margin of the covariance family {R_jlk}_l: for each
// l', the squared Frobenius residual (scaled by 1/N) of projecting R_jl'k
// onto the span of the other cells' matrices under the trace inner
// product. A zero margin means some nontrivial combination with unit
// coefficient at l' vanishes, and the multi-cell limit below degenerates.
inline Assumption2Report check_assumption2(const ChannelStatistics &st, int j, int k) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells;
    const double n = cfg.antennas;
    Assumption2Report rep;
    rep.margin.resize(L);

    std::vector<const Mat *> r(L);
    for (int l = 0; l < L; ++l) r[l] = &st.r_at(j, l, k);
    // Trace inner products of Hermitian matrices are real.
    Eigen::MatrixXd gram(L, L);
    for (int a = 0; a < L; ++a)
        for (int b = a; b < L; ++b) {
            const double v = std::real(((*r[a]) * (*r[b])).trace());
            gram(a, b) = v;
            gram(b, a) = v;
        }

    for (int lp = 0; lp < L; ++lp) {
        if (L == 1) {
            rep.margin[lp] = gram(0, 0) / n;
            continue;
        }
        Eigen::MatrixXd g_others(L - 1, L - 1);
        Eigen::VectorXd v(L - 1);
        int ai = 0;
        for (int a = 0; a < L; ++a) {
            if (a == lp) continue;
            int bi = 0;
            for (int b = 0; b < L; ++b) {
                if (b == lp) continue;
                g_others(ai, bi) = gram(a, b);
                ++bi;
            }
            v(ai) = gram(a, lp);
            ++ai;
        }
        // Least-squares projection with a pseudo-inverse: the interferer set
        // itself may be rank-deficient.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g_others);
        const Eigen::VectorXd lam = eig.eigenvalues();
        const double lmax = std::max(lam.cwiseAbs().maxCoeff(), 0.0);
        Eigen::VectorXd c = Eigen::VectorXd::Zero(L - 1);
        const Eigen::VectorXd w = eig.eigenvectors().transpose() * v;
        for (int i = 0; i < L - 1; ++i)
            if (lam(i) > 1e-14 * std::max(1.0, lmax)) c += (w(i) / lam(i)) * eig.eigenvectors().col(i);
        const double residual = gram(lp, lp) - v.dot(c);
        rep.margin[lp] = std::max(residual, 0.0) / n;
    }
    rep.min_margin = *std::min_element(rep.margin.begin(), rep.margin.end());
    return rep;
}

struct MmmseAsymptotic {
    double gamma_over_n = 0.0;
    double gamma = 0.0;
    double t_term = 0.0;   // contribution of the scattered components
    double los_term = 0.0; // contribution of the LoS component
};

struct MmmseAsymptoticOptions {
    // Minimum acceptable independence margin. Deliberately tiny: cell-edge
    // layouts with near-equal angles produce genuinely independent but
    // badly conditioned families (margins around 1e-13), and the limit
    // formula stays meaningful there because the LoS term dominates. Only
    // exact degeneracy (margins at rounding level) is refused.
    double independence_threshold = 1e-14;
    double condition_limit = 1e16; // cap on cond(T)
};

// Large-N SINR of the multi-cell MMSE combiner, scaled by 1/N. With
// Z^M = ((1/rho_d) I + sum (R - Rtilde))^-1 and
// beta(n,m) = (1/N) tr(R_jnk Phi_jk R_jmk Z^M):
//   T: L x L Hermitian matrix of the beta values with cell j ordered first,
//   D: L(K-1) square block matrix, block (u,v) = diag{beta_m(u,v)}_{m != k},
//   Qbar = ((1/N) HbarPad D^-1 HbarPad^H + (Z^M)^-1)^-1,
//   gamma/N = 1/[T^-1]_11 + (1/N) hbar^H Qbar hbar,
// where HbarPad holds the LoS vectors of cell j's other users in cell j's
// column block and zero columns elsewhere. Valid only when the covariance
// family is linearly independent across cells; refuses otherwise.
inline MmmseAsymptotic asymptotic_sinr_mmmse(const ChannelStatistics &st, const EstimationModel &em,
                                             int j, int k,
                                             const MmmseAsymptoticOptions &opts = {}) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell, N = cfg.antennas;
    const double n = N;

    const Assumption2Report a2 = check_assumption2(st, j, k);
    if (a2.min_margin <= opts.independence_threshold) {
        char margin_text[32];
        std::snprintf(margin_text, sizeof(margin_text), "%.3e", a2.min_margin);
        throw NumericalError(
            "asymptotic_sinr_mmmse: covariance matrices of user " + std::to_string(k) + " at BS " +
            std::to_string(j) + " are not asymptotically linearly independent across cells (margin = " +
            margin_text + "); the unbounded-SINR limit does not apply");
    }

    const Mat zm = hermitian_inverse(em.zm_inverse[j], "Z^M");

    // Cell ordering (j, then the rest); T(r,c) = beta(order[c], order[r]).
    std::vector<int> order;
    order.reserve(L);
    order.push_back(j);
    for (int l = 0; l < L; ++l)
        if (l != j) order.push_back(l);

    const Eigen::MatrixXcd beta_k = cross_coefficient_matrix(st, em, zm, j, k);

    Mat t(L, L);
    for (int rr = 0; rr < L; ++rr)
        for (int cc = 0; cc < L; ++cc) t(rr, cc) = beta_k(order[cc], order[rr]);
    t = symmetrize(t);

    Eigen::SelfAdjointEigenSolver<Mat> teig(t);
    const double tmin = teig.eigenvalues().minCoeff();
    const double tmax = teig.eigenvalues().maxCoeff();
    if (!(tmin > 0.0) || tmax / tmin > opts.condition_limit)
        throw NumericalError("asymptotic_sinr_mmmse: singular scattered-component matrix; the "
                             "covariance family is effectively linearly dependent");

    // First diagonal entry of T^-1 through the eigendecomposition; T can be
    // legitimately close to singular here.
    double tinv_11 = 0.0;
    for (int i = 0; i < L; ++i)
        tinv_11 += std::norm(teig.eigenvectors()(0, i)) / teig.eigenvalues()(i);
    MmmseAsymptotic out;
    out.t_term = 1.0 / tinv_11;

    // LoS contribution through the interference-suppressed subspace.
    const int cols = L * (K - 1);
    Mat qbar_arg = em.zm_inverse[j];
    if (cols > 0 && st.hbar_at(j, k).squaredNorm() > 0.0) {
        Mat hpad = Mat::Zero(N, cols);
        std::vector<int> others;
        for (int m = 0; m < K; ++m)
            if (m != k) others.push_back(m);
        for (std::size_t p = 0; p < others.size(); ++p)
            hpad.col(j * (K - 1) + static_cast<int>(p)) = st.hbar_at(j, others[p]);

        Mat d = Mat::Zero(cols, cols);
        for (std::size_t p = 0; p < others.size(); ++p) {
            const int m = others[p];
            const Eigen::MatrixXcd beta_m = cross_coefficient_matrix(st, em, zm, j, m);
            for (int u = 0; u < L; ++u)
                for (int v = 0; v < L; ++v)
                    d(u * (K - 1) + static_cast<int>(p), v * (K - 1) + static_cast<int>(p)) =
                        beta_m(u, v);
        }
        Mat dinv_hpad_h;
        try {
            HpdSolver dsolver(d, "mmmse D");
            dinv_hpad_h = dsolver.solve(Mat(hpad.adjoint()));
        } catch (const NumericalError &) {
            throw NumericalError("asymptotic_sinr_mmmse: singular interferer-coefficient matrix; "
                                 "the covariance family is effectively linearly dependent");
        }
        qbar_arg += (hpad * dinv_hpad_h) / n;
    }
    if (st.hbar_at(j, k).squaredNorm() > 0.0) {
        HpdSolver qbar(symmetrize(qbar_arg), "mmmse Qbar");
        out.los_term = std::real(cplx(st.hbar_at(j, k).adjoint() * qbar.solve(st.hbar_at(j, k)))) / n;
    }

    out.gamma_over_n = out.t_term + out.los_term;
    out.gamma = n * out.gamma_over_n;
    return out;
}

// Rate in nats from an asymptotic SINR, substituting a cap for flagged
// infinite values.
inline double asymptotic_rate(double gamma, bool infinite, double prefactor, double cap = 1e12) {
    const double g = infinite ? cap : std::min(gamma, cap);
    return prefactor * std::log1p(g);
}

} // namespace mcmimo

#endif
