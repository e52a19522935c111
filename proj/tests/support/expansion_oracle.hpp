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
// Independent evaluation of the scaled quadratic-form SINR through the
// partitioned inverse: pull the same-pilot contaminators out of the Gram
// matrix, invert what remains with the naive solver, and correct with the
// small (L-1)-dimensional system. Shared by the unit and acceptance suites.

#ifndef MCMIMO_TESTS_EXPANSION_ORACLE_HPP
#define MCMIMO_TESTS_EXPANSION_ORACLE_HPP

#include "mcmimo/mcmimo.hpp"
#include "support/naive_linalg.hpp"

namespace oracle {

inline naive::NMat to_naive(const mcmimo::Mat &m) {
    naive::NMat out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c) out(r, c) = m(r, c);
    return out;
}

inline naive::NMat to_naive(const mcmimo::Vec &v) {
    naive::NMat out(static_cast<int>(v.size()), 1);
    for (int r = 0; r < out.rows; ++r) out(r, 0) = v(r);
    return out;
}

inline double expansion_sinr_over_n(const mcmimo::ChannelStatistics &st,
                                    const mcmimo::EstimationModel &em,
                                    const mcmimo::EstimateSet &es, int j, int k) {
    using mcmimo::cplx;
    const mcmimo::ScenarioConfig &cfg = st.cfg;
    const int n = cfg.antennas, L = cfg.cells, K = cfg.users_per_cell;

    naive::NMat a = to_naive(em.zm_inverse[j]);
    for (int l = 0; l < L; ++l)
        for (int i = 0; i < K; ++i) {
            if (i == k) continue;
            const mcmimo::Vec &h = es.at(cfg, j, l, i);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) a(r, c) += h(r) * std::conj(h(c));
        }
    const naive::NMat a_inv = naive::gauss_inverse(a);

    const naive::NMat own = to_naive(es.at(cfg, j, j, k));
    naive::NMat contaminators(n, L - 1);
    int col = 0;
    for (int l = 0; l < L; ++l) {
        if (l == j) continue;
        const mcmimo::Vec &h = es.at(cfg, j, l, k);
        for (int r = 0; r < n; ++r) contaminators(r, col) = h(r);
        ++col;
    }

    const naive::NMat ainv_own = naive::multiply(a_inv, own);
    const naive::NMat pi1m = naive::multiply(naive::adjoint(own), ainv_own);
    const double pi1 = pi1m(0, 0).real() / n;
    if (L == 1) return pi1;

    const naive::NMat ainv_b = naive::multiply(a_inv, contaminators);
    naive::NMat pi2(1, L - 1);
    {
        const naive::NMat t = naive::multiply(naive::adjoint(own), ainv_b);
        for (int c = 0; c < L - 1; ++c) pi2(0, c) = t(0, c) / static_cast<double>(n);
    }
    naive::NMat pi3_arg(L - 1, L - 1);
    {
        const naive::NMat t = naive::multiply(naive::adjoint(contaminators), ainv_b);
        for (int r = 0; r < L - 1; ++r)
            for (int c = 0; c < L - 1; ++c)
                pi3_arg(r, c) = t(r, c) / static_cast<double>(n) +
                                (r == c ? cplx(1.0 / n, 0.0) : cplx(0.0, 0.0));
    }
    const naive::NMat pi3 = naive::gauss_inverse(pi3_arg);
    const naive::NMat corr = naive::multiply(naive::multiply(pi2, pi3), naive::adjoint(pi2));
    return pi1 - corr(0, 0).real();
}

} // namespace oracle

#endif
