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

#ifndef MCMIMO_METRICS_HPP
#define MCMIMO_METRICS_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mcmimo/detection.hpp"
#include "mcmimo/estimation.hpp"
#include "mcmimo/sampling.hpp"

namespace mcmimo {

// Conditional SINR of combiner g for user k at BS j, with the inner
// expectation over estimation errors and noise taken in closed form:
//   |g^H hhat_jjk|^2 /
//   ( sum_{(l,i) != (j,k)} |g^H hhat_jli|^2 + g^H ((1/rho_d) I + sum (R - Rtilde)) g )
// Requires multi-cell estimates regardless of which detector produced g.
inline double sinr_conditional(const Vec &g, const EstimateSet &es, const ChannelStatistics &st,
                               const EstimationModel &em, int j, int k) {
    if (es.scope != EstimationScope::multi_cell)
        throw NumericalError("sinr_conditional requires multi-cell estimates");
    const ScenarioConfig &cfg = st.cfg;
    if (g.norm() == 0.0) return 0.0;

    const double num = std::norm(cplx(g.adjoint() * es.at(cfg, j, j, k)));
    double interference = 0.0;
    for (int l = 0; l < cfg.cells; ++l)
        for (int i = 0; i < cfg.users_per_cell; ++i) {
            if (l == j && i == k) continue;
            interference += std::norm(cplx(g.adjoint() * es.at(cfg, j, l, i)));
        }
    const double err_noise = std::real(cplx(g.adjoint() * (em.zm_inverse[j] * g)));
    return num / (interference + err_noise);
}

// The same SINR written as a quadratic form in hhat_jjk, valid at the
// multi-cell MMSE combiner:
//   hhat^H ( sum_{(l,i) != (j,k)} hhat hhat^H + (Z^M)^-1 )^-1 hhat.
inline double sinr_mmmse_direct(const EstimateSet &es, const ChannelStatistics &st,
                                const EstimationModel &em, int j, int k) {
    if (es.scope != EstimationScope::multi_cell)
        throw NumericalError("sinr_mmmse_direct requires multi-cell estimates");
    const ScenarioConfig &cfg = st.cfg;
    const Vec &h = es.at(cfg, j, j, k);
    Mat a = multi_cell_gram(es, cfg, j) + em.zm_inverse[j];
    a.noalias() -= h * h.adjoint();
    HpdSolver solver(a, "sinr_mmmse_direct");
    return std::real(cplx(h.adjoint() * solver.solve(h)));
}

// Rate prefactor (1 - tau/T_c) / K; zero when the whole block is pilots.
inline double rate_prefactor(int tau, int coherence_symbols, int users_per_cell) {
    const double frac = 1.0 - static_cast<double>(tau) / coherence_symbols;
    return (frac > 0.0 ? frac : 0.0) / users_per_cell;
}

struct UserRate {
    double rate_mean = 0.0;   // prefactor * mean log(1 + gamma), nats
    double rate_ci95 = 0.0;   // normal-approximation 95% half-width
    double mean_gamma = 0.0;  // empirical mean SINR
};

struct DetectorRun {
    Detector detector = Detector::mrc;
    std::vector<UserRate> users;        // [L][K]
    std::vector<double> gamma_trials;   // [trials][L*K], trial-major
};

struct MonteCarloOptions {
    std::vector<Detector> detectors{Detector::mrc, Detector::smmse, Detector::mmmse};
    ZsMode zs_mode = ZsMode::cov_design;
    std::optional<RealVec> d_diag;      // los_projector D diagonal
    std::optional<double> zs_eps;       // los_projector ridge
    std::optional<std::uint64_t> seed;  // overrides cfg.base_seed
    int threads = 0;                    // 0 = hardware concurrency
};

struct MonteCarloRun {
    std::uint64_t seed = 0;
    std::uint64_t trials = 0;
    std::vector<DetectorRun> per_detector;
};

// Monte Carlo over independent coherence blocks. Per trial: sample
// channels, form pilot observations, estimate, combine, evaluate the
// conditional SINR. Trials are scheduled on a worker pool; every random
// stream is keyed by (seed, trial), and the final reduction runs in trial
// order, so the result is bit-identical for any thread count.
inline MonteCarloRun run_monte_carlo(const ChannelStatistics &st, const EstimationModel &em,
                                     const SamplingModel &sm, std::uint64_t trials,
                                     const MonteCarloOptions &opts = {}) {
    const ScenarioConfig &cfg = st.cfg;
    const int L = cfg.cells, K = cfg.users_per_cell;
    const int n_users = L * K;
    const std::uint64_t seed = opts.seed.value_or(cfg.base_seed);

    bool need_smmse = false;
    for (Detector d : opts.detectors) need_smmse |= (d == Detector::smmse);
    std::vector<ZsPair> zs_per_cell;
    if (need_smmse) {
        zs_per_cell.reserve(L);
        for (int j = 0; j < L; ++j)
            zs_per_cell.push_back(build_zs(opts.zs_mode, st, em, j, cfg.rho_d, opts.d_diag, opts.zs_eps));
    }

    MonteCarloRun run;
    run.seed = seed;
    run.trials = trials;
    run.per_detector.resize(opts.detectors.size());
    for (std::size_t d = 0; d < opts.detectors.size(); ++d) {
        run.per_detector[d].detector = opts.detectors[d];
        run.per_detector[d].gamma_trials.assign(trials * n_users, 0.0);
        run.per_detector[d].users.assign(n_users, UserRate{});
    }
    if (trials == 0) return run;

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::string failure_msg;
    std::mutex failure_mutex;

    const auto worker = [&]() {
        for (;;) {
            const std::uint64_t t = next.fetch_add(1);
            if (t >= trials || failed.load()) break;
            try {
                const ChannelRealization rlz = sample_channels(st, sm, seed, t);
                const std::vector<Vec> obs = sample_all_observations(st, rlz, seed);
                const EstimateSet es = estimate_all(st, em, obs, EstimationScope::multi_cell);
                for (std::size_t d = 0; d < opts.detectors.size(); ++d) {
                    const CombinerSet cs = build_combiners(opts.detectors[d], es, st, em, zs_per_cell);
                    for (int j = 0; j < L; ++j)
                        for (int k = 0; k < K; ++k) {
                            const double gamma =
                                sinr_conditional(cs.g[cfg.user_index(j, k)], es, st, em, j, k);
                            run.per_detector[d].gamma_trials[t * n_users + cfg.user_index(j, k)] = gamma;
                        }
                }
            } catch (const std::exception &e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                failed.store(true);
                failure_msg = "trial " + std::to_string(t) + ": " + e.what();
            }
        }
    };

    int n_threads = opts.threads > 0 ? opts.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads < 1) n_threads = 1;
    {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
        for (auto &th : pool) th.join();
    }
    if (failed.load()) throw NumericalError("monte carlo aborted at " + failure_msg);

    const double prefactor = rate_prefactor(cfg.pilot_symbols, cfg.coherence_symbols, K);
    for (auto &det : run.per_detector) {
        for (int u = 0; u < n_users; ++u) {
            double sum_log = 0.0, sum_gamma = 0.0;
            for (std::uint64_t t = 0; t < trials; ++t) {
                const double gamma = det.gamma_trials[t * n_users + u];
                sum_log += std::log1p(gamma);
                sum_gamma += gamma;
            }
            const double mean_log = sum_log / trials;
            double var = 0.0;
            for (std::uint64_t t = 0; t < trials; ++t) {
                const double dlt = std::log1p(det.gamma_trials[t * n_users + u]) - mean_log;
                var += dlt * dlt;
            }
            var = trials > 1 ? var / (trials - 1) : 0.0;
            det.users[u].rate_mean = prefactor * mean_log;
            det.users[u].rate_ci95 = prefactor * 1.959963984540054 * std::sqrt(var / trials);
            det.users[u].mean_gamma = sum_gamma / trials;
        }
    }
    return run;
}

// Convenience wrapper: build every model from the config and run one
// detector.
inline MonteCarloRun run_monte_carlo(const ScenarioConfig &cfg, Detector det, std::uint64_t trials,
                                     const MonteCarloOptions &base_opts = {}) {
    const ChannelStatistics st = build_channel_statistics(cfg);
    const EstimationModel em = build_estimation_model(st);
    const SamplingModel sm = build_sampling_model(st);
    MonteCarloOptions opts = base_opts;
    opts.detectors = {det};
    return run_monte_carlo(st, em, sm, trials, opts);
}

} // namespace mcmimo

#endif
