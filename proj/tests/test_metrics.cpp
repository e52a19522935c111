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

#include <catch2/catch_amalgamated.hpp>

#include "mcmimo/mcmimo.hpp"
#include "support/test_scenarios.hpp"

using namespace mcmimo;

namespace {

// one user, one cell, identity statistics, zero error covariance
struct TrivialInstance {
    ScenarioConfig cfg = testsup::uniform_config(1, 1, 4, 1.0, 1.0, 0.0);
    ChannelStatistics st;
    EstimationModel em;
    EstimateSet es;
    TrivialInstance() {
        st = build_channel_statistics(cfg);
        em = build_estimation_model(st);
        em.zm_inverse[0] = Mat::Identity(4, 4); // (1/rho_d) I with rho_d = 1, R - Rtilde = 0
        em.rtilde[0] = st.r[0];
        es.scope = EstimationScope::multi_cell;
        es.hhat.resize(1);
        Vec e1 = Vec::Zero(4);
        e1(0) = 1.0;
        es.hhat[0] = e1;
    }
};

} // namespace

TEST_CASE("conditional SINR closed forms") {
    TrivialInstance ti;
    Vec e1 = Vec::Zero(4), e2 = Vec::Zero(4);
    e1(0) = 1.0;
    e2(1) = 1.0;
    CHECK(sinr_conditional(e1, ti.es, ti.st, ti.em, 0, 0) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(sinr_conditional(e2, ti.es, ti.st, ti.em, 0, 0) == 0.0);
    CHECK(sinr_conditional(Vec(Vec::Zero(4)), ti.es, ti.st, ti.em, 0, 0) == 0.0);
}

TEST_CASE("quadratic-form SINR") {
    TrivialInstance ti;
    CHECK(sinr_mmmse_direct(ti.es, ti.st, ti.em, 0, 0) == Catch::Approx(1.0).epsilon(1e-12));

    // invariant to relabeling the interfering users
    const ScenarioConfig cfg = testsup::exponential_config(2, 2, 6, 0.5, {7, -11, 26, -31}, 0.4, 0.2, 0.9);
    const auto b = testsup::build_all(cfg);
    const ChannelRealization rlz = sample_channels(b.st, b.sm, 7, 0);
    const std::vector<Vec> obs = sample_all_observations(b.st, rlz, 7);
    EstimateSet es = estimate_all(b.st, b.em, obs, EstimationScope::multi_cell);
    const double before = sinr_mmmse_direct(es, b.st, b.em, 0, 0);
    std::swap(es.hhat[cfg.link_index(0, 1, 0)], es.hhat[cfg.link_index(0, 1, 1)]);
    std::swap(es.hhat[cfg.link_index(0, 0, 1)], es.hhat[cfg.link_index(0, 1, 0)]);
    const double after = sinr_mmmse_direct(es, b.st, b.em, 0, 0);
    CHECK(before == Catch::Approx(after).epsilon(1e-12));
}

TEST_CASE("rate prefactor") {
    CHECK(rate_prefactor(2, 200, 2) == Catch::Approx((1.0 - 0.01) / 2.0));
    CHECK(rate_prefactor(200, 200, 2) == 0.0); // the whole block is pilots
}

TEST_CASE("monte carlo engine basics") {
    const ScenarioConfig cfg = testsup::exponential_config(2, 2, 8, 0.5, {9, -13, 24, -28}, 0.4, 0.2, 1.0);
    const auto b = testsup::build_all(cfg);

    SECTION("gammas are finite, nonnegative, and ordered across detectors") {
        MonteCarloOptions opts;
        opts.threads = 2;
        const MonteCarloRun run = run_monte_carlo(b.st, b.em, b.sm, 200, opts);
        REQUIRE(run.per_detector.size() == 3);
        const auto &smm = run.per_detector[1].gamma_trials;
        const auto &mmm = run.per_detector[2].gamma_trials;
        for (std::size_t i = 0; i < smm.size(); ++i) {
            CHECK(std::isfinite(smm[i]));
            CHECK(smm[i] >= 0.0);
            CHECK(mmm[i] >= smm[i] * (1.0 - 1e-10));
        }
        for (double g : run.per_detector[0].gamma_trials) {
            CHECK(std::isfinite(g));
            CHECK(g >= 0.0);
        }
    }

    SECTION("results are identical for every thread count") {
        MonteCarloOptions a, c;
        a.threads = 1;
        c.threads = 3;
        const MonteCarloRun ra = run_monte_carlo(b.st, b.em, b.sm, 64, a);
        const MonteCarloRun rc = run_monte_carlo(b.st, b.em, b.sm, 64, c);
        for (std::size_t d = 0; d < ra.per_detector.size(); ++d) {
            REQUIRE(ra.per_detector[d].gamma_trials == rc.per_detector[d].gamma_trials);
            for (std::size_t u = 0; u < ra.per_detector[d].users.size(); ++u) {
                CHECK(ra.per_detector[d].users[u].rate_mean == rc.per_detector[d].users[u].rate_mean);
                CHECK(ra.per_detector[d].users[u].rate_ci95 == rc.per_detector[d].users[u].rate_ci95);
            }
        }
    }

    SECTION("confidence half-width shrinks like the square root of the trial count") {
        MonteCarloOptions opts;
        opts.threads = 2;
        opts.detectors = {Detector::mrc};
        const MonteCarloRun r1 = run_monte_carlo(b.st, b.em, b.sm, 2000, opts);
        const MonteCarloRun r2 = run_monte_carlo(b.st, b.em, b.sm, 4000, opts);
        const double ratio = r1.per_detector[0].users[0].rate_ci95 /
                             r2.per_detector[0].users[0].rate_ci95;
        CHECK(ratio > std::sqrt(2.0) * 0.8);
        CHECK(ratio < std::sqrt(2.0) * 1.2);
    }

    SECTION("matched-filter rate grows with the data SNR at a fixed realization set") {
        ScenarioConfig hi = cfg;
        hi.rho_d = 2.0;
        const auto bh = testsup::build_all(hi);
        MonteCarloOptions opts;
        opts.threads = 2;
        opts.detectors = {Detector::mrc};
        opts.seed = 5;
        const MonteCarloRun lo_run = run_monte_carlo(b.st, b.em, b.sm, 150, opts);
        const MonteCarloRun hi_run = run_monte_carlo(bh.st, bh.em, bh.sm, 150, opts);
        for (std::size_t u = 0; u < lo_run.per_detector[0].users.size(); ++u)
            CHECK(hi_run.per_detector[0].users[u].rate_mean >
                  lo_run.per_detector[0].users[u].rate_mean);
    }
}

TEST_CASE("single-detector wrapper") {
    const ScenarioConfig cfg = testsup::uniform_config(2, 1, 6, 0.5, 0.2, 0.8);
    const MonteCarloRun run = run_monte_carlo(cfg, Detector::mrc, 50);
    REQUIRE(run.per_detector.size() == 1);
    CHECK(run.per_detector[0].detector == Detector::mrc);
    CHECK(run.trials == 50);
    for (const UserRate &ur : run.per_detector[0].users) {
        CHECK(ur.rate_mean > 0.0);
        CHECK(ur.rate_ci95 > 0.0);
    }
}
