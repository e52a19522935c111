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

#include "mcmimo/rng.hpp"

using mcmimo::PhiloxStream;
using mcmimo::StreamTag;

TEST_CASE("philox matches the reference implementation") {
    // Reference outputs generated with numpy.random.Philox (4x64, 10 rounds)
    // for the same (counter, key); two blocks each.
    struct Case {
        std::array<std::uint64_t, 4> counter;
        std::array<std::uint64_t, 2> key;
        std::array<std::uint64_t, 8> expect;
    };
    const Case cases[] = {
        {{0, 0, 0, 0},
         {0, 0},
         {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL, 0x907d7a052fd5b4dcULL,
          0x809bf322883987c3ULL, 0x471128b9e807f7ddULL, 0xf250ba0dbec065b7ULL, 0xfc6ed66767a457bcULL}},
        {{0xffffffffffffffffULL, 0xffffffffffffffffULL, 0xffffffffffffffffULL, 0xffffffffffffffffULL},
         {0xffffffffffffffffULL, 0xffffffffffffffffULL},
         {0x44b7493d1acfc229ULL, 0x6636af8e997921ddULL, 0x3f73e132b5b3780eULL, 0x605644dde03b01b1ULL,
          0x6d46cc0e71f0be7eULL, 0x924ea1693f9a8bc0ULL, 0xfdc35f0198c91181ULL, 0xb4a311f17aa6568dULL}},
        {{1, 2, 3, 4},
         {5, 6},
         {0x92ab6a0e75619263ULL, 0xd8ff75bdc6bf8f60ULL, 0x450e124938725640ULL, 0x94eb1a7cffd20cbbULL,
          0x4c04b3916202e724ULL, 0xaf0bd262e063f6d9ULL, 0x4bdb44f77be60f66ULL, 0x48a78b54a3bc500eULL}},
    };
    for (const Case &c : cases) {
        PhiloxStream s(c.key, c.counter);
        for (int i = 0; i < 8; ++i) {
            INFO("output " << i);
            CHECK(s.next_u64() == c.expect[i]);
        }
    }
}

TEST_CASE("derived streams are reproducible and separated") {
    PhiloxStream a = PhiloxStream::derive(42, StreamTag::channel_draw, 7, 1, 2, 3);
    PhiloxStream b = PhiloxStream::derive(42, StreamTag::channel_draw, 7, 1, 2, 3);
    for (int i = 0; i < 16; ++i) REQUIRE(a.next_u64() == b.next_u64());

    PhiloxStream base = PhiloxStream::derive(42, StreamTag::channel_draw, 7, 1, 2, 3);
    PhiloxStream other_trial = PhiloxStream::derive(42, StreamTag::channel_draw, 8, 1, 2, 3);
    PhiloxStream other_tag = PhiloxStream::derive(42, StreamTag::training_noise, 7, 1, 2, 3);
    PhiloxStream other_user = PhiloxStream::derive(42, StreamTag::channel_draw, 7, 1, 2, 4);
    PhiloxStream other_seed = PhiloxStream::derive(43, StreamTag::channel_draw, 7, 1, 2, 3);
    const std::uint64_t first = base.next_u64();
    CHECK(first != other_trial.next_u64());
    CHECK(first != other_tag.next_u64());
    CHECK(first != other_user.next_u64());
    CHECK(first != other_seed.next_u64());
}

TEST_CASE("uniform ranges") {
    PhiloxStream s = PhiloxStream::derive(1, StreamTag::channel_draw, 0);
    for (int i = 0; i < 1000; ++i) {
        const double u = s.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
    PhiloxStream so = PhiloxStream::derive(1, StreamTag::channel_draw, 1);
    for (int i = 0; i < 1000; ++i) {
        const double u = so.next_double_open();
        REQUIRE(u > 0.0);
        REQUIRE(u <= 1.0);
    }
}

TEST_CASE("normal and complex-normal moments") {
    PhiloxStream s = PhiloxStream::derive(3, StreamTag::channel_draw, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.next_normal();
        sum += x;
        sum2 += x * x;
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(sum2 / n - 1.0) < 0.02);

    PhiloxStream sc = PhiloxStream::derive(3, StreamTag::channel_draw, 1);
    std::complex<double> mean(0, 0), pseudo(0, 0);
    double power = 0.0;
    for (int i = 0; i < n; ++i) {
        const std::complex<double> z = sc.next_cnormal();
        mean += z;
        pseudo += z * z; // circular symmetry: E[z^2] = 0
        power += std::norm(z);
    }
    CHECK(std::abs(mean) / n < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(pseudo) / n < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(power / n - 1.0) < 0.02);
}
