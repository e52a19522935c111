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

#ifndef MCMIMO_RNG_HPP
#define MCMIMO_RNG_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

namespace mcmimo {

// Domain-separation tags for derived random streams. Every random draw in
// the library comes from a stream keyed by (base_seed, tag, trial, j, l, k),
// so results do not depend on evaluation order or thread count.
enum class StreamTag : std::uint64_t {
    channel_draw = 1,   // small-scale fading vector of link (j,l,k) in one trial
    training_noise = 2, // additive noise on the despread pilot observation (j,k)
    rician_factor = 3,  // per-user Rician factor draw of the default layout
    angle_base = 4,     // per-pilot-group base angle of the default layout
    angle_offset = 5,   // per-user angle jitter of the default layout
    array_gain = 6,     // per-antenna log-normal gain draws of the diagonal model
};

// Counter-based PRNG (Philox 4x64, 10 rounds). A stream is identified by a
// 256-bit counter prefix plus a 128-bit key; the first counter word is the
// running block index. Output sequence matches numpy.random.Philox for the
// same (counter, key), which the unit tests pin down.
class PhiloxStream {
  public:
    PhiloxStream(std::array<std::uint64_t, 2> key, std::array<std::uint64_t, 4> counter)
        : key_(key), counter_(counter), buffer_pos_(4), have_spare_normal_(false), spare_normal_(0.0) {}

    // Stream for one logical draw site. `trial` is the Monte Carlo trial
    // index (0 for scenario-level draws); j/l/k are cell/cell/user indices.
    static PhiloxStream derive(std::uint64_t base_seed, StreamTag tag, std::uint64_t trial,
                               std::uint64_t j = 0, std::uint64_t l = 0, std::uint64_t k = 0) {
        const std::uint64_t id = (j << 40) | (l << 20) | k; // 20 bits per index
        return PhiloxStream({base_seed, kKeySalt}, {0, trial, id, static_cast<std::uint64_t>(tag)});
    }

    std::uint64_t next_u64() {
        if (buffer_pos_ >= 4) {
            increment_counter(); // pre-increment, as numpy does
            buffer_ = block(counter_, key_);
            buffer_pos_ = 0;
        }
        return buffer_[buffer_pos_++];
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double next_double_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller; pairs are cached.
    double next_normal() {
        if (have_spare_normal_) {
            have_spare_normal_ = false;
            return spare_normal_;
        }
        const double u1 = next_double_open();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * kPi * u2;
        spare_normal_ = r * std::sin(phi);
        have_spare_normal_ = true;
        return r * std::cos(phi);
    }

    // Circularly-symmetric complex normal with unit total variance:
    // real and imaginary parts are each N(0, 1/2).
    std::complex<double> next_cnormal() {
        const double s = 0.7071067811865476; // 1/sqrt(2)
        const double re = next_normal() * s;
        const double im = next_normal() * s;
        return {re, im};
    }

  private:
    static constexpr std::uint64_t kKeySalt = 0x6d636d696d6f2d31ULL; // stream-family constant
    static constexpr double kPi = 3.14159265358979323846;
    static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
    static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
    static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
    static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

    static void mul_hilo(std::uint64_t a, std::uint64_t b, std::uint64_t &hi, std::uint64_t &lo) {
        const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
        hi = static_cast<std::uint64_t>(p >> 64);
        lo = static_cast<std::uint64_t>(p);
    }

    static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                              std::array<std::uint64_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            std::uint64_t hi0, lo0, hi1, lo1;
            mul_hilo(kMul0, ctr[0], hi0, lo0);
            mul_hilo(kMul1, ctr[2], hi1, lo1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return ctr;
    }

    void increment_counter() {
        for (int w = 0; w < 4; ++w) {
            if (++counter_[w] != 0) break; // 256-bit increment with carry
        }
    }

    std::array<std::uint64_t, 2> key_;
    std::array<std::uint64_t, 4> counter_;
    std::array<std::uint64_t, 4> buffer_{};
    int buffer_pos_;
    bool have_spare_normal_;
    double spare_normal_;
};

} // namespace mcmimo

#endif
