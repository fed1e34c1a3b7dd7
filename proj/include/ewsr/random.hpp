// SPDX-License-Identifier: Apache-2.0
//
// ewsr-gap: expected weighted sum rate vs. massive-MIMO surrogate gap analysis
// Copyright (C) 2026 The ewsr-gap authors
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

#ifndef EWSR_RANDOM_HPP
#define EWSR_RANDOM_HPP

#include "ewsr/linalg.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <random>

namespace ewsr
{

// Purposes that draw from independent families of streams under one master seed.
enum class StreamFamily : std::uint64_t
{
    generic = 0,
    ewsr = 1,
    gap = 2,
    brute_force = 3,
    bartlett = 4,
    scenario = 5,
    verify = 6,
};

namespace detail
{
inline std::uint64_t splitmix64(std::uint64_t &x) noexcept
{
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace detail

// xoshiro256** keyed by (seed, family, index). Any sample index can be
// reconstructed directly, so Monte-Carlo results do not depend on how indices
// are spread over workers.
class RngStream
{
public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t seed, StreamFamily family = StreamFamily::generic, std::uint64_t index = 0)
    {
        std::uint64_t key = seed;
        std::uint64_t mixed = detail::splitmix64(key);
        key = mixed ^ (static_cast<std::uint64_t>(family) * 0xd1b54a32d192ed03ULL);
        mixed = detail::splitmix64(key);
        key = mixed ^ (index * 0x8cb92ba72f3d8dd7ULL);
        for (auto &s : s_)
            s = detail::splitmix64(key);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on (0, 1).
    double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() { return normal_(*this); }

    // CN(0,1): real and imaginary parts each N(0, 1/2).
    cplx complex_normal()
    {
        constexpr double s = 0.70710678118654752440;
        const double re = normal_(*this);
        const double im = normal_(*this);
        return {s * re, s * im};
    }

    ComplexMatrix complex_normal_matrix(std::size_t rows, std::size_t cols)
    {
        ComplexMatrix W(rows, cols);
        for (auto &z : W.entries())
            z = complex_normal();
        return W;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace ewsr

#endif // EWSR_RANDOM_HPP
