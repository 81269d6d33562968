// Copyright 2026 The sizebias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIZEBIAS_RNG_HPP
#define SIZEBIAS_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace sizebias {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Seeded random stream backed by mt19937_64 (fully specified by the
/// standard, so identical seeds give identical draws on every platform).
///
/// All experiment randomness flows from one root seed through the
/// stream-splitting rule in substream(): the module name is folded into the
/// root via FNV-1a and the replicate index is mixed in with splitmix64.
/// Disjoint (name, replicate) pairs give independent streams.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(detail::splitmix64(seed)) {}

    static RngStream substream(std::uint64_t root_seed, std::string_view name,
                               std::uint64_t replicate = 0) {
        std::uint64_t s = root_seed ^ 0xcbf29ce484222325ull;
        for (unsigned char b : name) s = (s ^ b) * 0x100000001b3ull;
        s ^= detail::splitmix64(replicate ^ 0x9E3779B97F4A7C15ull);
        return RngStream(s);
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on the open interval (0,1): 53 random bits offset by half an ulp.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * 3.14159265358979323846 * u2;
        cached_ = r * std::sin(t);
        has_cached_ = true;
        return r * std::cos(t);
    }

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace sizebias

#endif  // SIZEBIAS_RNG_HPP
