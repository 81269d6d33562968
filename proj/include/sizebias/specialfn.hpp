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

#ifndef SIZEBIAS_SPECIALFN_HPP
#define SIZEBIAS_SPECIALFN_HPP

#include <cstdint>
#include <vector>

#include "sizebias/grid.hpp"

namespace sizebias {

/// Dickman's rho on [0, u_max]: rho = 1 on [0,1], then marched through the
/// integrated (Volterra) form x rho(x) = integral of rho over [x-1, x] with
/// an implicit trapezoid step. h is snapped to 1/round(1/h) so the kink at
/// x = 1 is a node. Requires 0 < h <= 1e-2, u_max >= 1.
GridFunction dickman_rho(double u_max, double h);

/// Trapezoid integral of a tabulated rho; compares against e^gamma when the
/// table reaches u_max >= 10 (the tail beyond is below 1e-10).
double dickman_integral(const GridFunction& rho);

/// The a-th convolution power density g_a: proportional to x^(a-1) on (0,1],
/// marched through x g(x) = a * integral over [x-1, x], then normalized to
/// total integral 1. g_1 = e^{-gamma} rho.
GridFunction dickman_conv_power(double a, double u_max, double h);

/// Buchstab's omega on [1, u_max]: omega = 1/u on [1,2], then marched through
/// u omega(u) = 1 + integral of omega(t-1) over [2, u].
GridFunction buchstab_omega(double u_max, double h);

/// Residual of the integrated delay relation at every node, measured with an
/// independent Simpson quadrature over the window:
///   rho:   |x rho(x) - I[x-1,x](rho)|
///   g_a:   |x g(x) - a I[x-1,x](g)|      (pass the same a)
/// Returns the max over nodes with x > 1.
double delay_residual(const GridFunction& f, double a);

/// Same for omega: |u w(u) - 1 - I[2,u](w(.-1))| over nodes with u > 2.
double buchstab_residual(const GridFunction& omega);

/// Largest / smallest prime factor tables for 2..n_max.
struct SieveTable {
    std::uint64_t n_max = 0;
    std::vector<std::uint32_t> largest;   // largest[k] = P+(k), entries 0,1 unused
    std::vector<std::uint32_t> smallest;  // smallest[k] = P-(k)

    static SieveTable build(std::uint64_t n_max);
};

struct PrimeFactorStats {
    std::uint64_t n_max = 0;
    double u = 0.0;
    double threshold = 0.0;        // n_max^(1/u)
    std::uint64_t smooth_count = 0;  // P+(k) <= threshold (1 counted smooth)
    std::uint64_t rough_count = 0;   // P-(k) >= threshold (1 excluded)
    double smooth_fraction = 0.0;
    double rough_fraction = 0.0;
    bool u_below_one = false;        // flagged: smooth fraction trivially ~1

    std::string to_json_text() const;
};

/// Fractions of integers in [1, n_max] that are n_max^(1/u)-smooth and
/// n_max^(1/u)-rough. Sieve budget: 1e4 <= n_max <= 1e8.
PrimeFactorStats prime_factor_empirics(const SieveTable& table, double u);
PrimeFactorStats prime_factor_empirics(std::uint64_t n_max, double u);

}  // namespace sizebias

#endif  // SIZEBIAS_SPECIALFN_HPP
