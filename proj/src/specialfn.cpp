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

#include "sizebias/specialfn.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace sizebias {

namespace {

// Snap the step to 1/m so the delay kinks land on nodes.
std::size_t snap_unit_cells(double h) {
    if (!(h > 0.0 && h <= 1e-2)) throw std::invalid_argument("delay solver: need 0 < h <= 1e-2");
    return static_cast<std::size_t>(std::llround(1.0 / h));
}

}  // namespace

GridFunction dickman_rho(double u_max, double h) {
    if (u_max < 1.0) throw std::invalid_argument("dickman_rho: u_max must be >= 1");
    const std::size_t m = snap_unit_cells(h);
    h = 1.0 / static_cast<double>(m);
    const auto n = static_cast<std::size_t>(std::ceil(u_max * static_cast<double>(m)));
    std::vector<double> v(n + 1, 1.0);

    // Implicit trapezoid on x rho(x) = I[x-1,x](rho); window mid-sum slides.
    double mid = static_cast<double>(m - 1);  // sum of rho over nodes 2..m at i = m+1
    for (std::size_t i = m + 1; i <= n; ++i) {
        const double x = static_cast<double>(i) * h;
        v[i] = h * (0.5 * v[i - m] + mid) / (x - 0.5 * h);
        mid += v[i] - v[i - m + 1];
        if (i % (8 * m) == 0) {  // resync the sliding sum
            mid = 0.0;
            for (std::size_t j = i - m + 2; j <= i; ++j) mid += v[j];
        }
    }
    return GridFunction(0.0, h, std::move(v));
}

double dickman_integral(const GridFunction& rho) {
    if (rho.x_max() < 10.0)
        throw std::invalid_argument("dickman_integral: tabulate to u_max >= 10 first");
    return rho.integral();
}

GridFunction dickman_conv_power(double a, double u_max, double h) {
    if (!(a > 0.0 && a <= 100.0))
        throw std::invalid_argument("dickman_conv_power: need 0 < a <= 100");
    if (u_max < 1.0) throw std::invalid_argument("dickman_conv_power: u_max must be >= 1");
    const std::size_t m = snap_unit_cells(h);
    h = 1.0 / static_cast<double>(m);
    const auto n = static_cast<std::size_t>(std::ceil(u_max * static_cast<double>(m)));
    std::vector<double> v(n + 1, 0.0);

    // On (0,1] the equation forces g proportional to x^(a-1).
    for (std::size_t i = 1; i <= std::min(m, n); ++i)
        v[i] = std::pow(static_cast<double>(i) * h, a - 1.0);
    v[0] = a > 1.0 ? 0.0 : (a == 1.0 ? 1.0 : v[1]);  // divergent at 0 for a < 1

    double mid = 0.0;
    for (std::size_t j = 2; j <= m; ++j) mid += v[j];
    for (std::size_t i = m + 1; i <= n; ++i) {
        const double x = static_cast<double>(i) * h;
        v[i] = a * h * (0.5 * v[i - m] + mid) / (x - 0.5 * a * h);
        mid += v[i] - v[i - m + 1];
        if (i % (8 * m) == 0) {
            mid = 0.0;
            for (std::size_t j = i - m + 2; j <= i; ++j) mid += v[j];
        }
    }

    // Normalize by the table's own trapezoid plus a geometric tail estimate
    // beyond u_max (the tail is far below the quadrature error for u_max >= 10).
    GridFunction g(0.0, h, std::move(v));
    double z = g.integral();
    const auto last = g.size() - 1;
    if (last > m + 1 && g.values[last] > 0.0 && g.values[last] < g.values[last - 1]) {
        const double r = g.values[last] / g.values[last - 1];
        z += h * g.values[last] * r / (1.0 - r);
    }
    for (double& x : g.values) x /= z;
    return g;
}

GridFunction buchstab_omega(double u_max, double h) {
    if (u_max < 2.0) throw std::invalid_argument("buchstab_omega: u_max must be >= 2");
    const std::size_t m = snap_unit_cells(h);
    h = 1.0 / static_cast<double>(m);
    const auto n = static_cast<std::size_t>(std::ceil((u_max - 1.0) * static_cast<double>(m)));
    std::vector<double> v(n + 1, 0.0);
    for (std::size_t i = 0; i <= std::min(m, n); ++i)
        v[i] = 1.0 / (1.0 + static_cast<double>(i) * h);

    // u w(u) = 1 + I[2,u](w(. - 1)); the integrand at node j is v[j - m].
    double mid = 0.0;  // sum of v[j - m] for j = m+1 .. i-1
    for (std::size_t i = m + 1; i <= n; ++i) {
        const double u = 1.0 + static_cast<double>(i) * h;
        const double integral = h * (0.5 * v[0] + mid + 0.5 * v[i - m]);
        v[i] = (1.0 + integral) / u;
        mid += v[i - m];
    }
    return GridFunction(1.0, h, std::move(v));
}

double delay_residual(const GridFunction& f, double a) {
    const auto m = static_cast<std::size_t>(std::llround(1.0 / f.h));
    double worst = 0.0;
    for (std::size_t i = m + 1; i < f.size(); ++i) {
        const double x = f.x_at(i);
        const double integral = f.integral_simpson(i - m, i);
        worst = std::max(worst, std::fabs(x * f.values[i] - a * integral));
    }
    return worst;
}

double buchstab_residual(const GridFunction& omega) {
    const auto m = static_cast<std::size_t>(std::llround(1.0 / omega.h));
    // Shifted integrand omega(t-1) tabulated on the same step.
    double worst = 0.0;
    for (std::size_t i = m + 1; i < omega.size(); ++i) {
        GridFunction shifted(2.0, omega.h,
                             std::vector<double>(omega.values.begin(),
                                                 omega.values.begin() + static_cast<long>(i - m + 1)));
        const double integral = shifted.integral_simpson(0, i - m);
        const double u = omega.x_at(i);
        worst = std::max(worst, std::fabs(u * omega.values[i] - 1.0 - integral));
    }
    return worst;
}

SieveTable SieveTable::build(std::uint64_t n_max) {
    if (n_max < 2 || n_max > 100000000ull)
        throw std::invalid_argument("SieveTable: n_max outside [2, 1e8]");
    SieveTable t;
    t.n_max = n_max;
    t.largest.assign(n_max + 1, 0);
    t.smallest.assign(n_max + 1, 0);
    for (std::uint64_t p = 2; p <= n_max; ++p) {
        if (t.smallest[p] != 0) continue;  // composite, already marked
        for (std::uint64_t k = p; k <= n_max; k += p) {
            t.largest[k] = static_cast<std::uint32_t>(p);
            if (t.smallest[k] == 0) t.smallest[k] = static_cast<std::uint32_t>(p);
        }
    }
    return t;
}

PrimeFactorStats prime_factor_empirics(const SieveTable& table, double u) {
    if (!(u > 0.0)) throw std::invalid_argument("prime_factor_empirics: u must be > 0");
    PrimeFactorStats s;
    s.n_max = table.n_max;
    s.u = u;
    s.u_below_one = u < 1.0;
    double tau = std::pow(static_cast<double>(table.n_max), 1.0 / u);
    // Snap near-integer thresholds so counts are reproducible bit-exactly.
    if (std::fabs(tau - std::round(tau)) < 1e-9 * std::max(1.0, tau)) tau = std::round(tau);
    s.threshold = tau;

    std::uint64_t smooth = 1;  // the integer 1 is u-smooth by convention
    std::uint64_t rough = 0;   // and excluded from rough counts
    for (std::uint64_t k = 2; k <= table.n_max; ++k) {
        if (static_cast<double>(table.largest[k]) <= tau) ++smooth;
        if (static_cast<double>(table.smallest[k]) >= tau) ++rough;
    }
    s.smooth_count = smooth;
    s.rough_count = rough;
    s.smooth_fraction = static_cast<double>(smooth) / static_cast<double>(table.n_max);
    s.rough_fraction = static_cast<double>(rough) / static_cast<double>(table.n_max);
    return s;
}

PrimeFactorStats prime_factor_empirics(std::uint64_t n_max, double u) {
    if (n_max < 10000) throw std::invalid_argument("prime_factor_empirics: n_max below 1e4");
    return prime_factor_empirics(SieveTable::build(n_max), u);
}

std::string PrimeFactorStats::to_json_text() const {
    nlohmann::json j;
    j["n_max"] = n_max;
    j["u"] = u;
    j["threshold"] = threshold;
    j["smooth"] = {{"count", smooth_count}, {"fraction", smooth_fraction}};
    j["rough"] = {{"count", rough_count}, {"fraction", rough_fraction}};
    if (u_below_one) j["note"] = "u < 1: smooth fraction is trivially ~1";
    return j.dump();
}

}  // namespace sizebias
