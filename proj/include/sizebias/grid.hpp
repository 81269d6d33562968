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

#ifndef SIZEBIAS_GRID_HPP
#define SIZEBIAS_GRID_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sizebias {

/// Uniform-grid tabulation of a real function: values[i] = f(x0 + i*h),
/// evaluated between nodes by linear interpolation and zero outside.
struct GridFunction {
    double x0 = 0.0;
    double h = 1.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double x0_, double h_, std::vector<double> v)
        : x0(x0_), h(h_), values(std::move(v)) {
        if (h <= 0.0) throw std::invalid_argument("GridFunction: step h must be > 0");
        if (values.size() < 2) throw std::invalid_argument("GridFunction: need at least 2 nodes");
    }

    std::size_t size() const { return values.size(); }
    double x_at(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double x_max() const { return x_at(values.size() - 1); }

    double operator()(double x) const {
        if (x < x0 || x > x_max()) return 0.0;
        const double s = (x - x0) / h;
        auto i = static_cast<std::size_t>(s);
        if (i >= values.size() - 1) return values.back();
        const double w = s - static_cast<double>(i);
        return values[i] * (1.0 - w) + values[i + 1] * w;
    }

    /// Trapezoid integral over the whole grid.
    double integral() const {
        double s = 0.5 * (values.front() + values.back());
        for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
        return s * h;
    }

    /// Cumulative trapezoid values at each node (same length as values).
    std::vector<double> cumulative() const {
        std::vector<double> c(values.size());
        c[0] = 0.0;
        for (std::size_t i = 1; i < values.size(); ++i)
            c[i] = c[i - 1] + 0.5 * h * (values[i - 1] + values[i]);
        return c;
    }

    /// Composite Simpson integral over node range [i0, i1]. Falls back to a
    /// 3/8 rule on the final three cells when the cell count is odd, so the
    /// result stays O(h^4) regardless of parity.
    double integral_simpson(std::size_t i0, std::size_t i1) const {
        if (i1 <= i0) return 0.0;
        std::size_t n = i1 - i0;
        double s = 0.0;
        if (n % 2 == 1) {
            if (n >= 3) {
                std::size_t j = i1 - 3;
                s += 3.0 * h / 8.0 *
                     (values[j] + 3.0 * values[j + 1] + 3.0 * values[j + 2] + values[j + 3]);
                i1 = j;
                n -= 3;
            } else {
                return 0.5 * h * (values[i0] + values[i1]);
            }
        }
        for (std::size_t j = i0; j + 2 <= i1; j += 2)
            s += h / 3.0 * (values[j] + 4.0 * values[j + 1] + values[j + 2]);
        return s;
    }
};

/// n evenly spaced points spanning [lo, hi].
inline std::vector<double> make_ugrid(double lo, double hi, std::size_t n) {
    if (n < 2 || hi <= lo) throw std::invalid_argument("make_ugrid: bad range");
    std::vector<double> u(n);
    for (std::size_t i = 0; i < n; ++i)
        u[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return u;
}

}  // namespace sizebias

#endif  // SIZEBIAS_GRID_HPP
