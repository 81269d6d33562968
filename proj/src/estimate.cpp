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

#include "sizebias/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sizebias {

double Population::true_ratio() const {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    return sy / sx;
}

void Population::validate() const {
    if (x.empty() || x.size() != y.size())
        throw std::invalid_argument("Population: need matching nonempty x and y columns");
    double sx = 0.0;
    for (double v : x) {
        if (v < 0.0) throw std::invalid_argument("Population: x values must be >= 0");
        sx += v;
    }
    if (!(sx > 0.0)) throw std::invalid_argument("Population: sum of x must be > 0");
}

Population Population::from_csv_text(const std::string& text) {
    Population pop;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double xv, yv;
        if (!(row >> xv >> yv)) {
            if (pop.x.empty()) continue;  // header row
            throw std::invalid_argument("Population: malformed CSV row: " + line);
        }
        pop.x.push_back(xv);
        pop.y.push_back(yv);
    }
    pop.validate();
    return pop;
}

std::vector<std::size_t> midzuno_sample(const Population& pop, std::size_t m, RngStream& rng) {
    pop.validate();
    const std::size_t n = pop.size();
    if (m < 1 || m > n) throw std::invalid_argument("midzuno_sample: need 1 <= m <= n");

    // PPS seed: zero-x records can never be first.
    double total = 0.0;
    for (double v : pop.x) total += v;
    const double u = rng.uniform() * total;
    double cum = 0.0;
    std::size_t seed = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
        cum += pop.x[i];
        if (u <= cum) {
            seed = i;
            break;
        }
    }

    std::vector<std::size_t> rest;
    rest.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        if (i != seed) rest.push_back(i);
    // Partial Fisher-Yates for the uniform remainder.
    for (std::size_t k = 0; k + 1 < m; ++k) {
        const auto j = k + static_cast<std::size_t>(rng.uniform() * static_cast<double>(rest.size() - k));
        std::swap(rest[k], rest[std::min(j, rest.size() - 1)]);
    }
    std::vector<std::size_t> out{seed};
    out.insert(out.end(), rest.begin(), rest.begin() + static_cast<long>(m - 1));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> srs_sample(const Population& pop, std::size_t m, RngStream& rng) {
    const std::size_t n = pop.size();
    if (m < 1 || m > n) throw std::invalid_argument("srs_sample: need 1 <= m <= n");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t k = 0; k < m; ++k) {
        const auto j = k + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - k));
        std::swap(idx[k], idx[std::min(j, n - 1)]);
    }
    idx.resize(m);
    std::sort(idx.begin(), idx.end());
    return idx;
}

double ratio_estimate(const Population& pop, const std::vector<std::size_t>& idx_set) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i : idx_set) {
        sx += pop.x.at(i);
        sy += pop.y.at(i);
    }
    if (!(sx > 0.0)) throw std::domain_error("ratio_estimate: selected set has zero x-sum");
    return sy / sx;
}

double exact_expectation(const Population& pop, std::size_t m, Scheme scheme) {
    pop.validate();
    const std::size_t n = pop.size();
    if (m < 1 || m > n) throw std::invalid_argument("exact_expectation: need 1 <= m <= n");
    double n_subsets = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        n_subsets = n_subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
    if (n_subsets > 1e6)
        throw std::invalid_argument(
            "exact_expectation: C(n,m) exceeds the enumeration budget of 1e6; use Monte Carlo");

    double total_x = 0.0;
    for (double v : pop.x) total_x += v;

    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;
    long double acc = 0.0L;
    long double prob_total = 0.0L;
    for (;;) {
        double sx = 0.0, sy = 0.0;
        for (std::size_t i : idx) {
            sx += pop.x[i];
            sy += pop.y[i];
        }
        // Set probability: uniform for SRS, proportional to the x-sum for
        // Midzuno (PPS seed times uniform remainder, summed over seeds).
        const long double p = scheme == Scheme::Srs
                                  ? static_cast<long double>(1.0 / n_subsets)
                                  : static_cast<long double>(sx) /
                                        (static_cast<long double>(total_x) *
                                         static_cast<long double>(n_subsets) *
                                         static_cast<long double>(m) / static_cast<long double>(n));
        if (sx > 0.0) {
            acc += p * static_cast<long double>(sy / sx);
            prob_total += p;
        } else if (scheme == Scheme::Srs) {
            throw std::domain_error("exact_expectation: SRS can select a zero x-sum set");
        }  // Midzuno gives such sets probability 0; skip them

        // Next m-combination of {0..n-1} in lexicographic order.
        std::size_t i = m;
        while (i > 0 && idx[i - 1] == n - m + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    return static_cast<double>(acc / prob_total);
}

}  // namespace sizebias
