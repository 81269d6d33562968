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

#include "sizebias/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace sizebias {

std::string KsReport::to_json_text() const {
    nlohmann::json j;
    j["statistic"] = statistic;
    j["n1"] = n1;
    j["n2"] = n2;
    j["threshold"] = threshold;
    j["pass"] = pass;
    return j.dump();
}

double ks_critical(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_critical: bad alpha");
    return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

double ecdf_sup_distance(std::vector<double> s1, std::vector<double> s2) {
    if (s1.empty() || s2.empty()) throw std::invalid_argument("ks: empty sample");
    std::sort(s1.begin(), s1.end());
    std::sort(s2.begin(), s2.end());
    const double n1 = static_cast<double>(s1.size());
    const double n2 = static_cast<double>(s2.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    while (i < s1.size() || j < s2.size()) {
        double v;
        if (j >= s2.size() || (i < s1.size() && s1[i] <= s2[j]))
            v = s1[i];
        else
            v = s2[j];
        while (i < s1.size() && s1[i] == v) ++i;
        while (j < s2.size() && s2[j] == v) ++j;
        sup = std::max(sup, std::fabs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
    }
    return sup;
}

KsReport ks_two_sample(const std::vector<double>& s1, const std::vector<double>& s2, double alpha) {
    KsReport r;
    r.statistic = ecdf_sup_distance(s1, s2);
    r.n1 = s1.size();
    r.n2 = s2.size();
    const double n1 = static_cast<double>(r.n1), n2 = static_cast<double>(r.n2);
    r.threshold = ks_critical(alpha) * std::sqrt((n1 + n2) / (n1 * n2));
    r.pass = r.statistic < r.threshold;
    return r;
}

std::vector<double> weighted_resample(const std::vector<double>& base,
                                      const std::vector<double>& weights, std::size_t n,
                                      RngStream& rng) {
    if (base.size() != weights.size() || base.empty())
        throw std::invalid_argument("weighted_resample: bad inputs");
    std::vector<double> cum(weights.size());
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] < 0.0) throw std::invalid_argument("weighted_resample: negative weight");
        total += weights[i];
        cum[i] = total;
    }
    if (!(total > 0.0))
        throw std::domain_error("weighted_resample: all weights are zero (mass concentrated at 0)");
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double u = rng.uniform() * total;
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cum.begin()),
                                               base.size() - 1);
        out[k] = base[idx];
    }
    return out;
}

std::vector<double> weighted_star_sample(const Distribution& d, std::size_t n, RngStream& rng) {
    const std::vector<double> draws = d.sample(rng, n);
    return weighted_resample(draws, draws, n, rng);
}

std::vector<double> rejection_star_sample(const Distribution& d, double support_bound,
                                          std::size_t n, RngStream& rng) {
    if (!(support_bound > 0.0))
        throw std::invalid_argument("rejection_star_sample: support bound must be > 0");
    if (!(d.mean() > 0.0))
        throw std::domain_error("rejection_star_sample: " + d.describe() + " has zero mean");
    std::vector<double> out;
    out.reserve(n);
    std::size_t attempts = 0;
    const std::size_t max_attempts = 1000 * n + 1000;
    while (out.size() < n) {
        if (++attempts > max_attempts)
            throw std::domain_error("rejection_star_sample: acceptance rate too low");
        const double x = d.sample(rng);
        if (x > support_bound * (1.0 + 1e-12))
            throw std::invalid_argument("rejection_star_sample: drew a value above the bound");
        if (rng.uniform() * support_bound < x) out.push_back(x);
    }
    return out;
}

std::vector<MomentShiftRow> moment_shift_check(const Distribution& d, int n_max) {
    const Distribution star = size_bias(d);
    std::vector<MomentShiftRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        MomentShiftRow r;
        r.n = n;
        r.star_moment = star.moment(n);
        r.shifted_moment = d.moment(n + 1) / d.moment(1);
        r.residual = std::fabs(r.star_moment - r.shifted_moment);
        rows.push_back(r);
    }
    return rows;
}

std::vector<MomentShiftRow> moment_shift_check_mc(const Distribution& d, int n_max,
                                                  std::size_t n_samples, RngStream& rng) {
    // Self-normalized importance form of the transform:
    // E (X*)^n = sum x_i^(n+1) / sum x_i, with a delta-method standard error.
    const std::vector<double> xs = d.sample(rng, n_samples);
    const double nn = static_cast<double>(n_samples);
    double xbar = 0.0;
    for (double x : xs) xbar += x;
    xbar /= nn;
    if (!(xbar > 0.0)) throw std::domain_error("moment_shift_check_mc: sample mass is all at 0");
    std::vector<MomentShiftRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        MomentShiftRow r;
        r.n = n;
        r.closed_form = false;
        double num = 0.0;
        for (double x : xs) num += std::pow(x, n + 1);
        num /= nn;
        r.star_moment = num / xbar;
        double v = 0.0;
        for (double x : xs) {
            const double resid = std::pow(x, n + 1) - r.star_moment * x;
            v += resid * resid;
        }
        r.se = std::sqrt(v / nn) / (xbar * std::sqrt(nn));
        r.shifted_moment = d.moment(n + 1) / d.moment(1);
        r.residual = std::fabs(r.star_moment - r.shifted_moment);
        rows.push_back(r);
    }
    return rows;
}

double independence_grid_statistic(const std::vector<double>& a, const std::vector<double>& b,
                                   const std::vector<double>& thresholds_a,
                                   const std::vector<double>& thresholds_b) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("independence_grid_statistic: need paired samples");
    const double n = static_cast<double>(a.size());
    double worst = 0.0;
    for (double s : thresholds_a) {
        for (double t : thresholds_b) {
            double joint = 0.0, pa = 0.0, pb = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const bool ia = a[i] > s;
                const bool ib = b[i] > t;
                joint += (ia && ib) ? 1.0 : 0.0;
                pa += ia ? 1.0 : 0.0;
                pb += ib ? 1.0 : 0.0;
            }
            worst = std::max(worst, std::fabs(joint / n - (pa / n) * (pb / n)));
        }
    }
    return worst;
}

}  // namespace sizebias
