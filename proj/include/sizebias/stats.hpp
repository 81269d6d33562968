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

#ifndef SIZEBIAS_STATS_HPP
#define SIZEBIAS_STATS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "sizebias/distribution.hpp"
#include "sizebias/rng.hpp"

namespace sizebias {

/// Two-sample Kolmogorov-Smirnov result. pass <=> statistic < threshold,
/// threshold = c(alpha) * sqrt((n1+n2)/(n1*n2)).
struct KsReport {
    double statistic = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double threshold = 0.0;
    bool pass = false;

    std::string to_json_text() const;
};

/// Asymptotic KS critical coefficient c(alpha) = sqrt(-ln(alpha/2)/2);
/// c(0.01) = 1.628.
double ks_critical(double alpha);

KsReport ks_two_sample(const std::vector<double>& s1, const std::vector<double>& s2,
                       double alpha = 0.01);

/// Sup distance between the ECDFs of two samples (the KS statistic).
double ecdf_sup_distance(std::vector<double> s1, std::vector<double> s2);

/// Multinomial resampling of `base` with the given nonnegative weights.
std::vector<double> weighted_resample(const std::vector<double>& base,
                                      const std::vector<double>& weights, std::size_t n,
                                      RngStream& rng);

/// The neutral X* oracle: draw n from d, then resample with weights
/// proportional to the drawn values. Independent of every closed-form rule.
std::vector<double> weighted_star_sample(const Distribution& d, std::size_t n, RngStream& rng);

/// Rejection form of the oracle for laws with a declared support bound M:
/// draws from d are accepted with probability x/M. Draws above M are an error.
std::vector<double> rejection_star_sample(const Distribution& d, double support_bound,
                                          std::size_t n, RngStream& rng);

/// One row of the moment-shift diagnostic: E (X*)^n versus E X^(n+1) / E X.
struct MomentShiftRow {
    int n = 0;
    double star_moment = 0.0;
    double shifted_moment = 0.0;
    double residual = 0.0;
    double se = 0.0;  // 0 for the closed-form route
    bool closed_form = true;
};

/// Closed-form route: moments of size_bias(d) against shifted moments of d.
std::vector<MomentShiftRow> moment_shift_check(const Distribution& d, int n_max);

/// Monte Carlo route via the weighted-star oracle, with standard errors.
std::vector<MomentShiftRow> moment_shift_check_mc(const Distribution& d, int n_max,
                                                  std::size_t n_samples, RngStream& rng);

/// max over the threshold grid of |P(a>s, b>t) - P(a>s) P(b>t)|.
double independence_grid_statistic(const std::vector<double>& a, const std::vector<double>& b,
                                   const std::vector<double>& thresholds_a,
                                   const std::vector<double>& thresholds_b);

}  // namespace sizebias

#endif  // SIZEBIAS_STATS_HPP
