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

#ifndef SIZEBIAS_ESTIMATE_HPP
#define SIZEBIAS_ESTIMATE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "sizebias/rng.hpp"

namespace sizebias {

/// Paired records (x_i >= 0, y_i) for ratio estimation of sum(y)/sum(x).
struct Population {
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }
    double true_ratio() const;
    void validate() const;

    /// Two-column CSV (x,y), header row optional.
    static Population from_csv_text(const std::string& text);
};

/// Midzuno's draw: the first index picked with probability proportional to
/// x_i, the remaining m-1 uniformly without replacement from the rest. The
/// resulting set probability is proportional to the set's x-sum.
std::vector<std::size_t> midzuno_sample(const Population& pop, std::size_t m, RngStream& rng);

/// SRS draw: m indices uniformly without replacement.
std::vector<std::size_t> srs_sample(const Population& pop, std::size_t m, RngStream& rng);

/// sum_{j in set} y_j / sum_{j in set} x_j.
double ratio_estimate(const Population& pop, const std::vector<std::size_t>& idx_set);

enum class Scheme { Midzuno, Srs };

/// E[ratio_estimate] by full enumeration over all C(n,m) subsets under the
/// scheme's set law. Enumeration budget: C(n,m) <= 1e6.
double exact_expectation(const Population& pop, std::size_t m, Scheme scheme);

}  // namespace sizebias

#endif  // SIZEBIAS_ESTIMATE_HPP
