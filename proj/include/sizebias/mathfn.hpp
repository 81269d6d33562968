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

#ifndef SIZEBIAS_MATHFN_HPP
#define SIZEBIAS_MATHFN_HPP

#include <cstdint>

namespace sizebias::mathfn {

inline constexpr double kEulerGamma = 0.57721566490153286060651209;
inline constexpr double kPi = 3.14159265358979323846264338;

/// Regularized lower incomplete gamma P(a, x) = gamma(a,x)/Gamma(a).
double gamma_p(double a, double x);

/// Regularized incomplete beta I_x(p, q).
double beta_inc(double p, double q, double x);

/// Inverse of the standard normal CDF.
double inv_norm_cdf(double u);

/// Stirling numbers of the second kind, n <= 40.
double stirling2(int n, int k);

/// log of the binomial coefficient C(n, k).
double lchoose(double n, double k);

}  // namespace sizebias::mathfn

#endif  // SIZEBIAS_MATHFN_HPP
