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

#ifndef SIZEBIAS_RULES_HPP
#define SIZEBIAS_RULES_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sizebias/distribution.hpp"

namespace sizebias {

/// A law written as an independent sum: a nonnegative constant shift plus
/// independent summands. Catalogue results come in this form so identities
/// like "Geom(q)* = Geom(q) + 1 + Geom(q)" stay checkable symbolically.
struct LawDescriptor {
    double shift = 0.0;
    std::vector<Distribution> terms;

    double mean() const;
    /// E (shift + sum of terms)^n via the independent-sum moment expansion.
    double moment(int n) const;
    bool discrete() const;
    double sample(RngStream& rng) const;

    /// Exact pmf by convolution, truncated once cumulative mass reaches
    /// 1 - mass_tol; the dropped tail is reported through tail_mass.
    std::vector<Atom> to_atoms(double mass_tol = 1e-12, double* tail_mass = nullptr) const;

    /// Collapse to a plain Distribution: a single unshifted term passes
    /// through, discrete composites convolve to atoms.
    Distribution to_distribution() const;

    std::string describe() const;
};

/// One entry of the sum-rule mixture: with probability `weight` the biased
/// sum looks like S_i + X_i* (all other summands plus the biased one).
struct MixtureComponent {
    double weight = 0.0;
    std::size_t index = 0;
    LawDescriptor law;
};

/// Mixture representation of (X_1 + ... + X_n)*: pick summand I with
/// probability proportional to its mean, size bias only that one.
struct MixtureRep {
    std::vector<MixtureComponent> components;

    double sample(RngStream& rng) const;
    /// Exact mixture pmf (discrete components only).
    std::vector<Atom> to_atoms(double mass_tol = 1e-12) const;
};

MixtureRep sum_bias(const std::vector<Distribution>& ds);

/// (X_1 + ... + X_n)* for i.i.d. summands: X_1* + X_2 + ... + X_n.
LawDescriptor iid_sum_bias(const Distribution& d, int n);

/// (X_1 X_2 ... X_n)*: every factor is size biased, unlike the sum rule.
struct ProductLaw {
    std::vector<Distribution> factors;  // already size biased
    double sample(RngStream& rng) const;
    /// Exact pmf over all outcome combinations (small finite supports only).
    std::vector<Atom> to_atoms() const;
};

ProductLaw product_bias(const std::vector<Distribution>& ds);

/// Closed-form size-bias catalogue:
///   Po(l)        -> Po(l) + 1                Binom(n,p) -> Binom(n-1,p) + 1
///   Bernoulli(p) -> 1                        Beta(a,b)  -> Beta(a,b+1)
///   Geom(q)      -> Geom(q) + 1 + Geom(q)    NegBin(t,q)-> NegBin(t,q) + 1 + Geom(q)
///   Exp(al)      -> Gamma(al,2)              Gamma(al,t)-> Gamma(al,t+1)
///   Lognormal(mu,sg) -> Lognormal(mu+sg^2,sg)  y*Po(l) -> y*Po(l) + y
LawDescriptor catalogue_bias(FamilyName name, const std::map<std::string, double>& params);

/// The law of y X for y > 0. Commutes with size biasing: (yX)* = y(X*).
Distribution scale(const Distribution& d, double y);

}  // namespace sizebias

#endif  // SIZEBIAS_RULES_HPP
