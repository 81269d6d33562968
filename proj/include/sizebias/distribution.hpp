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

#ifndef SIZEBIAS_DISTRIBUTION_HPP
#define SIZEBIAS_DISTRIBUTION_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sizebias/grid.hpp"
#include "sizebias/rng.hpp"

namespace sizebias {

/// One support point of a discrete law (or one mass point of a measure).
struct Atom {
    double value = 0.0;
    double prob = 0.0;
};

enum class Kind { Atoms, Grid, Family, Empirical };

enum class FamilyName {
    Poisson,
    Binomial,
    Bernoulli,
    Beta,
    Geometric,
    NegativeBinomial,
    Exponential,
    Gamma,
    Lognormal,
    ScaledPoisson
};

std::string_view family_to_string(FamilyName f);
FamilyName family_from_string(std::string_view s);

/// A law on [0, inf): discrete atoms, a gridded density, a named parametric
/// family, or an empirical sample. Immutable after construction and safe to
/// share across threads; sampling takes a caller-supplied RngStream.
///
/// Families and their parameter keys:
///   poisson{lambda}  binomial{n,p}  bernoulli{p}  beta{a,b}  geometric{q}
///   negative_binomial{t,q}  exponential{alpha}  gamma{alpha,t}
///   lognormal{mu,sigma}  scaled_poisson{y,lambda}
///
/// The beta family has density proportional to (1-x)^(a-1) x^(b-1) on (0,1),
/// so size biasing maps (a,b) to (a,b+1). geometric{q} puts mass (1-q) q^k on
/// k = 0,1,2,...; gamma{alpha,t} has density alpha^t/Gamma(t) x^(t-1)
/// exp(-alpha x).
class Distribution {
public:
    static Distribution atoms(std::vector<Atom> as);
    static Distribution grid_density(GridFunction f);
    static Distribution family(FamilyName name, std::map<std::string, double> params);
    static Distribution empirical(std::vector<double> values);
    static Distribution degenerate(double c) { return atoms({{c, 1.0}}); }

    // Convenience family constructors.
    static Distribution poisson(double lambda);
    static Distribution binomial(double n, double p);
    static Distribution bernoulli(double p);
    static Distribution beta(double a, double b);
    static Distribution geometric(double q);
    static Distribution negative_binomial(double t, double q);
    static Distribution exponential(double alpha);
    static Distribution gamma(double alpha, double t);
    static Distribution lognormal(double mu, double sigma);
    static Distribution scaled_poisson(double y, double lambda);

    Kind kind() const { return kind_; }
    bool is_discrete() const;

    /// E X, cached at construction. Always finite and >= 0.
    double mean() const { return mean_; }

    /// E X^n by exact summation (atoms/empirical), trapezoid quadrature
    /// (grid) or closed form (families).
    double moment(int n) const;

    /// F(t) = P(X <= t).
    double cdf(double t) const;

    /// F^{-1}(u) = sup{ t : F(t) <= u }, for u in (0,1).
    double quantile(double u) const;

    /// pmf at an atom value (discrete kinds) or density (grid / continuous
    /// family). Used by the convolution-identity checks.
    double mass_at(double x) const;

    double sample(RngStream& rng) const;
    std::vector<double> sample(RngStream& rng, std::size_t n) const;

    /// Discrete representations as an explicit atom list. Discrete families
    /// expand at construction, truncated once the tail mass falls below 1e-15.
    const std::vector<Atom>& as_atoms() const;

    /// Continuous representations tabulated on a uniform grid [0, x_max].
    GridFunction as_grid(double h, double x_max) const;

    /// Support upper bound suitable for gridding: exact for bounded laws,
    /// quantile(1 - 1e-12) otherwise.
    double support_hint() const;

    FamilyName family_name() const;
    double param(const std::string& key) const;
    const std::map<std::string, double>& params() const;
    const GridFunction& grid() const;
    const std::vector<double>& empirical_values() const;

    std::string describe() const;
    static Distribution from_json_text(std::string_view text);
    std::string to_json_text() const;

private:
    Distribution() = default;
    void finalize();

    Kind kind_ = Kind::Atoms;
    double mean_ = 0.0;

    // Atoms / Empirical share the sorted-atom machinery.
    std::vector<Atom> atoms_;
    std::vector<double> atom_cum_;
    std::vector<double> empirical_;

    GridFunction grid_;
    std::vector<double> grid_cdf_;

    FamilyName fam_ = FamilyName::Poisson;
    std::map<std::string, double> params_;
    // Discrete families expand eagerly so instances stay immutable and
    // shareable across threads.
    std::shared_ptr<const std::vector<Atom>> fam_atoms_;
    std::shared_ptr<const std::vector<double>> fam_cum_;
    void expand_family_atoms();
};

/// One draw of (X, X*, Y = X* - X) under a coupling.
struct CoupledSample {
    double x = 0.0;
    double x_star = 0.0;
    double y = 0.0;
};

/// The size-bias transform: dF(x) -> x dF(x) / E X. Rejects zero-mean input.
/// Families route through the closed-form catalogue where one exists.
Distribution size_bias(const Distribution& d);

/// E X^n of d (free-function form of Distribution::moment).
double moment(const Distribution& d, int n);

/// Quantile coupling: X = F^{-1}(U), X* = (F*)^{-1}(U) from one uniform U.
/// Guarantees x_star >= x.
CoupledSample quantile_couple(const Distribution& d, RngStream& rng);

/// Reusable form of quantile_couple: the size-biased law is built once.
class QuantileCoupler {
public:
    explicit QuantileCoupler(Distribution d);
    CoupledSample draw(RngStream& rng) const;
    const Distribution& biased() const { return star_; }

private:
    Distribution d_;
    Distribution star_;
};

/// n i.i.d. draws, deterministic given the stream.
std::vector<double> sample(const Distribution& d, RngStream& rng, std::size_t n);

}  // namespace sizebias

#endif  // SIZEBIAS_DISTRIBUTION_HPP
