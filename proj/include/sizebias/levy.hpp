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

#ifndef SIZEBIAS_LEVY_HPP
#define SIZEBIAS_LEVY_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sizebias/distribution.hpp"
#include "sizebias/grid.hpp"
#include "sizebias/rng.hpp"
#include "sizebias/stats.hpp"

namespace sizebias {

/// A finite nonnegative measure nu on [0, inf): an atom of mass c at 0,
/// discrete atoms at y_j > 0, and an optional gridded density part.
///
/// nu encodes a nonnegative infinitely divisible law X through
/// log phi_X(u) = integral of (e^{iuy} - 1)/y nu(dy), with (e^{iuy}-1)/y
/// read as iu at y = 0. The jump intensity is mu(dy) = nu(dy)/y on (0, inf);
/// its total mass lambda may be infinite (flagged, sampling then requires
/// truncation or a family shortcut). Total mass a = nu([0,inf)) equals E X,
/// and nu/a is the law of the independent increment Y with X* = X + Y.
struct LevyMeasure {
    double c = 0.0;
    std::vector<Atom> atoms;  // (y_j, nu_j), y_j > 0, nu_j > 0
    std::optional<GridFunction> density;

    /// Exact samplers for two densities whose mu is awkward numerically.
    /// GammaSubordinator: p1 = alpha, p2 = t. LogUniform: p1 = total mass a.
    enum class Shortcut { None, GammaSubordinator, LogUniform };
    Shortcut shortcut = Shortcut::None;
    double shortcut_p1 = 0.0;
    double shortcut_p2 = 0.0;

    /// a = c + sum nu_j + integral of the density part. Equals E X.
    double total_mass() const;
    /// mu mass above eps (atoms below eps excluded too).
    double mu_mass_above(double eps) const;
    /// False when the density part makes mu((0,inf)) diverge at 0.
    bool mu_mass_finite() const;
    /// nu((0, eps]): expected mass discarded by truncating mu below eps.
    double truncation_bias(double eps) const;
    bool is_compound_poisson() const { return c == 0.0 && mu_mass_finite(); }

    std::string describe() const;
    static LevyMeasure from_json_text(std::string_view text);
    std::string to_json_text() const;

    // Named measures used throughout the examples and tests.
    static LevyMeasure constant(double c);
    static LevyMeasure single_atom(double mass, double y0);
    /// nu with mass q^j at j = 1, 2, ... (truncated at j_max): X ~ Geom(q).
    static LevyMeasure geometric(double q, int j_max = 60);
    /// nu(dy) = t e^{-alpha y} dy: X ~ Gamma(alpha, t). Carries the gamma
    /// sampler shortcut since mu is the (infinite-activity) gamma subordinator.
    static LevyMeasure exponential_density(double alpha, double t, double y_max = 40.0,
                                           double h = 1.0 / 512.0);
    /// nu = a * uniform(0,1): the Dickman-type measure. Log-uniform shortcut.
    static LevyMeasure uniform_density(double a, double h = 1e-3);
    /// nu with density t on (beta, 1): the Buchstab-type measure.
    static LevyMeasure uniform_window_density(double t, double beta, double h = 1e-3);
};

/// Sampler for the infinitely divisible X encoded by nu: a constant c, plus
/// y_j-scaled independent Poisson counts, plus a compound Poisson draw on the
/// (truncated) density part of mu.
class InfDivSampler {
public:
    InfDivSampler(LevyMeasure nu, double trunc_eps);

    double sample(RngStream& rng) const;
    std::vector<double> sample(RngStream& rng, std::size_t n) const;

    /// Total Poisson intensity of the activity actually simulated.
    double lambda() const { return lambda_total_; }
    /// Bound on E[discarded jumps] = nu((0, eps]).
    double truncation_bias() const { return trunc_bias_; }

private:
    LevyMeasure nu_;
    std::optional<Distribution> gamma_dist_;  // the subordinator shortcut
    double eps_ = 0.0;
    double trunc_bias_ = 0.0;
    double lambda_total_ = 0.0;
    std::vector<double> atom_rates_;       // mu mass per atom
    double dens_lambda_ = 0.0;             // mu mass of the density part
    std::vector<double> dens_cdf_;         // inverse-CDF table for mu density part
    GridFunction dens_mu_;
    bool use_gamma_shortcut_ = false;
    bool use_loguniform_shortcut_ = false;
    double lu_lo_ = 0.0, lu_hi_ = 1.0;     // log-uniform support
};

InfDivSampler build_infdiv(const LevyMeasure& nu, double trunc_eps = 0.0);

/// The increment law Y = nu / a (atom at 0 of mass c/a allowed).
Distribution steutel_increment(const LevyMeasure& nu);

/// phi on a u grid, stored alongside the grid.
struct CharFn {
    std::vector<double> u;
    std::vector<std::complex<double>> phi;
};

/// phi_X from the Levy representation of nu.
CharFn charfn(const LevyMeasure& nu, const std::vector<double>& u_grid);

/// phi of a Distribution (exact atom sums, closed family forms, or Simpson
/// quadrature on a grid).
CharFn charfn_dist(const Distribution& d, const std::vector<double>& u_grid);

/// phi*(u) = E[X e^{iuX}] / a, evaluated directly (no differencing).
CharFn charfn_sizebias(const Distribution& d, const std::vector<double>& u_grid);

enum class DeconvVerdict { Negative, Inconclusive };

/// eta = phi*/phi on the grid. |eta| > 1 anywhere proves no independent
/// nonnegative increment can exist (NEGATIVE); |eta| <= 1 everywhere is only
/// necessary, so the check stays INCONCLUSIVE.
struct DeconvReport {
    double max_abs_eta = 0.0;
    double arg_max = 0.0;
    DeconvVerdict verdict = DeconvVerdict::Inconclusive;
    double u_lo = 0.0, u_hi = 0.0;  // grid actually used after shrinking
    std::string to_json_text() const;
};

DeconvReport deconvolution_check(const Distribution& d, const std::vector<double>& u_grid);
DeconvReport deconvolution_check(const Distribution& d);  // default grid: 2048 pts on [-20,20]

/// Monte Carlo check of the Steutel coupling: X + Y (independent) against the
/// weighted-star oracle, plus the one-more-term compound Poisson route when
/// nu is compound Poisson.
struct SteutelReport {
    KsReport xy_vs_star;                      // X + Y  vs  weighted X*
    std::optional<KsReport> one_more_term;    // S_N + A*  vs  weighted X*
    double sample_mean_x = 0.0;               // MC mean of X, should be ~ a
    double nu_total_mass = 0.0;
    std::string to_json_text() const;
};

SteutelReport verify_steutel(const LevyMeasure& nu, std::size_t n_samples, RngStream& rng,
                             double trunc_eps = 0.0);

/// Sup-norm residual of the density identity
///   f_X(x) = (a/x) * sum_y f_X(x - y) f_Y(y)      (discrete)
///   f_X(x) = (a/x) * integral f_X(x - y) f_Y(y) dy (grid densities)
/// over the support of d. Both laws must be discrete, or both grid densities.
double density_convolution_residual(const Distribution& d, const Distribution& y_law);

}  // namespace sizebias

#endif  // SIZEBIAS_LEVY_HPP
