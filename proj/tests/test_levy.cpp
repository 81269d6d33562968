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

#include <cmath>
#include <complex>

#include "doctest.h"
#include "sizebias/levy.hpp"
#include "sizebias/rules.hpp"

using namespace sizebias;
using cplx = std::complex<double>;

TEST_CASE("levy measure bookkeeping") {
    const LevyMeasure geo = LevyMeasure::geometric(0.5);
    CHECK(geo.total_mass() == doctest::Approx(1.0).epsilon(1e-12));  // q/(1-q)
    CHECK(geo.mu_mass_finite());
    CHECK(geo.mu_mass_above(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(geo.is_compound_poisson());

    const LevyMeasure expnu = LevyMeasure::exponential_density(2.0, 3.0);
    CHECK(expnu.total_mass() == doctest::Approx(1.5).epsilon(1e-6));  // t/alpha
    CHECK_FALSE(expnu.mu_mass_finite());
    CHECK_FALSE(expnu.is_compound_poisson());

    const LevyMeasure uni = LevyMeasure::uniform_density(1.0);
    CHECK(uni.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(uni.mu_mass_finite());
    CHECK(uni.truncation_bias(1e-3) == doctest::Approx(1e-3).epsilon(1e-9));

    const LevyMeasure atom = LevyMeasure::single_atom(3.0, 2.0);
    CHECK(atom.total_mass() == 3.0);
    CHECK(atom.mu_mass_above(0.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("levy JSON literals round trip") {
    const LevyMeasure nu = LevyMeasure::from_json_text(
        R"({"c":0.5,"atoms":[[1,0.5],[2,0.25]]})");
    CHECK(nu.c == 0.5);
    CHECK(nu.total_mass() == doctest::Approx(1.25).epsilon(1e-12));
    const LevyMeasure back = LevyMeasure::from_json_text(nu.to_json_text());
    CHECK(back.total_mass() == doctest::Approx(nu.total_mass()).epsilon(1e-12));
    CHECK_THROWS_AS(LevyMeasure::from_json_text(R"({"c":-1})"), std::invalid_argument);
    CHECK_THROWS_AS(LevyMeasure::from_json_text(R"({"atoms":[[0,1]]})"), std::invalid_argument);
}

TEST_CASE("single-atom nu samples a scaled Poisson") {
    const double mass = 3.0, y0 = 2.0;  // X = y0 Po(mass/y0)
    const InfDivSampler s = build_infdiv(LevyMeasure::single_atom(mass, y0));
    RngStream rng = RngStream::substream(42, "infdiv-atom", 0);
    const auto draws = s.sample(rng, 50000);
    double mean = 0.0;
    for (double v : draws) {
        mean += v;
        CHECK(std::fabs(v / y0 - std::round(v / y0)) < 1e-12);  // lattice check
    }
    mean /= static_cast<double>(draws.size());
    CHECK(std::fabs(mean - mass) < 4.0 * y0 * std::sqrt(1.5 / 50000.0));
    RngStream rng2 = RngStream::substream(42, "infdiv-atom", 1);
    const auto want = Distribution::scaled_poisson(y0, mass / y0).sample(rng2, 50000);
    CHECK(ks_two_sample(draws, want).pass);
}

TEST_CASE("geometric nu samples a geometric law") {
    const InfDivSampler s = build_infdiv(LevyMeasure::geometric(0.5));
    RngStream rng = RngStream::substream(42, "infdiv-geo", 0);
    const auto draws = s.sample(rng, 100000);
    RngStream rng2 = RngStream::substream(42, "infdiv-geo", 1);
    const auto want = Distribution::geometric(0.5).sample(rng2, 100000);
    CHECK(ks_two_sample(draws, want).pass);

    // Compound Poisson mass at zero: P(X=0) = e^{-lambda} = beta^t = 1/2.
    double zeros = 0.0;
    for (double v : draws)
        if (v == 0.0) zeros += 1.0;
    zeros /= static_cast<double>(draws.size());
    CHECK(std::fabs(zeros - 0.5) < 4.0 * std::sqrt(0.25 / 100000.0));
}

TEST_CASE("exponential-density nu: generic truncated route samples Exp(alpha)") {
    const double alpha = 2.0;
    // Hand-built density nu(dy) = e^{-alpha y} dy without the family shortcut,
    // so this exercises the truncated compound Poisson path.
    LevyMeasure nu;
    const double h = 1.0 / 512.0;
    const auto n = static_cast<std::size_t>(std::round(25.0 / h)) + 1;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(-alpha * static_cast<double>(i) * h);
    nu.density = GridFunction(0.0, h, std::move(f));

    CHECK_THROWS_AS(build_infdiv(nu, 0.0), std::domain_error);
    const InfDivSampler s = build_infdiv(nu, 1e-4);
    CHECK(s.truncation_bias() == doctest::Approx(1e-4).epsilon(1e-2));
    RngStream rng = RngStream::substream(42, "infdiv-expgrid", 0);
    const auto draws = s.sample(rng, 100000);
    RngStream rng2 = RngStream::substream(42, "infdiv-expgrid", 1);
    const auto want = Distribution::exponential(alpha).sample(rng2, 100000);
    CHECK(ks_two_sample(draws, want).pass);
}

TEST_CASE("gamma shortcut bypasses truncation") {
    const InfDivSampler s = build_infdiv(LevyMeasure::exponential_density(1.0, 2.0));
    CHECK(s.truncation_bias() == 0.0);
    RngStream rng = RngStream::substream(42, "infdiv-gamma", 0);
    const auto draws = s.sample(rng, 100000);
    RngStream rng2 = RngStream::substream(42, "infdiv-gamma", 1);
    const auto want = Distribution::gamma(1.0, 2.0).sample(rng2, 100000);
    CHECK(ks_two_sample(draws, want).pass);
}

TEST_CASE("steutel increment laws") {
    // Geometric nu: Y = 1 + Geom(q).
    const Distribution y_geo = steutel_increment(LevyMeasure::geometric(0.5));
    const auto atoms = y_geo.as_atoms();
    for (int j = 1; j <= 20; ++j) {
        double p = 0.0;
        for (const Atom& at : atoms)
            if (at.value == j) p = at.prob;
        CHECK(p == doctest::Approx(0.5 * std::pow(0.5, j - 1.0)).epsilon(1e-10));
    }
    // Exponential nu: Y ~ Exp(alpha).
    const Distribution y_exp = steutel_increment(LevyMeasure::exponential_density(1.5, 2.0));
    const Distribution want = Distribution::exponential(1.5);
    for (double t : {0.2, 0.5, 1.0, 2.0})
        CHECK(y_exp.cdf(t) == doctest::Approx(want.cdf(t)).epsilon(1e-4));
    // Pure drift: Y = 0 and X = c.
    const Distribution y0 = steutel_increment(LevyMeasure::constant(2.0));
    CHECK(y0.mean() == 0.0);
    CHECK(y0.cdf(0.0) == 1.0);
    RngStream rng(3);
    const InfDivSampler xc = build_infdiv(LevyMeasure::constant(2.0));
    for (int i = 0; i < 10; ++i) CHECK(xc.sample(rng) == 2.0);
}

TEST_CASE("charfn of a Poisson-type nu matches the closed form") {
    const double lambda = 2.0;
    const LevyMeasure nu = LevyMeasure::single_atom(lambda, 1.0);  // nu({1}) = lambda
    const auto u = make_ugrid(-10, 10, 101);
    const CharFn phi = charfn(nu, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const cplx want = std::exp(lambda * (std::exp(cplx(0, u[i])) - 1.0));
        CHECK(std::abs(phi.phi[i] - want) < 1e-12);
    }
    CHECK(std::abs(charfn(nu, {0.0, 1.0}).phi[0] - 1.0) < 1e-15);
}

TEST_CASE("charfn quadrature matches the Gamma closed form") {
    const double alpha = 1.5, t = 2.0;
    const LevyMeasure nu = LevyMeasure::exponential_density(alpha, t);
    const auto u = make_ugrid(-10, 10, 81);
    const CharFn phi = charfn(nu, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const cplx want = std::pow(1.0 - cplx(0, u[i]) / alpha, -t);
        CHECK(std::abs(phi.phi[i] - want) < 1e-6);
    }
}

TEST_CASE("charfn_sizebias: direct expectation routes") {
    const auto u = make_ugrid(-20, 20, 41);
    // Poisson: phi* = e^{iu} phi.
    const Distribution po = Distribution::poisson(3.0);
    const CharFn phi = charfn_dist(po, u);
    const CharFn phis = charfn_sizebias(po, u);
    for (std::size_t i = 0; i < u.size(); ++i)
        CHECK(std::abs(phis.phi[i] - std::exp(cplx(0, u[i])) * phi.phi[i]) < 1e-12);

    // Finite atom list: exact weighted sum oracle.
    const Distribution table = Distribution::atoms({{1, .4}, {2, .3}, {3, .2}, {4, .1}});
    const CharFn ts = charfn_sizebias(table, u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        cplx want = 0.0;
        for (const Atom& at : table.as_atoms())
            want += at.value * at.prob * std::exp(cplx(0, u[i] * at.value)) / 2.0;
        CHECK(std::abs(ts.phi[i] - want) < 1e-14);
    }
    CHECK(std::abs(charfn_sizebias(table, {0.0, 1.0}).phi[0] - 1.0) < 1e-14);
}

TEST_CASE("phi* = phi eta for geometric, exponential and atomic nu") {
    const auto u = make_ugrid(-20, 20, 161);
    struct Case {
        LevyMeasure nu;
        Distribution x;
    };
    const Case cases[] = {
        {LevyMeasure::geometric(0.5), Distribution::geometric(0.5)},
        {LevyMeasure::exponential_density(1.0, 1.0), Distribution::exponential(1.0)},
        {LevyMeasure::single_atom(2.0, 0.5), Distribution::scaled_poisson(0.5, 4.0)},
    };
    for (const Case& cs : cases) {
        const CharFn phi = charfn_dist(cs.x, u);
        const CharFn phis = charfn_sizebias(cs.x, u);
        const CharFn eta = charfn_dist(steutel_increment(cs.nu), u);
        for (std::size_t i = 0; i < u.size(); ++i)
            CHECK(std::abs(phis.phi[i] - phi.phi[i] * eta.phi[i]) < 1e-6);
    }
}

TEST_CASE("deconvolution certificates") {
    // Binomial with p != 1/2: |eta| peaks at 1/|q-p| near u = pi.
    const DeconvReport bin = deconvolution_check(Distribution::binomial(4, 0.3));
    CHECK(bin.verdict == DeconvVerdict::Negative);
    CHECK(bin.max_abs_eta == doctest::Approx(2.5).epsilon(1e-3));

    // p = 1/2: phi vanishes at pi, the grid shrinks, the verdict stands.
    const DeconvReport half = deconvolution_check(Distribution::binomial(4, 0.5));
    CHECK(half.verdict == DeconvVerdict::Negative);
    CHECK(half.u_hi < 3.1415926536);

    const DeconvReport uni = deconvolution_check(Distribution::beta(1, 1));
    CHECK(uni.verdict == DeconvVerdict::Negative);

    // Poisson: eta = e^{iu} exactly, |eta| = 1 everywhere.
    const DeconvReport po = deconvolution_check(Distribution::poisson(2.0));
    CHECK(po.verdict == DeconvVerdict::Inconclusive);
    CHECK(po.max_abs_eta == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certificates never fire on the infinitely divisible catalogue") {
    for (const Distribution& d :
         {Distribution::poisson(1.3), Distribution::geometric(0.7),
          Distribution::negative_binomial(2.5, 0.4), Distribution::exponential(1.3),
          Distribution::gamma(0.8, 2.2), Distribution::scaled_poisson(0.7, 2.0),
          Distribution::lognormal(0.0, 0.5)}) {
        CHECK(deconvolution_check(d).verdict == DeconvVerdict::Inconclusive);
    }
}

TEST_CASE("a shifted Poisson still admits an independent Bernoulli increment") {
    // X = 1 + W with W Poisson. The Bernoulli(lambda/(1+lambda)) increment
    // reproduces X* exactly, and the certificate cannot rule it out: this law
    // is infinitely divisible with drift c = 1 and a unit jump of mass lambda.
    const double lambda = 1.7;
    const Distribution w = Distribution::poisson(lambda);
    std::vector<Atom> shifted;
    for (const Atom& at : w.as_atoms()) shifted.push_back({at.value + 1.0, at.prob});
    const Distribution x = Distribution::atoms(shifted);

    const auto star = size_bias(x).as_atoms();
    LawDescriptor sum;  // X + Bernoulli(lambda/(1+lambda))
    sum.terms.push_back(x);
    sum.terms.push_back(Distribution::bernoulli(lambda / (1.0 + lambda)));
    const auto viasum = sum.to_atoms(1e-14);
    for (const Atom& at : star) {
        double p = 0.0;
        for (const Atom& vs : viasum)
            if (std::fabs(vs.value - at.value) < 1e-9) p = vs.prob;
        CHECK(p == doctest::Approx(at.prob).epsilon(1e-10));
    }

    const DeconvReport rep = deconvolution_check(x);
    CHECK(rep.verdict == DeconvVerdict::Inconclusive);

    // The same law through its Levy representation: c = 1, nu({1}) = lambda.
    LevyMeasure nu = LevyMeasure::single_atom(lambda, 1.0);
    nu.c = 1.0;
    RngStream rng = RngStream::substream(42, "shifted-poisson", 0);
    const auto draws = build_infdiv(nu).sample(rng, 100000);
    RngStream rng2 = RngStream::substream(42, "shifted-poisson", 1);
    const auto want = x.sample(rng2, 100000);
    CHECK(ks_two_sample(draws, want).pass);
}

TEST_CASE("verify_steutel across the example measures") {
    RngStream r1 = RngStream::substream(42, "steutel-geometric", 0);
    const SteutelReport geo = verify_steutel(LevyMeasure::geometric(0.5), 100000, r1);
    CHECK(geo.xy_vs_star.pass);
    REQUIRE(geo.one_more_term.has_value());
    CHECK(geo.one_more_term->pass);
    CHECK(std::fabs(geo.sample_mean_x - geo.nu_total_mass) <
          4.0 * std::sqrt(6.0 / 100000.0));  // var of Geom(1/2) = 2

    RngStream r2 = RngStream::substream(42, "steutel-atom", 0);
    const SteutelReport atom = verify_steutel(LevyMeasure::single_atom(3.0, 2.0), 100000, r2);
    CHECK(atom.xy_vs_star.pass);
    REQUIRE(atom.one_more_term.has_value());
    CHECK(atom.one_more_term->pass);

    RngStream r3 = RngStream::substream(42, "steutel-exponential", 0);
    const SteutelReport ex = verify_steutel(LevyMeasure::exponential_density(1.0, 1.0), 100000, r3);
    CHECK(ex.xy_vs_star.pass);
    CHECK_FALSE(ex.one_more_term.has_value());  // not compound Poisson
}

TEST_CASE("biased exponential matches Gamma(alpha,2) through the oracle") {
    RngStream r1 = RngStream::substream(42, "ex5b", 0);
    RngStream r2 = RngStream::substream(42, "ex5b", 1);
    const auto star = weighted_star_sample(Distribution::exponential(1.0), 100000, r1);
    const auto want = Distribution::gamma(1.0, 2.0).sample(r2, 100000);
    CHECK(ks_two_sample(star, want).pass);
}

TEST_CASE("finite-type construction equals the S_N form") {
    // nu with atoms {1: 1/2, 2: 1/4}; route 2 rebuilt by hand from
    // P(A = y_j) proportional to nu_j / y_j.
    LevyMeasure nu;
    nu.atoms = {{1.0, 0.5}, {2.0, 0.25}};
    const double l1 = 0.5, l2 = 0.125, lambda = l1 + l2;
    RngStream r1 = RngStream::substream(42, "fintype", 0);
    const auto route1 = build_infdiv(nu).sample(r1, 100000);

    RngStream r2 = RngStream::substream(42, "fintype", 1);
    const Distribution a_law = Distribution::atoms({{1.0, l1 / lambda}, {2.0, l2 / lambda}});
    std::vector<double> route2(100000);
    for (double& v : route2) {
        const auto n = static_cast<int>(Distribution::poisson(lambda).sample(r2));
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += a_law.sample(r2);
        v = s;
    }
    CHECK(ks_two_sample(route1, route2).pass);

    // A* has the law of Y (the increment).
    RngStream r3 = RngStream::substream(42, "fintype", 2);
    const auto a_draws = a_law.sample(r3, 100000);
    const auto a_star = weighted_resample(a_draws, a_draws, 100000, r3);
    RngStream r4 = RngStream::substream(42, "fintype", 3);
    const auto y_draws = steutel_increment(nu).sample(r4, 100000);
    CHECK(ks_two_sample(a_star, y_draws).pass);
}

TEST_CASE("density convolution residuals") {
    // Exact discrete identity for the geometric pair.
    const Distribution x = Distribution::geometric(0.5);
    LawDescriptor y;
    y.shift = 1.0;
    y.terms.push_back(Distribution::geometric(0.5));
    CHECK(density_convolution_residual(x, y.to_distribution()) < 1e-12);

    // Grid identity for the exponential pair.
    const Distribution e = Distribution::exponential(1.0);
    const Distribution ge = Distribution::grid_density(e.as_grid(1e-3, 25.0));
    CHECK(density_convolution_residual(ge, ge) < 5e-3);

    // Negative control: a mismatched pair leaves a visible residual.
    const Distribution bin = Distribution::binomial(4, 0.5);
    CHECK(density_convolution_residual(bin, y.to_distribution()) > 0.05);

    CHECK_THROWS_AS(density_convolution_residual(x, ge), std::invalid_argument);
}
