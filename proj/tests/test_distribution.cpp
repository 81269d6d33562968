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

#include "doctest.h"
#include "sizebias/distribution.hpp"
#include "sizebias/stats.hpp"

using namespace sizebias;

namespace {

const Distribution kTable = Distribution::atoms({{1, .4}, {2, .3}, {3, .2}, {4, .1}});

// Independent oracle: the transform applied atom by atom, x p(x) / E X.
std::vector<Atom> bias_by_hand(const std::vector<Atom>& in) {
    double a = 0.0;
    for (const Atom& at : in) a += at.value * at.prob;
    std::vector<Atom> out;
    for (const Atom& at : in)
        if (at.value > 0.0) out.push_back({at.value, at.value * at.prob / a});
    return out;
}

}  // namespace

TEST_CASE("size_bias matches the cafeteria table") {
    const auto got = size_bias(kTable).as_atoms();
    const std::vector<Atom> want{{1, .2}, {2, .3}, {3, .3}, {4, .2}};
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].value == want[i].value);
        CHECK(std::fabs(got[i].prob - want[i].prob) <= 1e-12);
    }
}

TEST_CASE("size_bias fixed point and zero-atom removal") {
    const Distribution deg = Distribution::degenerate(2.5);
    const auto got = size_bias(deg).as_atoms();
    REQUIRE(got.size() == 1);
    CHECK(got[0].value == 2.5);
    CHECK(got[0].prob == 1.0);

    const Distribution d = Distribution::atoms({{0, .5}, {2, .5}});
    const auto expect = bias_by_hand(d.as_atoms());
    const auto biased = size_bias(d).as_atoms();
    REQUIRE(biased.size() == 1);
    CHECK(biased[0].value == 2.0);
    CHECK(biased[0].prob == doctest::Approx(expect[0].prob).epsilon(1e-14));
}

TEST_CASE("size_bias rejects zero or undefined mean") {
    CHECK_THROWS_AS(size_bias(Distribution::degenerate(0.0)), std::domain_error);
    CHECK_THROWS_WITH_AS(size_bias(Distribution::atoms({{0.0, 1.0}})),
                         doctest::Contains("atoms{0:1}"), std::domain_error);
}

TEST_CASE("size_bias on a grid density renormalizes and kills mass at zero") {
    const auto n = std::size_t(2001);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(-static_cast<double>(i) * 20.0 / 2000.0);
    GridFunction g(0.0, 20.0 / 2000.0, std::move(f));
    const double total = g.integral();
    for (double& v : g.values) v /= total;
    const Distribution d = Distribution::grid_density(g);
    const Distribution star = size_bias(d);
    CHECK(star.grid().values[0] == 0.0);
    CHECK(star.cdf(0.0) == 0.0);
    CHECK(star.grid().integral() == doctest::Approx(1.0).epsilon(1e-12));
    // x e^-x is the Gamma(1,2) density; check a mid-grid point.
    CHECK(star.mass_at(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));
}

TEST_CASE("size_bias on empirical data weights values") {
    const Distribution d = Distribution::empirical({0, 1, 1, 3});
    const auto got = size_bias(d).as_atoms();
    // weights proportional to value times multiplicity: 1*2 and 3*1
    REQUIRE(got.size() == 2);
    CHECK(got[0].value == 1.0);
    CHECK(got[0].prob == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(got[1].prob == doctest::Approx(0.6).epsilon(1e-14));
}

TEST_CASE("moments: exact sums, closed forms and quadrature") {
    CHECK(moment(Distribution::poisson(1.0), 2) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(moment(kTable, 0) == 1.0);
    CHECK(moment(Distribution::gamma(2.0, 3.0), 0) == 1.0);
    CHECK(moment(kTable, 1) == doctest::Approx(2.0).epsilon(1e-14));

    // Gridded exponential: trapezoid against the closed form n!/alpha^n.
    const Distribution e = Distribution::exponential(1.0);
    const Distribution ge = Distribution::grid_density(e.as_grid(1e-3, 30.0));
    for (int n = 1; n <= 3; ++n)
        CHECK(ge.moment(n) == doctest::Approx(e.moment(n)).epsilon(1e-4));

    CHECK_THROWS_AS(moment(kTable, -1), std::invalid_argument);
}

TEST_CASE("family moments match their atom expansions") {
    for (const Distribution& d :
         {Distribution::poisson(2.5), Distribution::binomial(7, 0.4), Distribution::geometric(0.6),
          Distribution::negative_binomial(2.5, 0.3), Distribution::scaled_poisson(1.5, 2.0)}) {
        const Distribution atoms = Distribution::atoms(d.as_atoms());
        for (int n = 1; n <= 4; ++n)
            CHECK(d.moment(n) == doctest::Approx(atoms.moment(n)).epsilon(1e-9));
    }
}

TEST_CASE("quantile uses the sup convention") {
    CHECK(kTable.quantile(0.05) == 1.0);
    CHECK(kTable.quantile(0.3999) == 1.0);
    CHECK(kTable.quantile(0.9999) == 4.0);

    // Exact boundary behavior, probed with dyadic probabilities so the
    // cumulative sums are exact: F(t) <= u is allowed by the sup.
    const Distribution dyadic = Distribution::atoms({{1, .25}, {2, .25}, {3, .5}});
    CHECK(dyadic.quantile(0.25) == 2.0);
    CHECK(dyadic.quantile(0.5) == 3.0);
    CHECK(dyadic.quantile(0.2499) == 1.0);

    const Distribution star = size_bias(kTable);
    CHECK(star.quantile(0.05) == 1.0);  // the coupled pair (1,1) at u = .05
}

TEST_CASE("quantile coupling: y >= 0 and x_star = x + y") {
    RngStream rng(1234);
    for (const Distribution& d :
         {kTable, Distribution::poisson(3.0), Distribution::exponential(1.0),
          Distribution::gamma(2.0, 1.5)}) {
        const QuantileCoupler coupler(d);
        for (int i = 0; i < 5000; ++i) {
            const CoupledSample s = coupler.draw(rng);
            CHECK(s.y >= 0.0);
            CHECK(s.x_star >= 0.0);
            CHECK(s.x_star - s.x == s.y);
        }
    }
    const QuantileCoupler deg(Distribution::degenerate(2.0));
    const CoupledSample s = deg.draw(rng);
    CHECK(s.x == 2.0);
    CHECK(s.x_star == 2.0);
    CHECK(s.y == 0.0);
}

TEST_CASE("coupled x_star has the size-biased law (KS)") {
    RngStream rng = RngStream::substream(42, "couple-ks", 0);
    const QuantileCoupler coupler(kTable);
    std::vector<double> stars(100000);
    for (double& v : stars) v = coupler.draw(rng).x_star;
    RngStream rng2 = RngStream::substream(42, "couple-ks", 1);
    const auto direct = size_bias(kTable).sample(rng2, 100000);
    CHECK(ks_two_sample(stars, direct).pass);
}

TEST_CASE("sampling: determinism, degenerate, CLT band, empirical support") {
    const Distribution deg = Distribution::degenerate(7.0);
    RngStream r1(9), r2(9);
    const auto a = deg.sample(r1, 3);
    CHECK(a == std::vector<double>{7.0, 7.0, 7.0});

    const Distribution po = Distribution::poisson(2.0);
    const auto s1 = po.sample(r2, 100000);
    double mean = 0.0;
    for (double v : s1) mean += v;
    mean /= static_cast<double>(s1.size());
    CHECK(std::fabs(mean - 2.0) <= 3.0 * std::sqrt(2.0 / 100000.0));

    RngStream r3(10), r4(10);
    CHECK(po.sample(r3, 50) == po.sample(r4, 50));

    const Distribution emp = Distribution::empirical({1.5, 2.5, 2.5, 9.0});
    RngStream r5(11);
    for (double v : emp.sample(r5, 200)) CHECK((v == 1.5 || v == 2.5 || v == 9.0));
}

TEST_CASE("no mass at zero and stochastic dominance after biasing") {
    std::vector<Distribution> battery = {
        kTable,
        Distribution::atoms({{0, .7}, {1, .2}, {5, .1}}),
        Distribution::empirical({0, 0, 1, 2}),
        Distribution::poisson(1.5),
        Distribution::geometric(0.3),
        Distribution::beta(1, 1),
        Distribution::exponential(2.0),
        Distribution::lognormal(0.0, 1.0),
    };
    {
        std::vector<double> f(1001);
        for (std::size_t i = 0; i <= 1000; ++i)
            f[i] = 2.0 * std::exp(-2.0 * static_cast<double>(i) * 0.01);
        GridFunction g(0.0, 0.01, std::move(f));
        const double tot = g.integral();
        for (double& v : g.values) v /= tot;
        battery.push_back(Distribution::grid_density(std::move(g)));
    }
    for (const Distribution& d : battery) {
        const Distribution star = size_bias(d);
        CHECK(star.cdf(0.0) == 0.0);
        for (int j = 1; j < 100; ++j) {
            const double t = d.quantile(static_cast<double>(j) / 100.0);
            CHECK(star.cdf(t) <= d.cdf(t) + 1e-12);
        }
    }
}

TEST_CASE("vanishing-mean family: biased mass escapes to infinity") {
    // P(X_n = n) = 1/n^2, P(X_n = 0) = 1 - 1/n^2: the means shrink like 1/n,
    // yet X_n* is the constant n -- the transform moves all mass to the
    // single contributing value, however rare it was.
    for (double n : {2.0, 10.0, 100.0, 1000.0}) {
        const Distribution d =
            Distribution::atoms({{0.0, 1.0 - 1.0 / (n * n)}, {n, 1.0 / (n * n)}});
        CHECK(d.mean() == doctest::Approx(1.0 / n).epsilon(1e-12));
        const auto star = size_bias(d).as_atoms();
        REQUIRE(star.size() == 1);
        CHECK(star[0].value == n);
        CHECK(star[0].prob == 1.0);
    }
}

TEST_CASE("weighted-ECDF oracle agrees with size_bias samples") {
    for (const Distribution& d : {kTable, Distribution::exponential(1.0)}) {
        RngStream r1 = RngStream::substream(42, "wecdf", 0);
        RngStream r2 = RngStream::substream(42, "wecdf", 1);
        const auto oracle = weighted_star_sample(d, 100000, r1);
        const auto direct = size_bias(d).sample(r2, 100000);
        CHECK(ks_two_sample(oracle, direct).pass);
    }
}

TEST_CASE("distribution JSON literals round trip") {
    const char* literals[] = {
        R"({"kind":"atoms","atoms":[[1,0.4],[2,0.3],[3,0.2],[4,0.1]]})",
        R"({"kind":"family","name":"poisson","params":{"lambda":2.0}})",
        R"({"kind":"empirical","values":[1.0,2.0,2.0,5.5]})",
    };
    for (const char* lit : literals) {
        const Distribution d = Distribution::from_json_text(lit);
        const Distribution back = Distribution::from_json_text(d.to_json_text());
        CHECK(back.describe() == d.describe());
        CHECK(back.mean() == doctest::Approx(d.mean()).epsilon(1e-12));
    }
    const Distribution g = Distribution::from_json_text(
        R"({"kind":"grid","x0":0,"h":0.5,"f":[0.5,0.5,0.5,0.5,0.5]})");
    CHECK(g.kind() == Kind::Grid);
    CHECK(Distribution::from_json_text(g.to_json_text()).mean() ==
          doctest::Approx(g.mean()).epsilon(1e-12));
}

TEST_CASE("literal and construction errors carry diagnostics") {
    CHECK_THROWS_AS(Distribution::from_json_text("not json"), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::from_json_text(R"({"kind":"widget"})"), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::from_json_text(R"({"kind":"family","name":"cauchy","params":{}})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(Distribution::atoms({{-1.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::atoms({{1.0, 0.6}, {2.0, 0.6}}), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::poisson(0.0), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::beta(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Distribution::grid_density(GridFunction(1.0, 0.1, {1.0, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("family cdf and quantile are consistent inverses") {
    for (const Distribution& d :
         {Distribution::exponential(1.3), Distribution::gamma(2.0, 2.5),
          Distribution::beta(2.0, 3.0), Distribution::lognormal(0.1, 0.7)}) {
        for (double u : {0.05, 0.3, 0.5, 0.9, 0.99}) {
            const double x = d.quantile(u);
            CHECK(d.cdf(x) == doctest::Approx(u).epsilon(1e-9));
        }
    }
}
