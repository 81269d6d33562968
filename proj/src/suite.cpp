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

#include "sizebias/suite.hpp"

#include <cmath>
#include <sstream>

#include "sizebias/distribution.hpp"
#include "sizebias/estimate.hpp"
#include "sizebias/levy.hpp"
#include "sizebias/mathfn.hpp"
#include "sizebias/renewal.hpp"
#include "sizebias/rules.hpp"
#include "sizebias/specialfn.hpp"
#include "sizebias/stats.hpp"

namespace sizebias {

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (detail.tellp() > 0) detail << "; ";
            detail << what;
        }
    }
    void note(const std::string& what) {
        if (detail.tellp() > 0) detail << "; ";
        detail << what;
    }
};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

bool atoms_match(const std::vector<Atom>& got, const std::vector<Atom>& want, double tol,
                 double* worst = nullptr) {
    double w = 0.0;
    bool ok = got.size() == want.size();
    if (ok)
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (std::fabs(got[i].value - want[i].value) > 1e-9) ok = false;
            w = std::max(w, std::fabs(got[i].prob - want[i].prob));
        }
    if (worst) *worst = w;
    return ok && w <= tol;
}

// Sup distance between two pmfs over the union of their support points.
double pmf_sup_distance(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    double worst = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i].value < b[j].value - 1e-9))
            worst = std::max(worst, a[i++].prob);
        else if (i >= a.size() || b[j].value < a[i].value - 1e-9)
            worst = std::max(worst, b[j++].prob);
        else
            worst = std::max(worst, std::fabs(a[i++].prob - b[j++].prob));
    }
    return worst;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double se_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s2 = 0.0;
    for (double x : v) s2 += (x - m) * (x - m);
    return std::sqrt(s2 / static_cast<double>(v.size())) /
           std::sqrt(static_cast<double>(v.size()));
}

// --------------------------------------------------------------------------

CriterionResult c1_table_transform() {
    Check c;
    const Distribution d = Distribution::atoms({{1, .4}, {2, .3}, {3, .2}, {4, .1}});
    double worst = 0.0;
    const bool ok = atoms_match(size_bias(d).as_atoms(),
                                {{1, .2}, {2, .3}, {3, .3}, {4, .2}}, 1e-12, &worst);
    c.expect(ok, "table transform off by " + fmt(worst));
    c.note("max atom error " + fmt(worst));
    return {1, "discrete-table-transform", c.ok, c.detail.str()};
}

CriterionResult c2_dickman() {
    Check c;
    const GridFunction rho = dickman_rho(15.0, 1e-3);
    const double rho2 = rho(2.0);
    const double want_rho2 = 1.0 - std::log(2.0);
    c.expect(std::fabs(rho2 - want_rho2) < 1e-5,
             "rho(2) = " + fmt(rho2) + " vs " + fmt(want_rho2));
    const double integral = dickman_integral(rho);
    const double e_gamma = std::exp(mathfn::kEulerGamma);
    c.expect(std::fabs(integral - e_gamma) < 1e-4,
             "integral = " + fmt(integral) + " vs e^gamma = " + fmt(e_gamma));
    const GridFunction g1 = dickman_conv_power(1.0, 15.0, 1e-3);
    double worst_ratio = 0.0;
    for (std::size_t i = 100; i <= 5000; ++i)
        worst_ratio = std::max(worst_ratio,
                               std::fabs(g1.values[i] / rho.values[i] - std::exp(-mathfn::kEulerGamma)));
    c.expect(worst_ratio < 1e-4, "g1/rho deviates from e^-gamma by " + fmt(worst_ratio));
    c.note("rho(2)=" + fmt(rho2) + " integral=" + fmt(integral) + " ratio-dev=" + fmt(worst_ratio));
    return {2, "dickman-values", c.ok, c.detail.str()};
}

CriterionResult c3_buchstab() {
    Check c;
    const GridFunction omega = buchstab_omega(5.0, 1e-3);
    double exact_dev = 0.0;
    for (std::size_t i = 0; i <= 1000; ++i) {
        const double u = omega.x_at(i);
        exact_dev = std::max(exact_dev, std::fabs(omega.values[i] - 1.0 / u));
    }
    c.expect(exact_dev == 0.0, "omega != 1/u on [1,2], dev " + fmt(exact_dev));
    const double w25 = omega(2.5);
    const double want = (1.0 + std::log(1.5)) / 2.5;
    c.expect(std::fabs(w25 - want) < 1e-5, "omega(2.5) = " + fmt(w25) + " vs " + fmt(want));
    c.note("omega(2.5)=" + fmt(w25));
    return {3, "buchstab-values", c.ok, c.detail.str()};
}

CriterionResult c4_prime_sieve() {
    Check c;
    const PrimeFactorStats s = prime_factor_empirics(static_cast<std::uint64_t>(1000000), 2.0);
    const double rho2 = 1.0 - std::log(2.0);
    c.expect(std::fabs(s.smooth_fraction - rho2) < 0.01,
             "smooth fraction " + fmt(s.smooth_fraction) + " vs rho(2) = " + fmt(rho2) +
                 " (gap " + fmt(std::fabs(s.smooth_fraction - rho2)) + " exceeds 0.01)");
    const double rough_ratio =
        s.rough_fraction * std::log(static_cast<double>(s.n_max)) / s.u;
    c.expect(std::fabs(rough_ratio - 0.5) < 0.05,
             "rough ratio " + fmt(rough_ratio) + " vs omega(2) = 0.5");
    c.note("smooth=" + fmt(s.smooth_fraction) + " rough*ln(n)/u=" + fmt(rough_ratio));
    return {4, "prime-sieve-fractions", c.ok, c.detail.str()};
}

CriterionResult c5_steutel(std::uint64_t seed) {
    Check c;
    const std::size_t n = 100000;
    struct Case {
        const char* name;
        LevyMeasure nu;
        bool compound;
    };
    const Case cases[] = {
        {"geometric", LevyMeasure::geometric(0.5), true},
        {"exponential", LevyMeasure::exponential_density(1.0, 1.0), false},
        {"atom", LevyMeasure::single_atom(3.0, 2.0), true},
    };
    for (const Case& cs : cases) {
        RngStream rng = RngStream::substream(seed, std::string("steutel-") + cs.name, 0);
        const SteutelReport rep = verify_steutel(cs.nu, n, rng);
        c.expect(rep.xy_vs_star.pass, std::string(cs.name) + ": X+Y vs X* KS stat " +
                                          fmt(rep.xy_vs_star.statistic) + " >= " +
                                          fmt(rep.xy_vs_star.threshold));
        if (cs.compound) {
            c.expect(rep.one_more_term.has_value() && rep.one_more_term->pass,
                     std::string(cs.name) + ": one-more-term route failed KS");
        }
    }
    return {5, "steutel-coupling", c.ok, c.detail.str()};
}

CriterionResult c6_certificates() {
    Check c;
    auto verdict = [&](const Distribution& d) { return deconvolution_check(d).verdict; };
    c.expect(verdict(Distribution::binomial(4, 0.3)) == DeconvVerdict::Negative,
             "binomial(4,.3) not NEGATIVE");
    c.expect(verdict(Distribution::beta(2, 2)) == DeconvVerdict::Negative,
             "beta(2,2) not NEGATIVE");
    c.expect(verdict(Distribution::poisson(2)) == DeconvVerdict::Inconclusive,
             "poisson(2) not INCONCLUSIVE");
    c.expect(verdict(Distribution::geometric(0.5)) == DeconvVerdict::Inconclusive,
             "geometric(.5) not INCONCLUSIVE");
    c.expect(verdict(Distribution::gamma(1, 2)) == DeconvVerdict::Inconclusive,
             "gamma(1,2) not INCONCLUSIVE");
    return {6, "non-divisibility-certificates", c.ok, c.detail.str()};
}

CriterionResult c7_catalogue(std::uint64_t seed) {
    Check c;
    const std::size_t n = 100000;

    // Poisson: exact pmf shift.
    {
        const auto& got = size_bias(Distribution::poisson(3)).as_atoms();
        const Distribution base = Distribution::poisson(3);
        double worst = 0.0;
        for (const Atom& at : got)
            worst = std::max(worst, std::fabs(at.prob - base.mass_at(at.value - 1.0)));
        c.expect(worst < 1e-12, "poisson shift pmf error " + fmt(worst));
    }
    // Binomial: exact pmf shift.
    {
        const auto& got = size_bias(Distribution::binomial(5, 0.4)).as_atoms();
        const Distribution base = Distribution::binomial(4, 0.4);
        double worst = 0.0;
        for (const Atom& at : got)
            worst = std::max(worst, std::fabs(at.prob - base.mass_at(at.value - 1.0)));
        c.expect(worst < 1e-12, "binomial shift pmf error " + fmt(worst));
    }
    // Beta and Gamma: weighted-star oracle vs the biased family, two-sample KS.
    {
        RngStream r1 = RngStream::substream(seed, "catalogue-beta", 0);
        RngStream r2 = RngStream::substream(seed, "catalogue-beta", 1);
        const auto star = weighted_star_sample(Distribution::beta(2, 3), n, r1);
        const auto direct = Distribution::beta(2, 4).sample(r2, n);
        const KsReport ks = ks_two_sample(star, direct);
        c.expect(ks.pass, "beta(2,3)* vs beta(2,4) KS stat " + fmt(ks.statistic));
    }
    {
        RngStream r1 = RngStream::substream(seed, "catalogue-gamma", 0);
        RngStream r2 = RngStream::substream(seed, "catalogue-gamma", 1);
        const auto star = weighted_star_sample(Distribution::gamma(1.5, 2), n, r1);
        const auto direct = Distribution::gamma(1.5, 3).sample(r2, n);
        const KsReport ks = ks_two_sample(star, direct);
        c.expect(ks.pass, "gamma(1.5,2)* vs gamma(1.5,3) KS stat " + fmt(ks.statistic));
    }
    // Lognormal moment shift: E (L*)^n = e^n E L^n, n <= 3.
    {
        const Distribution L = Distribution::lognormal(0, 1);
        const Distribution Ls = size_bias(L);
        for (int k = 1; k <= 3; ++k) {
            const double lhs = Ls.moment(k);
            const double rhs = std::exp(k) * L.moment(k);
            c.expect(std::fabs(lhs / rhs - 1.0) < 1e-12,
                     "lognormal moment " + std::to_string(k) + " ratio " + fmt(lhs / rhs));
        }
    }
    return {7, "catalogue-identities", c.ok, c.detail.str()};
}

CriterionResult c8_renewal(std::uint64_t seed) {
    Check c;
    const std::size_t n = 100000;
    const Distribution exp1 = Distribution::exponential(1.0);
    for (double t : {0.0, 0.37, 3.1}) {
        RngStream rng = RngStream::substream(seed, "renewal-wait", static_cast<std::uint64_t>(t * 100));
        const auto w = simulate_waiting(exp1, t, n, rng);
        const double m = mean_of(w), se = se_of(w);
        c.expect(std::fabs(m - 1.0) < 4.0 * se,
                 "mean waiting at t=" + fmt(t) + " is " + fmt(m) + " (se " + fmt(se) + ")");
    }
    {
        RngStream rng = RngStream::substream(seed, "renewal-dart", 0);
        const DartResult darts = dart_interval(exp1, 1e4, n, rng);
        RngStream r2 = RngStream::substream(seed, "renewal-dart-ref", 0);
        const auto ref = Distribution::gamma(1.0, 2.0).sample(r2, n);
        const KsReport ks = ks_two_sample(darts.lengths, ref);
        c.expect(ks.pass, "dart covering law vs Gamma(1,2) KS stat " + fmt(ks.statistic));
        c.note("dart rejection rate " + fmt(darts.rejection_rate));
    }
    {
        RngStream rng = RngStream::substream(seed, "renewal-split", 0);
        const SplitReport rep = exponential_split_test(n, rng);
        c.expect(rep.margins_pass, "split margins failed KS vs Exp(1)");
        c.expect(rep.independence_stat < 0.01,
                 "independence statistic " + fmt(rep.independence_stat));
    }
    return {8, "renewal-waiting-paradox", c.ok, c.detail.str()};
}

CriterionResult c9_midzuno(std::uint64_t seed) {
    Check c;
    RngStream rng = RngStream::substream(seed, "midzuno-populations", 0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto n = static_cast<std::size_t>(3 + rng.uniform() * 6);  // 3..8
        Population pop;
        for (std::size_t i = 0; i < n; ++i) {
            pop.x.push_back(rng.uniform() * 10.0);
            pop.y.push_back(rng.uniform() * 20.0 - 5.0);
        }
        const auto m = static_cast<std::size_t>(1 + rng.uniform() * static_cast<double>(n));
        const double e = exact_expectation(pop, std::min(m, n), Scheme::Midzuno);
        worst = std::max(worst, std::fabs(e - pop.true_ratio()));
    }
    c.expect(worst < 1e-12, "midzuno enumeration bias " + fmt(worst));
    c.note("max |E - R| = " + fmt(worst));

    Population skew;
    skew.x = {1, 2, 5};
    skew.y = {1, 4, 0};
    const double bias = exact_expectation(skew, 2, Scheme::Srs) - skew.true_ratio();
    c.expect(std::fabs(bias) > 1e-3, "SRS negative control shows no bias");
    c.note("SRS bias " + fmt(bias));
    return {9, "midzuno-unbiasedness", c.ok, c.detail.str()};
}

CriterionResult c10_properties(std::uint64_t seed) {
    Check c;
    const std::vector<Distribution> battery = {
        Distribution::atoms({{0, .5}, {2, .5}}),
        Distribution::atoms({{1, .4}, {2, .3}, {3, .2}, {4, .1}}),
        Distribution::poisson(2),
        Distribution::geometric(0.5),
        Distribution::exponential(1.0),
        Distribution::gamma(1.0, 2.0),
        Distribution::beta(2, 2),
        Distribution::lognormal(0, 0.5),
    };
    // No mass at zero and stochastic dominance P(X* > t) >= P(X > t).
    for (const Distribution& d : battery) {
        const Distribution star = size_bias(d);
        c.expect(star.cdf(0.0) == 0.0, d.describe() + ": X* has mass at 0");
        for (int j = 1; j < 60; ++j) {
            const double t = d.quantile(static_cast<double>(j) / 60.0);
            c.expect(star.cdf(t) <= d.cdf(t) + 1e-12, d.describe() + ": dominance fails at t=" + fmt(t));
        }
    }
    // Scaling commutation across the whole catalogue: discrete families
    // atomwise, closed continuous families by quantile, beta by KS.
    for (double y : {0.5, 2.0}) {
        for (const Distribution& d :
             {Distribution::poisson(2), Distribution::binomial(5, 0.4), Distribution::bernoulli(0.3),
              Distribution::geometric(0.5), Distribution::negative_binomial(2.5, 0.4),
              Distribution::scaled_poisson(1.5, 2.0)}) {
            const Distribution lhs = size_bias(scale(d, y));
            const Distribution rhs = scale(size_bias(d), y);
            const double worst = pmf_sup_distance(lhs.as_atoms(), rhs.as_atoms());
            c.expect(worst < 1e-12, d.describe() + " scaling commutation dev " + fmt(worst));
        }
        for (const Distribution& d : {Distribution::exponential(1.0), Distribution::gamma(2.0, 1.5),
                                      Distribution::lognormal(0.2, 0.8)}) {
            const Distribution lhs = size_bias(scale(d, y));
            const Distribution rhs = scale(size_bias(d), y);
            double worst = 0.0;
            for (int j = 1; j < 40; ++j) {
                const double u = static_cast<double>(j) / 40.0;
                worst = std::max(worst, std::fabs(lhs.quantile(u) - rhs.quantile(u)));
            }
            c.expect(worst < 1e-9, d.describe() + " scaling commutation dev " + fmt(worst));
        }
        {
            const Distribution d = Distribution::beta(2, 2);
            RngStream r1 = RngStream::substream(seed, "commute-beta", y > 1 ? 1 : 0);
            RngStream r2 = RngStream::substream(seed, "commute-beta", y > 1 ? 3 : 2);
            const auto s1 = size_bias(scale(d, y)).sample(r1, 100000);
            const auto s2 = scale(size_bias(d), y).sample(r2, 100000);
            const KsReport ks = ks_two_sample(s1, s2);
            c.expect(ks.pass, "beta scaling commutation KS stat " + fmt(ks.statistic));
        }
    }
    // Moment shift residuals, closed-form route.
    for (const Distribution& d : battery) {
        for (const MomentShiftRow& row : moment_shift_check(d, 3)) {
            const double rel = row.residual / std::max(1.0, std::fabs(row.shifted_moment));
            c.expect(rel < 1e-9, d.describe() + " moment shift n=" + std::to_string(row.n) +
                                     " residual " + fmt(rel));
        }
    }
    // Convolution identity residuals.
    {
        const Distribution x = Distribution::geometric(0.5);
        LawDescriptor y;
        y.shift = 1.0;
        y.terms.push_back(Distribution::geometric(0.5));
        const double res = density_convolution_residual(x, y.to_distribution());
        c.expect(res < 1e-12, "discrete convolution residual " + fmt(res));
        c.note("discrete conv residual " + fmt(res));
    }
    {
        const Distribution x = Distribution::exponential(1.0);
        const GridFunction gx = x.as_grid(1e-3, 25.0);
        const Distribution dx = Distribution::grid_density(gx);
        const double res = density_convolution_residual(dx, dx);
        c.expect(res < 5e-3, "grid convolution residual " + fmt(res));
        c.note("grid conv residual " + fmt(res));
    }
    // Weighted-ECDF oracle at the published seed.
    {
        RngStream r1 = RngStream::substream(seed, "property-oracle", 0);
        RngStream r2 = RngStream::substream(seed, "property-oracle", 1);
        const Distribution d = Distribution::exponential(1.0);
        const auto star = weighted_star_sample(d, 100000, r1);
        const auto direct = size_bias(d).sample(r2, 100000);
        const KsReport ks = ks_two_sample(star, direct);
        c.expect(ks.pass, "weighted-ECDF oracle KS stat " + fmt(ks.statistic));
    }
    return {10, "transform-properties", c.ok, c.detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed) {
    std::vector<CriterionResult> out;
    out.push_back(c1_table_transform());
    out.push_back(c2_dickman());
    out.push_back(c3_buchstab());
    out.push_back(c4_prime_sieve());
    out.push_back(c5_steutel(seed));
    out.push_back(c6_certificates());
    out.push_back(c7_catalogue(seed));
    out.push_back(c8_renewal(seed));
    out.push_back(c9_midzuno(seed));
    out.push_back(c10_properties(seed));
    return out;
}

std::string format_suite_table(const std::vector<CriterionResult>& results) {
    std::ostringstream os;
    int failed = 0;
    for (const CriterionResult& r : results) {
        os << "[" << (r.id < 10 ? " " : "") << r.id << "] " << (r.pass ? "PASS" : "FAIL") << "  "
           << r.name;
        for (std::size_t i = r.name.size(); i < 32; ++i) os << ' ';
        if (!r.detail.empty()) os << " " << r.detail;
        os << "\n";
        if (!r.pass) ++failed;
    }
    os << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
       << "\n";
    return os.str();
}

}  // namespace sizebias
