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

#include "sizebias/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "sizebias/mathfn.hpp"
#include "sizebias/rules.hpp"

namespace sizebias {

namespace {

constexpr double kAtomDropTol = 1e-15;

double falling(double n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (n - i);
    return r;
}

double rising(double t, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= (t + i);
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Marsaglia-Tsang gamma draw at unit rate; shape < 1 boosted through shape+1.
double gamma_draw(RngStream& rng, double shape) {
    double boost = 1.0;
    if (shape < 1.0) {
        boost = std::pow(rng.uniform(), 1.0 / shape);
        shape += 1.0;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return boost * d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return boost * d * v;
    }
}

std::vector<Atom> normalize_atoms(std::vector<Atom> as, double sum_tol) {
    require(!as.empty(), "Distribution: empty atom list");
    std::sort(as.begin(), as.end(), [](const Atom& l, const Atom& r) { return l.value < r.value; });
    std::vector<Atom> merged;
    for (const Atom& a : as) {
        require(a.value >= 0.0, "Distribution: atom value < 0");
        require(a.prob >= -1e-12, "Distribution: negative atom probability");
        if (a.prob <= 0.0) continue;
        if (!merged.empty() && merged.back().value == a.value)
            merged.back().prob += a.prob;
        else
            merged.push_back(a);
    }
    require(!merged.empty(), "Distribution: all atom probabilities are zero");
    double total = 0.0;
    for (const Atom& a : merged) total += a.prob;
    require(std::fabs(total - 1.0) <= sum_tol,
            "Distribution: atom probabilities sum to " + std::to_string(total));
    for (Atom& a : merged) a.prob /= total;
    return merged;
}

}  // namespace

std::string_view family_to_string(FamilyName f) {
    switch (f) {
        case FamilyName::Poisson: return "poisson";
        case FamilyName::Binomial: return "binomial";
        case FamilyName::Bernoulli: return "bernoulli";
        case FamilyName::Beta: return "beta";
        case FamilyName::Geometric: return "geometric";
        case FamilyName::NegativeBinomial: return "negative_binomial";
        case FamilyName::Exponential: return "exponential";
        case FamilyName::Gamma: return "gamma";
        case FamilyName::Lognormal: return "lognormal";
        case FamilyName::ScaledPoisson: return "scaled_poisson";
    }
    return "?";
}

FamilyName family_from_string(std::string_view s) {
    if (s == "poisson") return FamilyName::Poisson;
    if (s == "binomial") return FamilyName::Binomial;
    if (s == "bernoulli") return FamilyName::Bernoulli;
    if (s == "beta") return FamilyName::Beta;
    if (s == "geometric") return FamilyName::Geometric;
    if (s == "negative_binomial") return FamilyName::NegativeBinomial;
    if (s == "exponential") return FamilyName::Exponential;
    if (s == "gamma") return FamilyName::Gamma;
    if (s == "lognormal") return FamilyName::Lognormal;
    if (s == "scaled_poisson") return FamilyName::ScaledPoisson;
    throw std::invalid_argument("unknown family name: " + std::string(s));
}

// ---------------------------------------------------------------------------
// Construction

Distribution Distribution::atoms(std::vector<Atom> as) {
    Distribution d;
    d.kind_ = Kind::Atoms;
    d.atoms_ = normalize_atoms(std::move(as), 1e-12);
    d.finalize();
    return d;
}

Distribution Distribution::grid_density(GridFunction f) {
    Distribution d;
    d.kind_ = Kind::Grid;
    require(f.x0 == 0.0, "grid density must start at x0 = 0");
    for (double& v : f.values) {
        require(v >= -1e-12, "grid density has negative values");
        if (v < 0.0) v = 0.0;
    }
    const double total = f.integral();
    require(std::fabs(total - 1.0) <= 1e-6,
            "grid density integrates to " + std::to_string(total) + ", expected 1");
    for (double& v : f.values) v /= total;
    d.grid_ = std::move(f);
    d.finalize();
    return d;
}

Distribution Distribution::family(FamilyName name, std::map<std::string, double> params) {
    Distribution d;
    d.kind_ = Kind::Family;
    d.fam_ = name;
    d.params_ = std::move(params);
    auto need = [&](const char* k) {
        require(d.params_.count(k) == 1,
                std::string(family_to_string(name)) + ": missing parameter '" + k + "'");
        return d.params_.at(k);
    };
    switch (name) {
        case FamilyName::Poisson: {
            const double lam = need("lambda");
            require(lam > 0.0 && lam <= 700.0, "poisson: lambda out of range (0, 700]");
            break;
        }
        case FamilyName::Binomial: {
            const double n = need("n");
            const double p = need("p");
            require(n >= 0.0 && n == std::floor(n) && n <= 1e7, "binomial: n must be a nonnegative integer");
            require(p >= 0.0 && p <= 1.0, "binomial: p outside [0,1]");
            break;
        }
        case FamilyName::Bernoulli: {
            const double p = need("p");
            require(p >= 0.0 && p <= 1.0, "bernoulli: p outside [0,1]");
            break;
        }
        case FamilyName::Beta: {
            require(need("a") > 0.0 && need("b") > 0.0, "beta: shapes must be > 0");
            break;
        }
        case FamilyName::Geometric: {
            const double q = need("q");
            require(q > 0.0 && q < 1.0, "geometric: q outside (0,1)");
            break;
        }
        case FamilyName::NegativeBinomial: {
            const double q = need("q");
            require(need("t") > 0.0, "negative_binomial: t must be > 0");
            require(q > 0.0 && q < 1.0, "negative_binomial: q outside (0,1)");
            break;
        }
        case FamilyName::Exponential: {
            require(need("alpha") > 0.0, "exponential: alpha must be > 0");
            break;
        }
        case FamilyName::Gamma: {
            require(need("alpha") > 0.0 && need("t") > 0.0, "gamma: parameters must be > 0");
            break;
        }
        case FamilyName::Lognormal: {
            need("mu");
            require(need("sigma") > 0.0, "lognormal: sigma must be > 0");
            break;
        }
        case FamilyName::ScaledPoisson: {
            const double lam = need("lambda");
            require(need("y") > 0.0, "scaled_poisson: y must be > 0");
            require(lam > 0.0 && lam <= 700.0, "scaled_poisson: lambda out of range (0, 700]");
            break;
        }
    }
    d.finalize();
    return d;
}

Distribution Distribution::empirical(std::vector<double> values) {
    Distribution d;
    d.kind_ = Kind::Empirical;
    require(!values.empty(), "empirical: empty sample");
    for (double v : values) require(v >= 0.0, "empirical: negative sample value");
    d.empirical_ = std::move(values);
    const double w = 1.0 / static_cast<double>(d.empirical_.size());
    std::vector<Atom> as;
    as.reserve(d.empirical_.size());
    for (double v : d.empirical_) as.push_back({v, w});
    d.atoms_ = normalize_atoms(std::move(as), 1e-9);
    d.finalize();
    return d;
}

Distribution Distribution::poisson(double lambda) { return family(FamilyName::Poisson, {{"lambda", lambda}}); }
Distribution Distribution::binomial(double n, double p) { return family(FamilyName::Binomial, {{"n", n}, {"p", p}}); }
Distribution Distribution::bernoulli(double p) { return family(FamilyName::Bernoulli, {{"p", p}}); }
Distribution Distribution::beta(double a, double b) { return family(FamilyName::Beta, {{"a", a}, {"b", b}}); }
Distribution Distribution::geometric(double q) { return family(FamilyName::Geometric, {{"q", q}}); }
Distribution Distribution::negative_binomial(double t, double q) {
    return family(FamilyName::NegativeBinomial, {{"t", t}, {"q", q}});
}
Distribution Distribution::exponential(double alpha) { return family(FamilyName::Exponential, {{"alpha", alpha}}); }
Distribution Distribution::gamma(double alpha, double t) {
    return family(FamilyName::Gamma, {{"alpha", alpha}, {"t", t}});
}
Distribution Distribution::lognormal(double mu, double sigma) {
    return family(FamilyName::Lognormal, {{"mu", mu}, {"sigma", sigma}});
}
Distribution Distribution::scaled_poisson(double y, double lambda) {
    return family(FamilyName::ScaledPoisson, {{"y", y}, {"lambda", lambda}});
}

void Distribution::finalize() {
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: {
            atom_cum_.resize(atoms_.size());
            double c = 0.0, m = 0.0;
            for (std::size_t i = 0; i < atoms_.size(); ++i) {
                c += atoms_[i].prob;
                m += atoms_[i].prob * atoms_[i].value;
                atom_cum_[i] = c;
            }
            atom_cum_.back() = 1.0;
            mean_ = m;
            break;
        }
        case Kind::Grid: {
            grid_cdf_ = grid_.cumulative();
            const double total = grid_cdf_.back();
            for (double& c : grid_cdf_) c /= total;
            double m = 0.0;
            for (std::size_t i = 0; i < grid_.size(); ++i) {
                const double w = (i == 0 || i + 1 == grid_.size()) ? 0.5 : 1.0;
                m += w * grid_.x_at(i) * grid_.values[i];
            }
            mean_ = m * grid_.h;
            break;
        }
        case Kind::Family:
            mean_ = moment(1);
            if (is_discrete()) expand_family_atoms();
            break;
    }
}

bool Distribution::is_discrete() const {
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: return true;
        case Kind::Grid: return false;
        case Kind::Family:
            switch (fam_) {
                case FamilyName::Poisson:
                case FamilyName::Binomial:
                case FamilyName::Bernoulli:
                case FamilyName::Geometric:
                case FamilyName::NegativeBinomial:
                case FamilyName::ScaledPoisson: return true;
                default: return false;
            }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Moments

double Distribution::moment(int n) const {
    if (n < 0) throw std::invalid_argument("moment: order must be >= 0");
    if (n == 0) return 1.0;
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: {
            double s = 0.0;
            for (const Atom& a : atoms_) s += a.prob * std::pow(a.value, n);
            return s;
        }
        case Kind::Grid: {
            double s = 0.0;
            for (std::size_t i = 0; i < grid_.size(); ++i) {
                const double w = (i == 0 || i + 1 == grid_.size()) ? 0.5 : 1.0;
                s += w * std::pow(grid_.x_at(i), n) * grid_.values[i];
            }
            return s * grid_.h;
        }
        case Kind::Family: break;
    }
    const auto& p = params_;
    switch (fam_) {
        case FamilyName::Poisson: {
            const double lam = p.at("lambda");
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += mathfn::stirling2(n, k) * std::pow(lam, k);
            return s;
        }
        case FamilyName::Binomial: {
            const double nn = p.at("n"), pp = p.at("p");
            double s = 0.0;
            for (int k = 1; k <= n; ++k)
                s += mathfn::stirling2(n, k) * falling(nn, k) * std::pow(pp, k);
            return s;
        }
        case FamilyName::Bernoulli: return p.at("p");
        case FamilyName::Beta: {
            const double a = p.at("a"), b = p.at("b");
            double s = 1.0;
            for (int i = 0; i < n; ++i) s *= (b + i) / (a + b + i);
            return s;
        }
        case FamilyName::Geometric: {
            const double q = p.at("q");
            const double r = q / (1.0 - q);
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += mathfn::stirling2(n, k) * factorial(k) * std::pow(r, k);
            return s;
        }
        case FamilyName::NegativeBinomial: {
            const double t = p.at("t"), q = p.at("q");
            const double r = q / (1.0 - q);
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += mathfn::stirling2(n, k) * rising(t, k) * std::pow(r, k);
            return s;
        }
        case FamilyName::Exponential: return factorial(n) / std::pow(p.at("alpha"), n);
        case FamilyName::Gamma: return rising(p.at("t"), n) / std::pow(p.at("alpha"), n);
        case FamilyName::Lognormal: {
            const double mu = p.at("mu"), sg = p.at("sigma");
            return std::exp(n * mu + 0.5 * n * n * sg * sg);
        }
        case FamilyName::ScaledPoisson: {
            const double lam = p.at("lambda");
            double s = 0.0;
            for (int k = 1; k <= n; ++k) s += mathfn::stirling2(n, k) * std::pow(lam, k);
            return std::pow(p.at("y"), n) * s;
        }
    }
    throw std::logic_error("moment: unhandled family");
}

// ---------------------------------------------------------------------------
// Family atom expansion (discrete families)

void Distribution::expand_family_atoms() {
    const double tail_eps = kAtomDropTol;
    std::vector<Atom> as;
    const auto& p = params_;
    auto push_series = [&](double p0, auto next, double scale) {
        double pk = p0, cum = 0.0;
        for (int k = 0; k < 2000000; ++k) {
            if (pk >= kAtomDropTol) as.push_back({scale * k, pk});
            cum += pk;
            if (1.0 - cum <= tail_eps) break;
            pk = next(pk, k);
        }
    };
    switch (fam_) {
        case FamilyName::Poisson: {
            const double lam = p.at("lambda");
            push_series(std::exp(-lam), [lam](double pk, int k) { return pk * lam / (k + 1); }, 1.0);
            break;
        }
        case FamilyName::ScaledPoisson: {
            const double lam = p.at("lambda");
            push_series(std::exp(-lam), [lam](double pk, int k) { return pk * lam / (k + 1); },
                        p.at("y"));
            break;
        }
        case FamilyName::Binomial: {
            const double nn = p.at("n"), pp = p.at("p");
            const int n = static_cast<int>(nn);
            double pk = std::pow(1.0 - pp, n);
            if (pp == 1.0) {
                as.push_back({nn, 1.0});
                break;
            }
            for (int k = 0; k <= n; ++k) {
                if (pk >= kAtomDropTol) as.push_back({static_cast<double>(k), pk});
                pk *= (static_cast<double>(n - k) / (k + 1)) * (pp / (1.0 - pp));
            }
            break;
        }
        case FamilyName::Bernoulli: {
            const double pp = p.at("p");
            if (pp < 1.0) as.push_back({0.0, 1.0 - pp});
            if (pp > 0.0) as.push_back({1.0, pp});
            break;
        }
        case FamilyName::Geometric: {
            const double q = p.at("q");
            push_series(1.0 - q, [q](double pk, int) { return pk * q; }, 1.0);
            break;
        }
        case FamilyName::NegativeBinomial: {
            const double t = p.at("t"), q = p.at("q");
            push_series(std::pow(1.0 - q, t),
                        [t, q](double pk, int k) { return pk * q * (k + t) / (k + 1); }, 1.0);
            break;
        }
        default:
            throw std::logic_error("expand_family_atoms: continuous family");
    }
    double total = 0.0;
    for (const Atom& a : as) total += a.prob;
    for (Atom& a : as) a.prob /= total;
    auto cum = std::make_shared<std::vector<double>>(as.size());
    double c = 0.0;
    for (std::size_t i = 0; i < as.size(); ++i) {
        c += as[i].prob;
        (*cum)[i] = c;
    }
    cum->back() = 1.0;
    fam_atoms_ = std::make_shared<const std::vector<Atom>>(std::move(as));
    fam_cum_ = std::move(cum);
}

const std::vector<Atom>& Distribution::as_atoms() const {
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: return atoms_;
        case Kind::Family:
            if (!is_discrete())
                throw std::invalid_argument("as_atoms: " + describe() + " is continuous");
            return *fam_atoms_;
        case Kind::Grid: throw std::invalid_argument("as_atoms: grid density is continuous");
    }
    throw std::logic_error("as_atoms: unreachable");
}

// ---------------------------------------------------------------------------
// Density / pmf

double Distribution::mass_at(double x) const {
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: {
            auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x - 1e-9,
                                       [](const Atom& a, double v) { return a.value < v; });
            if (it != atoms_.end() && std::fabs(it->value - x) <= 1e-9) return it->prob;
            return 0.0;
        }
        case Kind::Grid: return grid_(x);
        case Kind::Family: break;
    }
    const auto& p = params_;
    if (is_discrete()) {
        const auto& as = as_atoms();
        auto it = std::lower_bound(as.begin(), as.end(), x - 1e-9,
                                   [](const Atom& a, double v) { return a.value < v; });
        if (it != as.end() && std::fabs(it->value - x) <= 1e-9) return it->prob;
        return 0.0;
    }
    switch (fam_) {
        case FamilyName::Beta: {
            const double a = p.at("a"), b = p.at("b");
            if (x <= 0.0 || x >= 1.0) return 0.0;
            const double lb = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
            return std::exp(lb + (b - 1.0) * std::log(x) + (a - 1.0) * std::log1p(-x));
        }
        case FamilyName::Exponential: {
            const double al = p.at("alpha");
            return x < 0.0 ? 0.0 : al * std::exp(-al * x);
        }
        case FamilyName::Gamma: {
            const double al = p.at("alpha"), t = p.at("t");
            if (x <= 0.0) return 0.0;
            return std::exp(t * std::log(al) - std::lgamma(t) + (t - 1.0) * std::log(x) - al * x);
        }
        case FamilyName::Lognormal: {
            const double mu = p.at("mu"), sg = p.at("sigma");
            if (x <= 0.0) return 0.0;
            const double z = (std::log(x) - mu) / sg;
            return std::exp(-0.5 * z * z) / (x * sg * std::sqrt(2.0 * mathfn::kPi));
        }
        default: throw std::logic_error("mass_at: unhandled family");
    }
}

// ---------------------------------------------------------------------------
// CDF / quantile

double Distribution::cdf(double t) const {
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: {
            auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                                       [](double v, const Atom& a) { return v < a.value; });
            if (it == atoms_.begin()) return 0.0;
            return atom_cum_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
        }
        case Kind::Grid: {
            if (t <= grid_.x0) return 0.0;
            if (t >= grid_.x_max()) return 1.0;
            const double s = (t - grid_.x0) / grid_.h;
            const auto i = static_cast<std::size_t>(s);
            const double w = s - static_cast<double>(i);
            return grid_cdf_[i] * (1.0 - w) + grid_cdf_[i + 1] * w;
        }
        case Kind::Family: break;
    }
    const auto& p = params_;
    if (is_discrete()) {
        const auto& as = *fam_atoms_;
        auto it = std::upper_bound(as.begin(), as.end(), t,
                                   [](double v, const Atom& a) { return v < a.value; });
        if (it == as.begin()) return 0.0;
        return (*fam_cum_)[static_cast<std::size_t>(it - as.begin()) - 1];
    }
    switch (fam_) {
        case FamilyName::Beta:
            return mathfn::beta_inc(p.at("b"), p.at("a"), std::clamp(t, 0.0, 1.0));
        case FamilyName::Exponential:
            return t <= 0.0 ? 0.0 : -std::expm1(-p.at("alpha") * t);
        case FamilyName::Gamma:
            return t <= 0.0 ? 0.0 : mathfn::gamma_p(p.at("t"), p.at("alpha") * t);
        case FamilyName::Lognormal: {
            if (t <= 0.0) return 0.0;
            const double z = (std::log(t) - p.at("mu")) / p.at("sigma");
            return 0.5 * std::erfc(-z / std::sqrt(2.0));
        }
        default: throw std::logic_error("cdf: unhandled family");
    }
}

namespace {

// sup{t : F(t) <= u} for a sorted atom list with cached cumulative sums.
double atom_quantile(const std::vector<Atom>& as, const std::vector<double>& cum, double u) {
    auto it = std::upper_bound(cum.begin(), cum.end(), u);
    if (it == cum.end()) return as.back().value;
    return as[static_cast<std::size_t>(it - cum.begin())].value;
}

// Monotone bisection for continuous closed-form CDFs.
template <typename Cdf>
double bisect_quantile(Cdf F, double lo, double hi, double u) {
    for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        (F(mid) <= u ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double Distribution::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("quantile: u outside (0,1)");
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: return atom_quantile(atoms_, atom_cum_, u);
        case Kind::Grid: {
            auto it = std::upper_bound(grid_cdf_.begin(), grid_cdf_.end(), u);
            if (it == grid_cdf_.end()) return grid_.x_max();
            const auto i = static_cast<std::size_t>(it - grid_cdf_.begin());
            if (i == 0) return grid_.x0;
            const double c0 = grid_cdf_[i - 1], c1 = grid_cdf_[i];
            const double w = (u - c0) / (c1 - c0);
            return grid_.x_at(i - 1) + w * grid_.h;
        }
        case Kind::Family: break;
    }
    const auto& p = params_;
    if (is_discrete()) return atom_quantile(*fam_atoms_, *fam_cum_, u);
    switch (fam_) {
        case FamilyName::Beta:
            return bisect_quantile([this](double x) { return cdf(x); }, 0.0, 1.0, u);
        case FamilyName::Exponential: return -std::log1p(-u) / p.at("alpha");
        case FamilyName::Gamma: {
            const double t = p.at("t"), al = p.at("alpha");
            double hi = (t + 10.0 * std::sqrt(t) + 10.0) / al;
            while (cdf(hi) <= u) hi *= 2.0;
            return bisect_quantile([this](double x) { return cdf(x); }, 0.0, hi, u);
        }
        case FamilyName::Lognormal:
            return std::exp(p.at("mu") + p.at("sigma") * mathfn::inv_norm_cdf(u));
        default: throw std::logic_error("quantile: unhandled family");
    }
}

// ---------------------------------------------------------------------------
// Sampling

double Distribution::sample(RngStream& rng) const {
    if (kind_ == Kind::Family) {
        const auto& p = params_;
        switch (fam_) {
            case FamilyName::Gamma:
                return gamma_draw(rng, p.at("t")) / p.at("alpha");
            case FamilyName::Beta: {
                // Density ~ (1-x)^(a-1) x^(b-1): b-shape over the total.
                const double x = gamma_draw(rng, p.at("b"));
                const double y = gamma_draw(rng, p.at("a"));
                return x / (x + y);
            }
            case FamilyName::Lognormal:
                return std::exp(p.at("mu") + p.at("sigma") * rng.normal());
            case FamilyName::Exponential: return -std::log(rng.uniform()) / p.at("alpha");
            default: break;  // discrete families use inverse-CDF below
        }
    }
    return quantile(rng.uniform());
}

std::vector<double> Distribution::sample(RngStream& rng, std::size_t n) const {
    std::vector<double> out(n);
    for (double& v : out) v = sample(rng);
    return out;
}

// ---------------------------------------------------------------------------
// Grids and hints

double Distribution::support_hint() const {
    switch (kind_) {
        case Kind::Atoms:
        case Kind::Empirical: return atoms_.back().value;
        case Kind::Grid: return grid_.x_max();
        case Kind::Family: break;
    }
    switch (fam_) {
        case FamilyName::Beta: return 1.0;
        case FamilyName::Binomial: return params_.at("n");
        case FamilyName::Bernoulli: return 1.0;
        default: return quantile(1.0 - 1e-12);
    }
}

GridFunction Distribution::as_grid(double h, double x_max) const {
    if (is_discrete()) throw std::invalid_argument("as_grid: discrete law");
    const auto n = static_cast<std::size_t>(std::round(x_max / h)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) * h;
        const double f = mass_at(std::min(x, x_max));
        v[i] = std::isfinite(f) ? f : 0.0;
    }
    GridFunction g(0.0, h, std::move(v));
    const double total = g.integral();
    require(total > 0.99, "as_grid: grid misses too much mass, raise x_max");
    for (double& x : g.values) x /= total;
    return g;
}

// ---------------------------------------------------------------------------
// Accessors

FamilyName Distribution::family_name() const {
    require(kind_ == Kind::Family, "family_name: not a family");
    return fam_;
}

double Distribution::param(const std::string& key) const {
    require(kind_ == Kind::Family, "param: not a family");
    return params_.at(key);
}

const std::map<std::string, double>& Distribution::params() const {
    require(kind_ == Kind::Family, "params: not a family");
    return params_;
}

const GridFunction& Distribution::grid() const {
    require(kind_ == Kind::Grid, "grid: not a grid density");
    return grid_;
}

const std::vector<double>& Distribution::empirical_values() const {
    require(kind_ == Kind::Empirical, "empirical_values: not empirical");
    return empirical_;
}

std::string Distribution::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Atoms: {
            os << "atoms{";
            const std::size_t shown = std::min<std::size_t>(atoms_.size(), 8);
            for (std::size_t i = 0; i < shown; ++i) {
                if (i) os << ", ";
                os << atoms_[i].value << ":" << atoms_[i].prob;
            }
            if (atoms_.size() > shown) os << ", ... (" << atoms_.size() << " atoms)";
            os << "}";
            break;
        }
        case Kind::Grid:
            os << "grid[0," << grid_.x_max() << "] h=" << grid_.h;
            break;
        case Kind::Family: {
            os << family_to_string(fam_) << "(";
            bool first = true;
            for (const auto& [k, v] : params_) {
                if (!first) os << ", ";
                os << k << "=" << v;
                first = false;
            }
            os << ")";
            break;
        }
        case Kind::Empirical:
            os << "empirical(n=" << empirical_.size() << ")";
            break;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// JSON literals

Distribution Distribution::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("distribution literal: ") + e.what());
    }
    require(j.is_object() && j.contains("kind"), "distribution literal: missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "atoms") {
        std::vector<Atom> as;
        for (const auto& pair : j.at("atoms"))
            as.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
        return atoms(std::move(as));
    }
    if (kind == "family") {
        std::map<std::string, double> p;
        for (const auto& [k, v] : j.at("params").items()) p[k] = v.get<double>();
        return family(family_from_string(j.at("name").get<std::string>()), std::move(p));
    }
    if (kind == "grid") {
        GridFunction g(j.at("x0").get<double>(), j.at("h").get<double>(),
                       j.at("f").get<std::vector<double>>());
        return grid_density(std::move(g));
    }
    if (kind == "empirical") return empirical(j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("distribution literal: unknown kind \"" + kind + "\"");
}

std::string Distribution::to_json_text() const {
    nlohmann::json j;
    switch (kind_) {
        case Kind::Atoms: {
            j["kind"] = "atoms";
            auto arr = nlohmann::json::array();
            for (const Atom& a : atoms_) arr.push_back({a.value, a.prob});
            j["atoms"] = std::move(arr);
            break;
        }
        case Kind::Family:
            j["kind"] = "family";
            j["name"] = std::string(family_to_string(fam_));
            j["params"] = params_;
            break;
        case Kind::Grid:
            j["kind"] = "grid";
            j["x0"] = grid_.x0;
            j["h"] = grid_.h;
            j["f"] = grid_.values;
            break;
        case Kind::Empirical:
            j["kind"] = "empirical";
            j["values"] = empirical_;
            break;
    }
    return j.dump();
}

// ---------------------------------------------------------------------------
// The transform and the coupling

Distribution size_bias(const Distribution& d) {
    const double a = d.mean();
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::domain_error("size_bias: mean of " + d.describe() +
                                " is zero or undefined; the transform needs E X in (0, inf)");
    switch (d.kind()) {
        case Kind::Atoms:
        case Kind::Empirical: {
            std::vector<Atom> out;
            for (const Atom& at : d.as_atoms()) {
                const double p = at.value * at.prob / a;
                if (at.value > 0.0 && p >= kAtomDropTol) out.push_back({at.value, p});
            }
            double total = 0.0;
            for (const Atom& at : out) total += at.prob;
            for (Atom& at : out) at.prob /= total;
            return Distribution::atoms(std::move(out));
        }
        case Kind::Grid: {
            GridFunction g = d.grid();
            for (std::size_t i = 0; i < g.size(); ++i) g.values[i] *= g.x_at(i) / a;
            const double total = g.integral();
            for (double& v : g.values) v /= total;
            return Distribution::grid_density(std::move(g));
        }
        case Kind::Family:
            return catalogue_bias(d.family_name(), d.params()).to_distribution();
    }
    throw std::logic_error("size_bias: unreachable");
}

double moment(const Distribution& d, int n) { return d.moment(n); }

QuantileCoupler::QuantileCoupler(Distribution d) : d_(std::move(d)), star_(size_bias(d_)) {}

CoupledSample QuantileCoupler::draw(RngStream& rng) const {
    const double u = rng.uniform();
    const double x = d_.quantile(u);
    double xs = star_.quantile(u);
    if (xs < x) xs = x;  // kill roundoff; dominance holds in exact arithmetic
    return {x, xs, xs - x};
}

CoupledSample quantile_couple(const Distribution& d, RngStream& rng) {
    return QuantileCoupler(d).draw(rng);
}

std::vector<double> sample(const Distribution& d, RngStream& rng, std::size_t n) {
    return d.sample(rng, n);
}

}  // namespace sizebias
