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

#include "sizebias/rules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sizebias/mathfn.hpp"

namespace sizebias {

namespace {

std::vector<Atom> merge_sorted(std::vector<Atom> as) {
    std::sort(as.begin(), as.end(), [](const Atom& l, const Atom& r) { return l.value < r.value; });
    std::vector<Atom> out;
    for (const Atom& a : as) {
        if (!out.empty() && std::fabs(out.back().value - a.value) <= 1e-12 * (1.0 + std::fabs(a.value)))
            out.back().prob += a.prob;
        else
            out.push_back(a);
    }
    return out;
}

// Convolve two atom lists, keeping everything; caller truncates at the end.
std::vector<Atom> convolve(const std::vector<Atom>& a, const std::vector<Atom>& b) {
    std::vector<Atom> out;
    out.reserve(a.size() * b.size());
    for (const Atom& x : a)
        for (const Atom& y : b) out.push_back({x.value + y.value, x.prob * y.prob});
    return merge_sorted(std::move(out));
}

std::vector<Atom> truncate_mass(std::vector<Atom> as, double mass_tol, double* tail_mass) {
    double cum = 0.0;
    std::size_t keep = as.size();
    for (std::size_t i = 0; i < as.size(); ++i) {
        cum += as[i].prob;
        if (cum >= 1.0 - mass_tol) {
            keep = i + 1;
            break;
        }
    }
    double dropped = 0.0;
    for (std::size_t i = keep; i < as.size(); ++i) dropped += as[i].prob;
    as.resize(keep);
    if (tail_mass) *tail_mass = dropped;
    return as;
}

}  // namespace

// ---------------------------------------------------------------------------
// LawDescriptor

double LawDescriptor::mean() const {
    double m = shift;
    for (const Distribution& t : terms) m += t.mean();
    return m;
}

double LawDescriptor::moment(int n) const {
    if (n < 0) throw std::invalid_argument("moment: order must be >= 0");
    // Moment sequence of the running sum, folded one summand at a time:
    // E (A+B)^n = sum_k C(n,k) E A^k E B^(n-k).
    std::vector<double> m(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) m[k] = std::pow(shift, k);
    for (const Distribution& t : terms) {
        std::vector<double> tm(m.size()), nm(m.size());
        for (int k = 0; k <= n; ++k) tm[k] = t.moment(k);
        for (int j = 0; j <= n; ++j) {
            double s = 0.0;
            for (int k = 0; k <= j; ++k)
                s += std::exp(mathfn::lchoose(j, k)) * m[k] * tm[j - k];
            nm[j] = s;
        }
        m = std::move(nm);
    }
    return m[static_cast<std::size_t>(n)];
}

bool LawDescriptor::discrete() const {
    for (const Distribution& t : terms)
        if (!t.is_discrete()) return false;
    return true;
}

double LawDescriptor::sample(RngStream& rng) const {
    double s = shift;
    for (const Distribution& t : terms) s += t.sample(rng);
    return s;
}

std::vector<Atom> LawDescriptor::to_atoms(double mass_tol, double* tail_mass) const {
    if (!discrete()) throw std::invalid_argument("LawDescriptor::to_atoms: continuous summand");
    std::vector<Atom> acc{{shift, 1.0}};
    for (const Distribution& t : terms) acc = convolve(acc, t.as_atoms());
    return truncate_mass(std::move(acc), mass_tol, tail_mass);
}

Distribution LawDescriptor::to_distribution() const {
    if (terms.empty()) return Distribution::degenerate(shift);
    if (terms.size() == 1 && shift == 0.0) return terms.front();
    if (discrete()) return Distribution::atoms(to_atoms(1e-15));
    throw std::invalid_argument("LawDescriptor: cannot materialize a shifted continuous composite");
}

std::string LawDescriptor::describe() const {
    std::ostringstream os;
    bool first = true;
    if (shift != 0.0) {
        os << shift;
        first = false;
    }
    for (const Distribution& t : terms) {
        if (!first) os << " + ";
        os << t.describe();
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// Sum rules

MixtureRep sum_bias(const std::vector<Distribution>& ds) {
    if (ds.empty()) throw std::invalid_argument("sum_bias: empty summand list");
    double a = 0.0;
    for (const Distribution& d : ds) a += d.mean();
    if (!(a > 0.0)) throw std::domain_error("sum_bias: all summands have zero mean");
    MixtureRep rep;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (ds[i].mean() <= 0.0) continue;  // weight 0, never the biased pick
        MixtureComponent comp;
        comp.weight = ds[i].mean() / a;
        comp.index = i;
        for (std::size_t j = 0; j < ds.size(); ++j)
            if (j != i) comp.law.terms.push_back(ds[j]);
        comp.law.terms.push_back(size_bias(ds[i]));
        rep.components.push_back(std::move(comp));
    }
    return rep;
}

double MixtureRep::sample(RngStream& rng) const {
    const double u = rng.uniform();
    double cum = 0.0;
    for (const MixtureComponent& c : components) {
        cum += c.weight;
        if (u <= cum) return c.law.sample(rng);
    }
    return components.back().law.sample(rng);
}

std::vector<Atom> MixtureRep::to_atoms(double mass_tol) const {
    std::vector<Atom> acc;
    for (const MixtureComponent& c : components)
        for (const Atom& a : c.law.to_atoms(mass_tol)) acc.push_back({a.value, c.weight * a.prob});
    return merge_sorted(std::move(acc));
}

LawDescriptor iid_sum_bias(const Distribution& d, int n) {
    if (n < 1) throw std::invalid_argument("iid_sum_bias: need n >= 1");
    LawDescriptor law;
    law.terms.push_back(size_bias(d));
    for (int i = 1; i < n; ++i) law.terms.push_back(d);
    return law;
}

// ---------------------------------------------------------------------------
// Product rule

ProductLaw product_bias(const std::vector<Distribution>& ds) {
    if (ds.empty()) throw std::invalid_argument("product_bias: empty factor list");
    ProductLaw law;
    for (const Distribution& d : ds) law.factors.push_back(size_bias(d));
    return law;
}

double ProductLaw::sample(RngStream& rng) const {
    double w = 1.0;
    for (const Distribution& f : factors) w *= f.sample(rng);
    return w;
}

std::vector<Atom> ProductLaw::to_atoms() const {
    std::vector<Atom> acc{{1.0, 1.0}};
    for (const Distribution& f : factors) {
        const auto& fa = f.as_atoms();
        if (acc.size() * fa.size() > 1000000)
            throw std::invalid_argument("ProductLaw::to_atoms: outcome space too large");
        std::vector<Atom> next;
        next.reserve(acc.size() * fa.size());
        for (const Atom& x : acc)
            for (const Atom& y : fa) next.push_back({x.value * y.value, x.prob * y.prob});
        acc = merge_sorted(std::move(next));
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Catalogue

LawDescriptor catalogue_bias(FamilyName name, const std::map<std::string, double>& params) {
    LawDescriptor out;
    switch (name) {
        case FamilyName::Poisson:
            out.shift = 1.0;
            out.terms.push_back(Distribution::poisson(params.at("lambda")));
            return out;
        case FamilyName::Binomial: {
            const double n = params.at("n"), p = params.at("p");
            if (n < 1.0) throw std::domain_error("catalogue_bias: binomial needs n >= 1");
            if (!(p > 0.0)) throw std::domain_error("catalogue_bias: binomial with p = 0 has zero mean");
            out.shift = 1.0;
            if (n >= 2.0) out.terms.push_back(Distribution::binomial(n - 1.0, p));
            return out;
        }
        case FamilyName::Bernoulli:
            if (!(params.at("p") > 0.0))
                throw std::domain_error("catalogue_bias: bernoulli with p = 0 has zero mean");
            out.shift = 1.0;
            return out;
        case FamilyName::Beta:
            out.terms.push_back(Distribution::beta(params.at("a"), params.at("b") + 1.0));
            return out;
        case FamilyName::Geometric: {
            const double q = params.at("q");
            out.shift = 1.0;
            out.terms.push_back(Distribution::geometric(q));
            out.terms.push_back(Distribution::geometric(q));
            return out;
        }
        case FamilyName::NegativeBinomial: {
            const double t = params.at("t"), q = params.at("q");
            out.shift = 1.0;
            out.terms.push_back(Distribution::negative_binomial(t, q));
            out.terms.push_back(Distribution::geometric(q));
            return out;
        }
        case FamilyName::Exponential:
            out.terms.push_back(Distribution::gamma(params.at("alpha"), 2.0));
            return out;
        case FamilyName::Gamma:
            out.terms.push_back(Distribution::gamma(params.at("alpha"), params.at("t") + 1.0));
            return out;
        case FamilyName::Lognormal: {
            const double mu = params.at("mu"), sg = params.at("sigma");
            out.terms.push_back(Distribution::lognormal(mu + sg * sg, sg));
            return out;
        }
        case FamilyName::ScaledPoisson: {
            const double y = params.at("y");
            out.shift = y;
            out.terms.push_back(Distribution::scaled_poisson(y, params.at("lambda")));
            return out;
        }
    }
    throw std::invalid_argument("catalogue_bias: unknown family; use the generic size_bias transform");
}

// ---------------------------------------------------------------------------
// Scaling

Distribution scale(const Distribution& d, double y) {
    if (!(y > 0.0)) throw std::invalid_argument("scale: factor must be > 0");
    if (y == 1.0) return d;
    switch (d.kind()) {
        case Kind::Atoms:
        case Kind::Empirical: {
            std::vector<Atom> as = d.as_atoms();
            for (Atom& a : as) a.value *= y;
            return Distribution::atoms(std::move(as));
        }
        case Kind::Grid: {
            GridFunction g = d.grid();
            g.h *= y;
            for (double& v : g.values) v /= y;
            return Distribution::grid_density(std::move(g));
        }
        case Kind::Family: break;
    }
    const auto& p = d.params();
    switch (d.family_name()) {
        case FamilyName::Poisson: return Distribution::scaled_poisson(y, p.at("lambda"));
        case FamilyName::ScaledPoisson:
            return Distribution::scaled_poisson(y * p.at("y"), p.at("lambda"));
        case FamilyName::Exponential: return Distribution::exponential(p.at("alpha") / y);
        case FamilyName::Gamma: return Distribution::gamma(p.at("alpha") / y, p.at("t"));
        case FamilyName::Lognormal:
            return Distribution::lognormal(p.at("mu") + std::log(y), p.at("sigma"));
        case FamilyName::Binomial:
        case FamilyName::Bernoulli:
        case FamilyName::Geometric:
        case FamilyName::NegativeBinomial: {
            std::vector<Atom> as = d.as_atoms();
            for (Atom& a : as) a.value *= y;
            return Distribution::atoms(std::move(as));
        }
        case FamilyName::Beta: {
            // No scaled-beta family; tabulate and stretch the grid.
            GridFunction g = d.as_grid(1.0 / 4096.0, 1.0);
            g.h *= y;
            for (double& v : g.values) v /= y;
            return Distribution::grid_density(std::move(g));
        }
    }
    throw std::logic_error("scale: unreachable");
}

}  // namespace sizebias
