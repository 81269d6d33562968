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

// Command-line front end: every experiment is reproducible from one --seed
// flag, all randomness flows through named substreams, and result files are
// written atomically.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sizebias/distribution.hpp"
#include "sizebias/estimate.hpp"
#include "sizebias/levy.hpp"
#include "sizebias/mathfn.hpp"
#include "sizebias/renewal.hpp"
#include "sizebias/rules.hpp"
#include "sizebias/specialfn.hpp"
#include "sizebias/stats.hpp"
#include "sizebias/suite.hpp"

namespace {

using namespace sizebias;

// "@path" arguments are file references, anything else is a literal.
std::string load_literal(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return arg;
    std::ifstream in(arg.substr(1));
    if (!in) throw std::invalid_argument("cannot open file: " + arg.substr(1));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::fputs(content.c_str(), stdout);
        if (!content.empty() && content.back() != '\n') std::fputc('\n', stdout);
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot move " + tmp + " to " + path);
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Options {
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t n = 100000;
    double h = 1e-3;
    double umax = 15.0;
    std::string out;
    std::string format = "json";
};

int cmd_bias(const std::string& dist_arg, const Options& opt) {
    const Distribution d = Distribution::from_json_text(load_literal(dist_arg));
    const Distribution biased = size_bias(d);
    std::string descriptor = biased.describe();
    if (d.kind() == Kind::Family)
        descriptor = catalogue_bias(d.family_name(), d.params()).describe();
    if (opt.format == "csv") {
        std::ostringstream os;
        os << "input,biased,descriptor\n"
           << '"' << d.describe() << "\",\"" << biased.describe() << "\",\"" << descriptor
           << "\"\n";
        write_output(opt.out, os.str());
    } else {
        nlohmann::json j;
        j["input"] = nlohmann::json::parse(d.to_json_text());
        j["biased"] = nlohmann::json::parse(biased.to_json_text());
        j["descriptor"] = descriptor;
        write_output(opt.out, j.dump(2));
    }
    std::fprintf(stdout, "%s* = %s\n", d.describe().c_str(), descriptor.c_str());
    return 0;
}

int cmd_levy(const std::string& nu_arg, double eps, const Options& opt) {
    const LevyMeasure nu = LevyMeasure::from_json_text(load_literal(nu_arg));
    RngStream rng = RngStream::substream(opt.seed, "cli-levy", 0);
    const SteutelReport rep = verify_steutel(nu, opt.n, rng, eps);
    write_output(opt.out, nlohmann::json::parse(rep.to_json_text()).dump(2));
    return 0;
}

int cmd_deconv(const std::string& dist_arg, double umax, std::size_t points, const Options& opt) {
    const Distribution d = Distribution::from_json_text(load_literal(dist_arg));
    const DeconvReport rep = deconvolution_check(d, make_ugrid(-umax, umax, points));
    write_output(opt.out, nlohmann::json::parse(rep.to_json_text()).dump(2));
    return 0;
}

int cmd_renewal(const std::string& dist_arg, std::vector<double> ts, const Options& opt) {
    const Distribution d = Distribution::from_json_text(load_literal(dist_arg));
    if (ts.empty()) ts = {0.0, 0.37 * d.mean(), 3.1 * d.mean()};
    RngStream ref_rng = RngStream::substream(opt.seed, "cli-renewal", 0);
    const std::vector<double> w0 = simulate_waiting(d, 0.0, opt.n, ref_rng);
    std::ostringstream os;
    os << "t,mean_W,se,ks_stat\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        RngStream rng = RngStream::substream(opt.seed, "cli-renewal", i + 1);
        const std::vector<double> w = simulate_waiting(d, ts[i], opt.n, rng);
        double m = 0.0;
        for (double v : w) m += v;
        m /= static_cast<double>(w.size());
        double s2 = 0.0;
        for (double v : w) s2 += (v - m) * (v - m);
        const double se = std::sqrt(s2 / static_cast<double>(w.size())) /
                          std::sqrt(static_cast<double>(w.size()));
        const double ks = ecdf_sup_distance(w, w0);
        os << csv_num(ts[i]) << ',' << csv_num(m) << ',' << csv_num(se) << ',' << csv_num(ks)
           << "\n";
    }
    write_output(opt.out, os.str());
    return 0;
}

int cmd_midzuno(const std::string& pop_path, std::size_t m, const std::string& scheme_name,
                const Options& opt) {
    std::ifstream in(pop_path);
    if (!in) throw std::invalid_argument("cannot open population CSV: " + pop_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const Population pop = Population::from_csv_text(ss.str());
    const Scheme scheme = scheme_name == "srs" ? Scheme::Srs : Scheme::Midzuno;

    double est_mean = 0.0;
    bool exact = true;
    try {
        est_mean = exact_expectation(pop, m, scheme);
    } catch (const std::invalid_argument&) {
        if (!opt.seed_set)
            throw std::invalid_argument(
                "population too large for exact enumeration; pass --seed for Monte Carlo");
        exact = false;
        RngStream rng = RngStream::substream(opt.seed, "cli-midzuno", 0);
        double acc = 0.0;
        for (std::size_t i = 0; i < opt.n; ++i) {
            const auto idx = scheme == Scheme::Srs ? srs_sample(pop, m, rng)
                                                   : midzuno_sample(pop, m, rng);
            acc += ratio_estimate(pop, idx);
        }
        est_mean = acc / static_cast<double>(opt.n);
    }
    nlohmann::json j;
    j["scheme"] = scheme == Scheme::Srs ? "srs" : "midzuno";
    j["m"] = m;
    j["estimate_mean"] = est_mean;
    j["true_ratio"] = pop.true_ratio();
    j["bias"] = est_mean - pop.true_ratio();
    j["exact_enumeration"] = exact;
    write_output(opt.out, j.dump(2));
    return 0;
}

int cmd_dickman(const std::vector<double>& evals, double conv_a, const Options& opt) {
    const GridFunction rho = dickman_rho(opt.umax, opt.h);
    const bool with_g = conv_a > 0.0;
    GridFunction g = rho;
    if (with_g) g = dickman_conv_power(conv_a, opt.umax, opt.h);
    for (double x : evals) {
        std::fprintf(stdout, "rho(%g) = %.6f\n", x, rho(x));
        if (with_g) std::fprintf(stdout, "g_%g(%g) = %.6f\n", conv_a, x, g(x));
    }
    if (opt.umax >= 10.0)
        std::fprintf(stdout, "integral = %.7f (e^gamma = %.7f)\n", dickman_integral(rho),
                     std::exp(mathfn::kEulerGamma));
    if (!opt.out.empty()) {
        std::ostringstream os;
        os << (with_g ? "x,rho,g\n" : "x,rho\n");
        for (std::size_t i = 0; i < rho.size(); ++i) {
            os << csv_num(rho.x_at(i)) << ',' << csv_num(rho.values[i]);
            if (with_g) os << ',' << csv_num(g.values[i]);
            os << "\n";
        }
        write_output(opt.out, os.str());
    }
    return 0;
}

int cmd_buchstab(const std::vector<double>& evals, const Options& opt) {
    const GridFunction omega = buchstab_omega(std::max(opt.umax, 2.0), opt.h);
    for (double u : evals) std::fprintf(stdout, "omega(%g) = %.6f\n", u, omega(u));
    if (!opt.out.empty()) {
        std::ostringstream os;
        os << "u,omega\n";
        for (std::size_t i = 0; i < omega.size(); ++i)
            os << csv_num(omega.x_at(i)) << ',' << csv_num(omega.values[i]) << "\n";
        write_output(opt.out, os.str());
    }
    return 0;
}

int cmd_primes(std::uint64_t nmax, double u, const Options& opt) {
    const PrimeFactorStats s = prime_factor_empirics(nmax, u);
    write_output(opt.out, nlohmann::json::parse(s.to_json_text()).dump(2));
    return 0;
}

int cmd_suite(const Options& opt) {
    const auto results = run_acceptance_suite(opt.seed_set ? opt.seed : kSuiteSeed);
    const std::string table = format_suite_table(results);
    std::fputs(table.c_str(), stdout);
    if (!opt.out.empty()) write_output(opt.out, table);
    for (const auto& r : results)
        if (!r.pass) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"size-bias toolkit: transforms, couplings, Levy representations, "
                 "renewal and sampling experiments"};
    app.require_subcommand(0, 1);

    Options opt;
    std::string dist_arg, nu_arg, pop_path, scheme_name = "midzuno";
    std::vector<double> evals, ts;
    double eps = 0.0, conv_a = 0.0, umax_deconv = 20.0, u = 2.0;
    std::size_t points = 2048, m = 1;
    std::uint64_t nmax = 1000000;

    app.set_help_flag("--help", "print help and exit");  // frees -h for --h below

    auto add_common = [&](CLI::App* sub, bool needs_seed) {
        sub->set_help_flag("--help", "print help and exit");
        auto* s = sub->add_option("--seed", opt.seed, "root seed for all substreams");
        if (needs_seed) s->required();
        s->each([&](const std::string&) { opt.seed_set = true; });
        sub->add_option("--n", opt.n, "Monte Carlo sample size");
        sub->add_option("--out", opt.out, "output file (stdout if omitted)");
        sub->add_option("--format", opt.format, "output format: json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
    };

    auto* bias = app.add_subcommand("bias", "size bias a distribution literal");
    bias->add_option("--dist", dist_arg, "distribution JSON literal or @file")->required();
    add_common(bias, false);

    auto* levy = app.add_subcommand("levy", "build an infinitely divisible law from nu and "
                                            "verify the independent-increment coupling");
    levy->add_option("--nu", nu_arg, "Levy measure JSON literal or @file")->required();
    levy->add_option("--eps", eps, "truncation threshold for infinite-activity mu");
    add_common(levy, true);

    auto* deconv = app.add_subcommand("deconv", "non-divisibility certificate via eta = phi*/phi");
    deconv->add_option("--dist", dist_arg, "distribution JSON literal or @file")->required();
    deconv->add_option("--umax", umax_deconv, "grid half-width (default 20)");
    deconv->add_option("--points", points, "grid points (default 2048)");
    add_common(deconv, false);

    auto* renewal = app.add_subcommand("renewal", "stationary waiting-time experiment");
    renewal->add_option("--dist", dist_arg, "interarrival JSON literal or @file")->required();
    renewal->add_option("--t", ts, "clock times (default 0, 0.37a, 3.1a)");
    add_common(renewal, true);

    auto* midzuno = app.add_subcommand("midzuno", "unbiased ratio estimation experiment");
    midzuno->add_option("--pop", pop_path, "population CSV with x,y columns")->required();
    midzuno->add_option("--m", m, "sample size")->required();
    midzuno->add_option("--scheme", scheme_name, "midzuno or srs")
        ->check(CLI::IsMember({"midzuno", "srs"}));
    add_common(midzuno, false);

    auto* dickman = app.add_subcommand("dickman", "tabulate Dickman's rho (and g_a with --a)");
    dickman->add_option("--umax", opt.umax, "tabulation limit (default 15)");
    dickman->add_option("--h", opt.h, "grid step (default 1e-3)");
    dickman->add_option("--eval", evals, "evaluation points");
    dickman->add_option("--a", conv_a, "also tabulate the convolution power g_a");
    add_common(dickman, false);

    auto* buchstab = app.add_subcommand("buchstab", "tabulate Buchstab's omega");
    buchstab->add_option("--umax", opt.umax, "tabulation limit (default 15)");
    buchstab->add_option("--h", opt.h, "grid step (default 1e-3)");
    buchstab->add_option("--eval", evals, "evaluation points");
    add_common(buchstab, false);

    auto* primes = app.add_subcommand("primes", "smooth/rough integer fractions by sieve");
    primes->add_option("--nmax", nmax, "sieve limit (default 1e6)");
    primes->add_option("--u", u, "threshold exponent: cutoff nmax^(1/u)");
    add_common(primes, false);

    auto* suite = app.add_subcommand("suite", "run the full verification checklist");
    add_common(suite, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::fputs(app.help().c_str(), stderr);
        return 2;
    }

    try {
        if (bias->parsed()) return cmd_bias(dist_arg, opt);
        if (levy->parsed()) return cmd_levy(nu_arg, eps, opt);
        if (deconv->parsed()) return cmd_deconv(dist_arg, umax_deconv, points, opt);
        if (renewal->parsed()) return cmd_renewal(dist_arg, ts, opt);
        if (midzuno->parsed()) return cmd_midzuno(pop_path, m, scheme_name, opt);
        if (dickman->parsed()) return cmd_dickman(evals, conv_a, opt);
        if (buchstab->parsed()) return cmd_buchstab(evals, opt);
        if (primes->parsed()) return cmd_primes(nmax, u, opt);
        if (suite->parsed()) return cmd_suite(opt);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 0;
}
