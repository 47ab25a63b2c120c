#include "duffmel/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "duffmel/checks.hpp"
#include "duffmel/errors.hpp"
#include "duffmel/melnikov.hpp"
#include "duffmel/oracle.hpp"
#include "duffmel/zeros.hpp"

namespace duffmel {

using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitTolerance = 3;
constexpr int kExitNumerical = 4;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct RunConfig {
    std::string command;
    std::string params;
    std::string random;
    std::vector<std::string> annulus;
    int order = 1;
    std::optional<double> h;
    double im = 0.0;
    std::string h_grid;
    std::string eps_list;
    std::string contour;
    std::string what = "m1";
    int draws = 0;
    std::uint64_t seed = 1;
    std::string out;
    std::string samples;
    std::string fault;
};

std::vector<double> parse_list(const std::string& text, const std::string& field) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError(field + ": cannot parse number '" + tok + "'");
        }
        if (!std::isfinite(v.back())) throw UsageError(field + ": values must be finite");
    }
    if (v.empty()) throw UsageError(field + ": empty list");
    return v;
}

// "a:b:n" gives n evenly spaced values; otherwise a comma-separated list.
std::vector<double> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_list(text, "--h-grid");
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(parse_list(tok, "--h-grid").front());
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2]))
        throw UsageError("--h-grid: expected LO:HI:N with integer N >= 1");
    const int n = static_cast<int>(parts[2]);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * i / (n - 1);
    return v;
}

std::vector<Annulus> annuli(const RunConfig& c, std::vector<Annulus> fallback) {
    if (c.annulus.empty()) return fallback;
    std::vector<Annulus> out;
    for (const auto& name : c.annulus) {
        const Annulus a = parse_annulus(name);
        if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
    return out;
}

Contour parse_contour(const RunConfig& c) {
    if (c.contour.empty()) return {};
    const auto v = parse_list(c.contour, "--contour");
    if (v.size() != 3) throw UsageError("--contour: expected R,ETA,RHO");
    const Contour k{v[0], v[1], v[2]};
    if (!(k.R > 1.0)) throw UsageError("--contour: R must exceed 1");
    if (!(k.eta > 0.0 && k.eta <= 1e-2)) throw UsageError("--contour: ETA must lie in (0, 1e-2]");
    if (!(k.rho > 0.0 && k.rho <= 1e-2)) throw UsageError("--contour: RHO must lie in (0, 1e-2]");
    return k;
}

std::vector<double> h_levels(const RunConfig& c, Annulus a, std::vector<double> fallback) {
    std::vector<double> h;
    if (c.h) h.push_back(*c.h);
    if (!c.h_grid.empty()) {
        const auto g = parse_grid(c.h_grid);
        h.insert(h.end(), g.begin(), g.end());
    }
    if (h.empty()) return fallback;
    const Interval s = sigma(a);
    std::vector<double> inside;
    for (double v : h)
        if (s.contains(v)) inside.push_back(v);
    return inside;
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["params"] = c.params;
    j["random"] = c.random;
    j["annulus"] = c.annulus;
    j["order"] = c.order;
    j["h"] = c.h ? json(*c.h) : json(nullptr);
    j["im"] = c.im;
    j["h_grid"] = c.h_grid;
    j["eps_list"] = c.eps_list;
    j["contour"] = c.contour;
    j["what"] = c.what;
    j["draws"] = c.draws;
    j["seed"] = c.seed;
    j["out"] = c.out;
    if (!c.fault.empty()) j["fault_inject"] = c.fault;
    return j;
}

// Parameters for one annulus: a file, a seeded random draw, or all zero.
PerturbationParams resolve_params(const RunConfig& c, Annulus a) {
    if (!c.params.empty()) return load_params(c.params);
    if (c.random.empty()) return {};
    std::mt19937_64 rng(c.seed);
    return random_params(rng, c.random == "constrained", a);
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw UsageError("--out: cannot open '" + path + "' for writing");
    }
    bool active() const { return file_.is_open(); }
    void line(const std::string& s) {
        if (active()) file_ << s << '\n';
    }

private:
    std::ofstream file_;
};

json poly_json(const Polynomial& p) {
    json a = json::array();
    for (int k = 0; k <= p.degree(); ++k) a.push_back(p.coeff(k));
    return a;
}

std::string poly_text(const Polynomial& p) {
    std::string s = "[";
    for (int k = 0; k <= std::max(0, p.degree()); ++k) s += (k ? ", " : "") + fmt("%.12g", p.coeff(k));
    return s + "]";
}

json form_json(const MelnikovForm& f) {
    return {{"order", f.order},
            {"annulus", std::string(to_string(f.annulus))},
            {"poly0", poly_json(f.poly0)},
            {"poly1", poly_json(f.poly1)},
            {"poly2", poly_json(f.poly2)},
            {"prefactor", f.prefactor == Prefactor::One ? "1" : "1/(4h+1)"}};
}

void print_form(std::ostream& out, const char* label, const MelnikovForm& f) {
    out << "  " << label << "  poly0 " << poly_text(f.poly0) << "  poly1 " << poly_text(f.poly1)
        << "  poly2 " << poly_text(f.poly2)
        << "  prefactor " << (f.prefactor == Prefactor::One ? "1" : "1/(4h+1)") << '\n';
}

std::vector<double> default_levels(Annulus a) {
    if (is_interior(a)) return {-0.2, -0.15, -0.1, -0.05, -0.02};
    return {0.25, 0.5, 1.0, 2.0, 4.0};
}

std::vector<double> oracle_levels(Annulus a) {
    if (is_interior(a)) return {-0.2, -0.125, -0.05};
    return {0.5, 1.0, 2.0};
}

int cmd_coeffs(const RunConfig& c, std::ostream& out) {
    Output file(c.out);
    file.line(json{{"config", config_json(c)}}.dump());
    bool ok = true;
    for (Annulus a : annuli(c, {Annulus::InteriorRight, Annulus::Exterior})) {
        const PerturbationParams p = resolve_params(c, a);
        const MelnikovForm m1 = m1_form(p, a);
        const auto residuals = m1_vanishing_residuals(p, a);
        double worst = 0.0;
        for (double r : residuals) worst = std::max(worst, std::abs(r));
        out << "annulus " << to_string(a) << '\n';
        print_form(out, "M1", m1);
        out << "  M1 vanishing residuals";
        for (double r : residuals) out << ' ' << fmt("%.3e", r);
        out << '\n';
        json rec{{"annulus", std::string(to_string(a))},
                 {"params", json::parse(params_to_json(p))},
                 {"m1", form_json(m1)},
                 {"m1_residuals", residuals}};
        if (worst <= kM1ZeroTol) {
            const MelnikovForm m2 = m2_form(p, a);
            print_form(out, "M2", m2);
            rec["m2"] = form_json(m2);
            out << fmt("  %10s %22s %22s %10s %8s\n", "h", "M2 formula", "M2 oracle", "rel err", "tol");
            json rows = json::array();
            for (double h : h_levels(c, a, default_levels(a))) {
                const PeriodVector pv = period_vector(h, a);
                const double formula = std::real(m_eval(m2, h, pv));
                const double oracle = m2_iliev_quadrature(p, h, a);
                const double scale = std::max(m_eval_scale(m2, h, pv), 1e-300);
                const double err = std::abs(formula - oracle) / scale;
                const bool agree = err <= 1e-7 || (scale < 1e-14 && std::abs(oracle) < 1e-14);
                ok = ok && agree;
                out << fmt("  %10.6g %22.15e %22.15e %10.2e %8.0e%s\n", h, formula, oracle, err, 1e-7,
                           agree ? "" : "  MISMATCH");
                rows.push_back({{"h", h}, {"formula", formula}, {"oracle", oracle}, {"rel_err", err},
                                {"tol", 1e-7}});
            }
            rec["m2_oracle"] = rows;
            const DeviationReport dev = m2_deviations(p, a, h_levels(c, a, default_levels(a)));
            double printed_err = 0.0;
            for (const auto& v : dev.values) printed_err = std::max(printed_err, v.printed_rel_err);
            out << "  printed M2 coefficients vs oracle: max rel err " << fmt("%.3e", printed_err)
                << (dev.printed_consistent ? " (consistent)" : " (deviates; corrected form governs)")
                << '\n';
            for (const auto& d : dev.coefficients)
                out << "    " << d.slot << "  printed " << fmt("%.12g", d.printed) << "  corrected "
                    << fmt("%.12g", d.corrected) << '\n';
            rec["deviations"] = json::parse(to_json(dev));
        } else {
            out << "  M2 not reported: M1 does not vanish identically\n";
        }
        file.line(rec.dump());
    }
    return ok ? 0 : kExitTolerance;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
    Output file(c.out);
    file.line(json{{"config", config_json(c)}}.dump());
    const double perturbation = c.fault == "pf" ? 1e-3 : 0.0;
    std::vector<CheckItem> items;
    auto add = [&](std::vector<CheckItem> v) { items.insert(items.end(), v.begin(), v.end()); };
    for (Annulus a : annuli(c, {Annulus::InteriorRight, Annulus::Exterior}))
        add(check_picard_fuchs(a, 50, perturbation));
    add(check_saddle_constants());
    add(check_i1_structure());
    add(check_i0_nonvanishing());
    add(check_wronskian());
    add(check_asymptotic_slope());
    std::vector<std::string> failed;
    for (const auto& it : items) {
        out << format_item(it) << '\n';
        file.line(json{{"name", it.name},
                       {"measured", it.measured},
                       {"tolerance", it.tolerance},
                       {"pass", it.pass},
                       {"diagnostic", it.diagnostic},
                       {"detail", it.detail}}
                      .dump());
        if (!it.pass && !it.diagnostic) failed.push_back(it.name);
    }
    if (failed.empty()) {
        out << "all checks passed\n";
        return 0;
    }
    out << "failed:";
    for (const auto& f : failed) out << ' ' << '"' << f << '"';
    out << '\n';
    return kExitTolerance;
}

int cmd_zeros(const RunConfig& c, std::ostream& out) {
    if (c.order != 1 && c.order != 2) throw UsageError("--order must be 1 or 2");
    const Contour contour = parse_contour(c);
    Output file(c.out);
    file.line(json{{"config", config_json(c)}}.dump());
    bool violated = false;
    for (Annulus a : annuli(c, {Annulus::InteriorRight, Annulus::Exterior})) {
        CertificationContext ctx(a, contour);
        std::vector<PerturbationParams> draws;
        if (!c.params.empty()) {
            PerturbationParams p = load_params(c.params);
            draws.push_back(p);
        } else {
            std::mt19937_64 rng(c.seed);
            const int n = c.draws > 0 ? c.draws : 1;
            for (int i = 0; i < n; ++i) draws.push_back(random_params(rng, c.order == 2, a));
        }
        int max_real = 0, max_wind = 0;
        std::map<CertificateStatus, int> counts;
        for (const auto& p : draws) {
            const ZeroCertificate z = certify(p, c.order, ctx);
            max_real = std::max(max_real, static_cast<int>(z.real_roots.size()));
            max_wind = std::max(max_wind, z.winding_count);
            counts[z.status]++;
            violated = violated || z.status == CertificateStatus::BoundViolated;
            file.line(to_json(z));
        }
        out << fmt("%-15s order %d  draws %zu  max real roots %d  max winding %d  bound %d",
                   std::string(to_string(a)).c_str(), c.order, draws.size(), max_real, max_wind,
                   paper_bound(a, c.order));
        for (const auto& [s, n] : counts) out << "  " << to_string(s) << ' ' << n;
        out << '\n';
        file.line(json{{"summary",
                        {{"annulus", std::string(to_string(a))},
                         {"order", c.order},
                         {"draws", draws.size()},
                         {"max_real_roots", max_real},
                         {"max_winding", max_wind},
                         {"paper_bound", paper_bound(a, c.order)}}}}
                      .dump());
    }
    return violated ? kExitTolerance : 0;
}

int cmd_oracle(const RunConfig& c, std::ostream& out) {
    const std::vector<double> eps = c.eps_list.empty() ? default_eps_list() : parse_list(c.eps_list, "--eps-list");
    if (eps.size() < 4) throw UsageError("--eps-list: need at least four values");
    for (double e : eps)
        if (!(e > 0.0 && e <= 0.1)) throw UsageError("--eps-list: values must lie in (0, 0.1]");
    Output file(c.out);
    Output samples(c.samples);
    file.line("# " + json{{"config", config_json(c)}}.dump());
    file.line("annulus,h,order,formula,fit,sigma,abs_err,tol,agree");
    samples.line("# " + json{{"config", config_json(c)}}.dump());
    samples.line("annulus,h,epsilon,d,return_time,integration_tol");
    out << fmt("%-15s %9s %5s %22s %22s %10s %10s %10s\n", "annulus", "h", "order", "formula", "fit", "sigma",
               "abs err", "tol");
    bool ok = true;
    for (Annulus a : annuli(c, {Annulus::InteriorRight, Annulus::Exterior})) {
        const PerturbationParams p = resolve_params(c, a);
        const auto residuals = m1_vanishing_residuals(p, a);
        double worst = 0.0;
        for (double r : residuals) worst = std::max(worst, std::abs(r));
        for (double h : h_levels(c, a, oracle_levels(a))) {
            const PeriodVector pv = period_vector(h, a);
            const MelnikovFit fit = melnikov_fit(h, p, a, eps);
            for (const auto& s : fit.samples)
                samples.line(fmt("%s,%.17g,%.17g,%.17g,%.17g,%.3g", std::string(to_string(a)).c_str(), s.h,
                                 s.epsilon, s.d, s.return_time, s.integration_tol));
            auto row = [&](int order, double formula, double value, double sigma, double rel) {
                const double err = std::abs(value - formula);
                const double tol = std::max(rel * std::abs(formula), 3.0 * sigma);
                const bool agree = err <= tol;
                ok = ok && agree;
                out << fmt("%-15s %9.5g %5d %22.15e %22.15e %10.2e %10.2e %10.2e%s\n",
                           std::string(to_string(a)).c_str(), h, order, formula, value, sigma, err, tol,
                           agree ? "" : "  DISAGREE");
                file.line(fmt("%s,%.17g,%d,%.17g,%.17g,%.6g,%.6g,%.6g,%d", std::string(to_string(a)).c_str(), h,
                              order, formula, value, sigma, err, tol, agree ? 1 : 0));
            };
            row(1, std::real(m_eval(m1_form(p, a), h, pv)), fit.m1, fit.sigma1, 1e-5);
            if (worst <= kM1ZeroTol) row(2, std::real(m_eval(m2_form(p, a), h, pv)), fit.m2, fit.sigma2, 1e-4);
        }
    }
    return ok ? 0 : kExitTolerance;
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
    const std::string& w = c.what;
    int k = -1;
    if (w.size() >= 2 && w[0] == 'I') {
        std::size_t used = 0;
        try {
            k = std::stoi(w.substr(1), &used);
        } catch (const std::exception&) {
            throw UsageError("--what: expected m1, m2 or I<k>");
        }
        if (used != w.size() - 1) throw UsageError("--what: expected m1, m2 or I<k>");
        if (k < 0) throw UsageError("--what: moment index must be nonnegative");
    } else if (w != "m1" && w != "m2") {
        throw UsageError("--what: expected m1, m2 or I<k>");
    }
    std::vector<double> hs;
    if (c.h) hs.push_back(*c.h);
    if (!c.h_grid.empty()) {
        const auto g = parse_grid(c.h_grid);
        hs.insert(hs.end(), g.begin(), g.end());
    }
    if (hs.empty()) throw UsageError("--h or --h-grid is required");
    Output file(c.out);
    file.line(json{{"config", config_json(c)}}.dump());
    for (Annulus a : annuli(c, {Annulus::InteriorRight})) {
        const PerturbationParams p = resolve_params(c, a);
        std::optional<MelnikovForm> form;
        if (w == "m1") form = m1_form(p, a);
        if (w == "m2") form = m2_form(p, a);
        for (double hr : hs) {
            const cplx h(hr, c.im);
            const bool real = c.im == 0.0 && sigma(a).contains(hr);
            cplx value;
            if (form) {
                const PeriodVector pv = real ? period_vector(hr, a) : continue_complex(h, a);
                value = m_eval(*form, h, pv);
            } else if (real) {
                value = integral_I(k, hr, a);
            } else {
                if (k > 2) throw UsageError("--what: complex continuation is available for I0, I1, I2 only");
                const PeriodVector pv = continue_complex(h, a);
                value = k == 0 ? pv.I0 : (k == 1 ? pv.I1 : pv.I2);
            }
            out << fmt("%-15s %s h = %.15g%+.15gi  value = %.17g%+.17gi\n", std::string(to_string(a)).c_str(),
                       w.c_str(), h.real(), h.imag(), value.real(), value.imag());
            file.line(json{{"annulus", std::string(to_string(a))},
                           {"what", w},
                           {"h", {h.real(), h.imag()}},
                           {"value", {value.real(), value.imag()}}}
                          .dump());
        }
    }
    return 0;
}

void add_common(CLI::App* sub, RunConfig& c) {
    sub->add_option("--params", c.params, "perturbation coefficients (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--random", c.random, "seeded random parameters instead of a file")
        ->check(CLI::IsMember({"free", "constrained"}));
    sub->add_option("--annulus", c.annulus, "annulus (repeatable)")
        ->check(CLI::IsMember({"interior-left", "interior-right", "exterior"}));
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--out", c.out, "output file");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Melnikov functions of the perturbed Duffing oscillator"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    auto* coeffs = app.add_subcommand("coeffs", "M1 and M2 coefficient tables");
    add_common(coeffs, c);
    coeffs->add_option("--h-grid", c.h_grid, "levels for the oracle column");

    auto* verify = app.add_subcommand("verify", "period integral checks");
    verify->add_option("--annulus", c.annulus, "annulus (repeatable)")
        ->check(CLI::IsMember({"interior-left", "interior-right", "exterior"}));
    verify->add_option("--out", c.out, "output file");
    verify->add_option("--fault-inject", c.fault)->group("")->check(CLI::IsMember({"pf"}));

    auto* zeros = app.add_subcommand("zeros", "zero-bound certificates");
    add_common(zeros, c);
    zeros->add_option("--order", c.order, "order of the Melnikov function")->check(CLI::IsMember({1, 2}));
    zeros->add_option("--contour", c.contour, "R,ETA,RHO");
    zeros->add_option("--draws", c.draws, "number of random draws")->check(CLI::PositiveNumber);

    auto* oracle = app.add_subcommand("oracle", "formula against the integrated return map");
    add_common(oracle, c);
    oracle->add_option("--h", c.h, "level");
    oracle->add_option("--h-grid", c.h_grid, "levels LO:HI:N or a comma list");
    oracle->add_option("--eps-list", c.eps_list, "comma-separated epsilon values");
    oracle->add_option("--samples", c.samples, "displacement sample table");

    auto* eval = app.add_subcommand("eval", "point evaluation of M1, M2 or I_k");
    add_common(eval, c);
    eval->add_option("--what", c.what, "m1, m2 or I<k>");
    eval->add_option("--h", c.h, "level (real part)");
    eval->add_option("--im", c.im, "imaginary part of the level");
    eval->add_option("--h-grid", c.h_grid, "levels LO:HI:N or a comma list");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitUsage;
    }
    if (!c.params.empty() && !c.random.empty()) {
        err << "error: --params and --random are mutually exclusive\n";
        return kExitUsage;
    }

    try {
        int code = 0;
        if (*coeffs) c.command = "coeffs";
        if (*verify) c.command = "verify";
        if (*zeros) c.command = "zeros";
        if (*oracle) c.command = "oracle";
        if (*eval) c.command = "eval";
        out << "config " << config_json(c).dump() << '\n';
        if (*coeffs) code = cmd_coeffs(c, out);
        if (*verify) code = cmd_verify(c, out);
        if (*zeros) code = cmd_zeros(c, out);
        if (*oracle) code = cmd_oracle(c, out);
        if (*eval) code = cmd_eval(c, out);
        return code;
    } catch (const DomainError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
}

}  // namespace duffmel
