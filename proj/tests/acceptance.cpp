#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "duffmel/checks.hpp"
#include "duffmel/oracle.hpp"
#include "duffmel/zeros.hpp"

using namespace duffmel;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

void absorb(Outcome& o, const std::vector<CheckItem>& items) {
    for (const auto& it : items) {
        o.details.push_back(format_item(it));
        if (!it.pass && !it.diagnostic) o.pass = false;
    }
}

std::vector<PerturbationParams> draws(unsigned seed, int count, bool constrained, Annulus a) {
    std::mt19937_64 rng(seed);
    std::vector<PerturbationParams> out;
    for (int i = 0; i < count; ++i) out.push_back(random_params(rng, constrained, a));
    return out;
}

const std::vector<double>& levels(Annulus a) {
    static const std::vector<double> in{-0.24, -0.18, -0.125, -0.06, -0.01};
    static const std::vector<double> ex{0.05, 0.5, 1.0, 3.0, 10.0};
    return is_interior(a) ? in : ex;
}

Outcome saddle_constants() {
    Outcome o;
    absorb(o, check_saddle_constants());
    o.summary = "interior I0(0-) = 4/3 and I2(0-) = 16/15 to 1e-6";
    return o;
}

Outcome picard_fuchs() {
    Outcome o;
    for (Annulus a : {Annulus::InteriorRight, Annulus::Exterior}) {
        for (CheckItem it : check_picard_fuchs(a, 50)) {
            // reductions on the interior are allowed to fail as a documented restriction
            if (is_interior(a) && it.name.starts_with("reduction") && !it.pass) it.diagnostic = true;
            absorb(o, {it});
        }
    }
    o.summary = "Picard-Fuchs relations and I'2, I'4, I'6 reductions to 1e-8 on 50 levels per annulus";
    return o;
}

Outcome i1_structure() {
    Outcome o;
    absorb(o, check_i1_structure());
    o.summary = "I1 = c(4h+1) on the interior, I1 = 0 on the exterior";
    return o;
}

Outcome m1_closed_form() {
    Outcome o;
    double worst = 0.0;
    int cases = 0;
    for (Annulus a : {Annulus::InteriorRight, Annulus::Exterior}) {
        for (const auto& p : draws(4, 10, false, a)) {
            const MelnikovForm f = m1_form(p, a);
            for (double h : levels(a)) {
                const PeriodVector pv = period_vector(h, a);
                const double err = std::abs(std::real(m_eval(f, h, pv)) - m1_quadrature(p, h, a)) /
                                   m_eval_scale(f, h, pv);
                worst = std::max(worst, err);
                ++cases;
            }
        }
    }
    o.pass = worst <= 1e-9;
    o.summary = fmt("M1 closed form vs quadrature: %d cases, max rel err %.2e (tol 1e-9)", cases, worst);
    return o;
}

Outcome m2_closed_form() {
    Outcome o;
    double worst = 0.0, printed = 0.0;
    int cases = 0, printed_off = 0;
    for (Annulus a : {Annulus::InteriorRight, Annulus::Exterior}) {
        for (const auto& p : draws(5, 20, true, a)) {
            const DeviationReport r = m2_deviations(p, a, levels(a), 1e-7);
            for (const auto& v : r.values) {
                worst = std::max(worst, v.corrected_rel_err);
                printed = std::max(printed, v.printed_rel_err);
                ++cases;
            }
            printed_off += !r.printed_consistent;
        }
    }
    o.pass = worst <= 1e-7;
    o.summary = fmt("M2 closed form vs Iliev quadrature: %d cases, max rel err %.2e (tol 1e-7)", cases, worst);
    o.details.push_back(fmt("NOTE  printed coefficient lists: %d of 40 draws deviate, max rel err %.2e", printed_off,
                            printed));
    return o;
}

Outcome ode_oracle() {
    Outcome o;
    const std::vector<double> eps{5e-4, 2.5e-4, 1.25e-4, 6.25e-5};
    double ratio1 = 0.0, ratio2 = 0.0;
    int cases = 0;
    double min_pooled = 1e300;
    for (Annulus a : {Annulus::InteriorRight, Annulus::InteriorLeft, Annulus::Exterior}) {
        const std::vector<double> hs =
            is_interior(a) ? std::vector<double>{-0.2, -0.125, -0.05} : std::vector<double>{0.5, 1.0, 2.0};
        std::vector<ConvergenceCase> c1, c2;
        double min1 = 1e300, min2 = 1e300;
        for (const auto& p : draws(3, 20, false, a)) {
            const PerturbationParams q = enforce_m1_zero(p, a);
            for (double h : hs) {
                const PeriodVector pv = period_vector(h, a);
                const double m1 = std::real(m_eval(m1_form(p, a), h, pv));
                const double m2 = std::real(m_eval(m2_form(q, a), h, pv));
                const MelnikovFit f1 = melnikov_fit(h, p, a, eps);
                const MelnikovFit f2 = melnikov_fit(h, q, a, eps);
                ratio1 = std::max(ratio1, std::abs(f1.m1 - m1) / std::max(1e-5 * std::abs(m1), 3.0 * f1.sigma1));
                ratio2 = std::max(ratio2, std::abs(f2.m2 - m2) / std::max(1e-4 * std::abs(m2), 3.0 * f2.sigma2));
                c1.push_back({f1.samples, m1});
                c2.push_back({f2.samples, m2});
                min1 = std::min(min1, convergence_order(f1.samples, m1, 1));
                min2 = std::min(min2, convergence_order(f2.samples, m2, 2));
                ++cases;
            }
        }
        const double p1 = pooled_convergence_order(c1, 1), p2 = pooled_convergence_order(c2, 2);
        min_pooled = std::min({min_pooled, p1, p2});
        const bool ok = p1 >= 0.8 && p2 >= 0.8;
        o.details.push_back(fmt("%s  %-15s pooled eps-order M1 %.3f M2 %.3f (min 0.8)", ok ? "PASS" : "FAIL",
                                std::string(to_string(a)).c_str(), p1, p2));
        o.details.push_back(fmt("NOTE  %-15s per-case order minimum M1 %.3f M2 %.3f", std::string(to_string(a)).c_str(),
                                min1, min2));
    }
    o.pass = ratio1 <= 1.0 && ratio2 <= 1.0 && min_pooled >= 0.8;
    o.summary = fmt("return-map fits: %d cases, worst |fit - formula| / tol M1 %.2f M2 %.2f, pooled order >= %.3f",
                    cases, ratio1, ratio2, min_pooled);
    return o;
}

Outcome zero_bounds() {
    Outcome o;
    const int n = 200;
    int worst_excess = 0;
    for (auto [a, order] : {std::pair{Annulus::InteriorRight, 1}, std::pair{Annulus::InteriorRight, 2},
                            std::pair{Annulus::Exterior, 1}, std::pair{Annulus::Exterior, 2}}) {
        CertificationContext ctx(a);
        int max_w = 0, max_real = 0, non_integral = 0, real_excess = 0, over = 0;
        for (const auto& p : draws(2026, n, order == 2, a)) {
            const ZeroCertificate z = certify(p, order, ctx);
            max_w = std::max(max_w, z.winding_count);
            max_real = std::max(max_real, static_cast<int>(z.real_roots.size()));
            non_integral += !z.winding.integral;
            real_excess += static_cast<int>(z.real_roots.size()) > z.winding_count;
            over += z.winding_count > z.paper_bound;
        }
        const int bound = paper_bound(a, order);
        const bool ok = max_w <= bound && non_integral == 0 && real_excess == 0;
        worst_excess = std::max(worst_excess, max_w - bound);
        o.pass = o.pass && ok;
        o.details.push_back(fmt("%s  %-15s order %d  max winding %d (bound %d, %d draws above)  max real roots %d  "
                                "non-integral %d  real > winding %d",
                                ok ? "PASS" : "FAIL", std::string(to_string(a)).c_str(), order, max_w, bound, over,
                                max_real, non_integral, real_excess));
    }
    o.summary = fmt("argument-principle counts over %d draws per class", n);
    return o;
}

Outcome nonvanishing() {
    Outcome o;
    absorb(o, check_i0_nonvanishing(10.0, 20, 20));
    absorb(o, check_wronskian());
    o.summary = "exterior I0, I0' bounded away from 0 on D_R; Wronskian constant per cut segment, jump factor 2";
    return o;
}

Outcome asymptotics() {
    Outcome o;
    absorb(o, check_asymptotic_slope());
    auto circle = [](Annulus a, const PeriodFunction& fn) {
        ContourTable t(a, Contour{});
        return winding_count(fn, t).circle_turns * 2.0;  // in units of pi
    };
    auto note = [&](const char* what, double measured, double expected) {
        const double rel = std::abs(measured - expected) / expected;
        o.details.push_back(fmt("NOTE  circle phase of %s: %.4f pi, expected %.2f pi (%.1f%%, soft 5%%)", what, measured,
                                expected, 100.0 * rel));
    };
    note("h I0 (interior)", circle(Annulus::InteriorRight, [](const PeriodVector& v) { return v.h * v.I0; }), 3.5);
    note("h I1 (interior)", circle(Annulus::InteriorRight, [](const PeriodVector& v) { return v.h * v.I1; }), 4.0);
    const PerturbationParams p1 = draws(9, 1, false, Annulus::InteriorRight)[0];
    note("M1 of a random draw", circle(Annulus::InteriorRight, counting_function(m1_form(p1, Annulus::InteriorRight))),
         3.5);
    const PerturbationParams p2 = draws(9, 1, true, Annulus::InteriorRight)[0];
    note("M2 of a random constrained draw",
         circle(Annulus::InteriorRight, counting_function(m2_form(p2, Annulus::InteriorRight))), 4.0);
    o.summary = "exterior I0 log-log slope 0.75 +- 1e-3 on [1e2, 1e6]";
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double limit_s;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::vector<int> only;
    app.add_option("criteria", only, "criteria to run (default: all)")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "saddle constants", 1.0, saddle_constants},
        {2, "Picard-Fuchs residuals", 10.0, picard_fuchs},
        {3, "I1 structure", 5.0, i1_structure},
        {4, "M1 closed form", 30.0, m1_closed_form},
        {5, "M2 closed form", 120.0, m2_closed_form},
        {6, "ODE oracle", 600.0, ode_oracle},
        {7, "zero-bound certificates", 1800.0, zero_bounds},
        {8, "I0 nonvanishing and Wronskian", 120.0, nonvanishing},
        {9, "asymptotics", 10.0, asymptotics},
    };
    const std::set<int> selected(only.begin(), only.end());
    bool ok = true;
    for (const auto& c : all) {
        if (!selected.empty() && !selected.count(c.id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.pass = false;
            r.summary = std::string("error: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = r.pass && secs < c.limit_s;
        ok = ok && pass;
        std::printf("%s  criterion %d  %s: %s  [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.title,
                    r.summary.c_str(), secs, c.limit_s);
        for (const auto& d : r.details) std::printf("      %s\n", d.c_str());
        std::fflush(stdout);
    }
    return ok ? 0 : 1;
}
