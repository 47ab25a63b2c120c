#include "duffmel/oracle.hpp"

#include <Eigen/Dense>
#include <array>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <sstream>

#include "duffmel/abelian.hpp"
#include "duffmel/errors.hpp"

namespace duffmel {

namespace ode = boost::numeric::odeint;
using OdeState = std::array<double, 2>;

double SectionEvent::crossing(const State& s) const {
    const bool alt = section == Section::Alternate;
    switch (annulus) {
        case Annulus::InteriorRight: return alt ? s.x - 1.0 : s.y;
        case Annulus::InteriorLeft: return alt ? s.x + 1.0 : s.y;
        case Annulus::Exterior: return alt ? s.y : s.x;
    }
    return 0.0;
}

bool SectionEvent::crossed(const State& before, const State& after) const {
    const double c0 = crossing(before), c1 = crossing(after);
    const bool alt = section == Section::Alternate;
    switch (annulus) {
        case Annulus::InteriorRight:
            return alt ? (c0 < 0.0 && c1 >= 0.0 && after.y > 0.0)
                       : (c0 > 0.0 && c1 <= 0.0 && after.x > 1.0);
        case Annulus::InteriorLeft:
            return alt ? (c0 < 0.0 && c1 >= 0.0 && after.y > 0.0)
                       : (c0 < 0.0 && c1 >= 0.0 && after.x < -1.0);
        case Annulus::Exterior:
            return alt ? (c0 > 0.0 && c1 <= 0.0 && after.x > 0.0)
                       : (c0 < 0.0 && c1 >= 0.0 && after.y > 0.0);
    }
    return false;
}

namespace {

struct VectorField {
    Poly2 f1, g1, f2, g2;
    double eps;

    VectorField(const PerturbationParams& p, double e)
        : f1(field_polynomial(p.lambda1)),
          g1(field_polynomial(p.gamma1)),
          f2(field_polynomial(p.lambda2)),
          g2(field_polynomial(p.gamma2)),
          eps(e) {}

    void operator()(const OdeState& s, OdeState& ds, double) const {
        const double x = s[0], y = s[1];
        ds[0] = y + eps * (f1(x, y) + eps * f2(x, y));
        ds[1] = x - x * x * x + eps * (g1(x, y) + eps * g2(x, y));
    }
};

}  // namespace

FlowResult flow(const State& start, const PerturbationParams& p, double eps, const SectionEvent& ev,
                const FlowOptions& opts) {
    const VectorField field(p, eps);
    auto controlled = ode::make_controlled<ode::runge_kutta_fehlberg78<OdeState>>(opts.abs_tol, opts.rel_tol);
    ode::runge_kutta_fehlberg78<OdeState> single;
    OdeState s{start.x, start.y};
    double t = 0.0;
    double dt = 1e-3;
    std::size_t steps = 0;
    while (t < opts.t_max) {
        const OdeState before = s;
        const double t_before = t;
        dt = std::min(dt, opts.max_step);
        if (controlled.try_step(field, s, t, dt) == ode::fail) continue;
        ++steps;
        const State b{before[0], before[1]}, a{s[0], s[1]};
        if (!std::isfinite(a.x) || !std::isfinite(a.y) || std::abs(a.x) + std::abs(a.y) > 1e6)
            throw EscapeError("trajectory left every bounded region");
        if (!ev.crossed(b, a)) continue;

        auto advance = [&](double tau) {
            OdeState out;
            single.do_step(field, before, t_before, out, tau);
            return out;
        };
        auto fn = [&](double tau) {
            const OdeState v = advance(tau);
            return ev.crossing({v[0], v[1]});
        };
        const double span = t - t_before;
        double f0 = ev.crossing(b), f1 = fn(span);
        double tau;
        if (f1 == 0.0) {
            tau = span;
        } else {
            std::uintmax_t iters = 200;
            const double tol = opts.event_tol;
            auto stop = [&](double lo, double hi) {
                return std::abs(hi - lo) <= 1e-15 * std::max(1.0, t) ||
                       std::min(std::abs(fn(lo)), std::abs(fn(hi))) <= tol * 1e-2;
            };
            const auto bracket =
                boost::math::tools::toms748_solve(fn, 0.0, span, f0, f1, stop, iters);
            const double lo = bracket.first, hi = bracket.second;
            tau = std::abs(fn(lo)) <= std::abs(fn(hi)) ? lo : hi;
        }
        const OdeState hit = advance(tau);
        return {{hit[0], hit[1]}, t_before + tau, steps};
    }
    std::ostringstream os;
    os << "no return to the section within time " << opts.t_max;
    throw EscapeError(os.str());
}

Point section_start(double h, Annulus a, Section s) {
    if (s == Section::Primary) return section_point(h, a);
    const OvalGeometry g = branch_points(h, a);
    switch (a) {
        case Annulus::InteriorRight: return {1.0, std::sqrt(0.5 * (4.0 * h + 1.0))};
        case Annulus::InteriorLeft: return {-1.0, std::sqrt(0.5 * (4.0 * h + 1.0))};
        case Annulus::Exterior: return {g.x_hi, 0.0};
    }
    return {0.0, 0.0};
}

DisplacementSample displacement(double h, double eps, const PerturbationParams& p, Annulus a,
                                Section s, const FlowOptions& opts) {
    const Point start = section_start(h, a, s);
    const FlowResult r = flow({start.x, start.y}, p, eps, SectionEvent{a, s}, opts);
    return {h, eps, hamiltonian(r.state.x, r.state.y) - h, opts.rel_tol, r.time};
}

std::vector<double> default_eps_list() { return {1e-2, 5e-3, 2.5e-3, 1.25e-3}; }

namespace {

struct RawFit {
    Eigen::Vector3d coef;
    Eigen::Vector3d sigma;
    double condition;
};

RawFit fit_cubic(const std::vector<DisplacementSample>& samples) {
    const int n = static_cast<int>(samples.size());
    double emax = 0.0;
    for (const auto& s : samples) emax = std::max(emax, std::abs(s.epsilon));
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double e = samples[i].epsilon / emax;
        X(i, 0) = e;
        X(i, 1) = e * e;
        X(i, 2) = e * e * e;
        y(i) = samples[i].d;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    RawFit r;
    r.condition = sv(0) / sv(sv.size() - 1);
    if (!(r.condition < 1e10)) {
        std::ostringstream os;
        os << "epsilon fit is ill-conditioned (condition number " << r.condition << ")";
        throw AccuracyError(os.str(), 0.0, r.condition);
    }
    const Eigen::VectorXd c = svd.solve(y);
    const Eigen::VectorXd res = y - X * c;
    const int dof = n - 3;
    // With no spare points, fall back to the integration noise floor.
    double s2 = dof > 0 ? res.squaredNorm() / dof : 0.0;
    double floor = 0.0;
    for (const auto& s : samples) floor = std::max(floor, s.integration_tol * (std::abs(s.h) + 1e-2));
    s2 = std::max(s2, floor * floor);
    const Eigen::MatrixXd cov = s2 * (X.transpose() * X).inverse();
    for (int j = 0; j < 3; ++j) {
        const double scale = std::pow(emax, j + 1);
        r.coef(j) = c(j) / scale;
        r.sigma(j) = std::sqrt(cov(j, j)) / scale;
    }
    return r;
}

int calibrate_sign() {
    PerturbationParams probe;
    probe.lambda1[1] = 1.0;
    const Annulus a = Annulus::InteriorRight;
    const double h = base_point(a);
    std::vector<DisplacementSample> samples;
    for (double e : default_eps_list()) samples.push_back(displacement(h, e, probe, a));
    const double a1 = fit_cubic(samples).coef(0);
    const double i0 = integral_I(0, h, a);
    if (std::abs(a1 - i0) <= 1e-4 * i0) return 1;
    if (std::abs(a1 + i0) <= 1e-4 * i0) return -1;
    std::ostringstream os;
    os << "sign calibration failed: fitted " << a1 << " against I0 = " << i0;
    throw AccuracyError(os.str(), a1, std::abs(std::abs(a1) - i0));
}

}  // namespace

int displacement_sign() {
    static const int sign = calibrate_sign();
    return sign;
}

MelnikovFit melnikov_fit(double h, const PerturbationParams& p, Annulus a,
                         const std::vector<double>& eps_list, const FlowOptions& opts) {
    if (eps_list.size() < 4) throw DomainError("melnikov_fit needs at least four epsilon values");
    MelnikovFit out{};
    out.h = h;
    out.annulus = a;
    out.sign = displacement_sign();
    // The unperturbed drift is common to every sample; removing it cancels correlated error.
    const double drift = displacement(h, 0.0, p, a, Section::Primary, opts).d;
    for (double e : eps_list) {
        DisplacementSample s = displacement(h, e, p, a, Section::Primary, opts);
        s.d -= drift;
        out.samples.push_back(s);
    }
    const RawFit r = fit_cubic(out.samples);
    out.m1 = out.sign * r.coef(0);
    out.m2 = out.sign * r.coef(1);
    out.m3 = out.sign * r.coef(2);
    out.sigma1 = r.sigma(0);
    out.sigma2 = r.sigma(1);
    out.condition = r.condition;
    return out;
}

namespace {

struct SlopeSums {
    double sxy = 0.0;
    double sxx = 0.0;
};

void accumulate_slope(const std::vector<DisplacementSample>& samples, double reference, int k,
                      SlopeSums& acc) {
    const int sgn = displacement_sign();
    std::vector<double> lx, ly;
    for (const auto& s : samples) {
        const double err = std::abs(sgn * s.d / std::pow(s.epsilon, k) - reference);
        if (err <= 0.0) continue;
        lx.push_back(std::log(s.epsilon));
        ly.push_back(std::log(err));
    }
    const std::size_t n = lx.size();
    if (n < 2) return;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    for (std::size_t i = 0; i < n; ++i) {
        acc.sxy += (lx[i] - mx) * (ly[i] - my);
        acc.sxx += (lx[i] - mx) * (lx[i] - mx);
    }
}

}  // namespace

double convergence_order(const std::vector<DisplacementSample>& samples, double reference, int k) {
    SlopeSums acc;
    accumulate_slope(samples, reference, k, acc);
    if (acc.sxx <= 0.0) return std::numeric_limits<double>::infinity();
    return acc.sxy / acc.sxx;
}

double pooled_convergence_order(const std::vector<ConvergenceCase>& cases, int k) {
    SlopeSums acc;
    for (const auto& c : cases) accumulate_slope(c.samples, c.reference, k, acc);
    if (acc.sxx <= 0.0) return std::numeric_limits<double>::infinity();
    return acc.sxy / acc.sxx;
}

}  // namespace duffmel
