#include "duffmel/abelian.hpp"

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <mutex>
#include <sstream>

#include "duffmel/errors.hpp"

namespace duffmel {

namespace {

const QuadratureSpec kTightSpec{1e-15, 1e-13, 1 << 16};

double power(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// Contribution of the two branches of the oval: weights carry the sqrt((x - a)(b - x)) factor.
double lobe_integral(int k, const OvalGeometry& g, SqrtWeight w, const QuadratureSpec& spec) {
    auto smooth = [&](double x) {
        const double s = g.cofactor(x);
        return w == SqrtWeight::Sqrt ? 2.0 * power(x, k) * s : 2.0 * power(x, k) / s;
    };
    return integrate_sqrt_weighted<double>(smooth, g.x_lo, g.x_hi, w, spec).value;
}

}  // namespace

double integral_I(int k, double h, Annulus a, Approach approach, const QuadratureSpec& spec) {
    if (k < 0) throw DomainError("moment index must be nonnegative");
    if (a == Annulus::InteriorLeft) {
        const double right = integral_I(k, h, Annulus::InteriorRight, approach, spec);
        return k % 2 == 0 ? right : -right;
    }
    const OvalGeometry g = branch_points(h, a, approach);
    if (a == Annulus::Exterior && k % 2 == 1) return 0.0;
    if (g.x_hi - g.x_lo == 0.0) return 0.0;
    return lobe_integral(k, g, SqrtWeight::Sqrt, spec);
}

double integral_I_prime(int k, double h, Annulus a, Approach approach, const QuadratureSpec& spec) {
    if (k < 0) throw DomainError("moment index must be nonnegative");
    if (h == 0.0) throw DomainError("I'_k diverges at the saddle level h = 0");
    if (a == Annulus::InteriorLeft) {
        const double right = integral_I_prime(k, h, Annulus::InteriorRight, approach, spec);
        return k % 2 == 0 ? right : -right;
    }
    const OvalGeometry g = branch_points(h, a, approach);
    if (a == Annulus::Exterior && k % 2 == 1) return 0.0;
    return lobe_integral(k, g, SqrtWeight::InverseSqrt, spec);
}

double oval_integral(const Poly2& p, const Poly2& n, const OvalGeometry& g,
                     const QuadratureSpec& spec) {
    const double h = g.h;
    auto y2 = [h](double x) { return 2.0 * h + x * x - 0.5 * x * x * x * x; };
    const Poly2 q = p.odd_v().odd_to_square();
    const Poly2 r = n.even_v().even_to_square();
    double total = 0.0;
    if (!q.is_zero()) {
        auto smooth = [&](double x) { return 2.0 * q(x, y2(x)) * g.cofactor(x); };
        total += integrate_sqrt_weighted<double>(smooth, g.x_lo, g.x_hi, SqrtWeight::Sqrt, spec).value;
    }
    if (!r.is_zero()) {
        auto smooth = [&](double x) { return 2.0 * r(x, y2(x)) / g.cofactor(x); };
        total +=
            integrate_sqrt_weighted<double>(smooth, g.x_lo, g.x_hi, SqrtWeight::InverseSqrt, spec).value;
    }
    return total;
}

double oval_integral_dy(const Poly2& f, const OvalGeometry& g, const QuadratureSpec& spec) {
    Poly2 slope;
    slope.add(1, 0, 1.0);
    slope.add(3, 0, -1.0);
    return oval_integral(Poly2{}, f * slope, g, spec);
}

double i1_slope(Annulus a) {
    static const double c = [] {
        const double hb = base_point(Annulus::InteriorRight);
        return integral_I(1, hb, Annulus::InteriorRight, Approach::Exact, kTightSpec) /
               (4.0 * hb + 1.0);
    }();
    switch (a) {
        case Annulus::InteriorRight: return c;
        case Annulus::InteriorLeft: return -c;
        case Annulus::Exterior: return 0.0;
    }
    return 0.0;
}

double base_point(Annulus a) { return a == Annulus::Exterior ? 1.0 : -0.125; }

PeriodVector period_vector(double h, Annulus a, const QuadratureSpec& spec) {
    PeriodVector pv;
    pv.h = h;
    pv.annulus = a;
    pv.I0 = integral_I(0, h, a, Approach::Exact, spec);
    pv.I2 = integral_I(2, h, a, Approach::Exact, spec);
    pv.I1 = i1_slope(a) * (4.0 * h + 1.0);
    return pv;
}

cplx reduce_moment(Moment m, cplx h, const PeriodVector& pv) {
    const cplx I0 = pv.I0, I2 = pv.I2;
    const cplx q = 4.0 * h + 1.0;
    switch (m) {
        case Moment::CubeOfY: return (12.0 * h / 7.0) * I0 + (3.0 / 7.0) * I2;
        case Moment::I4: return (4.0 * h / 7.0) * I0 + (8.0 / 7.0) * I2;
        case Moment::I6: return (16.0 * h / 21.0) * I0 + ((28.0 * h + 32.0) / 21.0) * I2;
        case Moment::DerivI0: return ((12.0 * h + 4.0) * I0 - 5.0 * I2) / (4.0 * h * q);
        case Moment::DerivI2: return (5.0 * I2 - I0) / q;
        case Moment::DerivI4: return (4.0 * h * I0 + 5.0 * I2) / q;
        case Moment::DerivI6:
            return (12.0 * h / 5.0) * reduce_moment(Moment::DerivI2, h, pv) +
                   (8.0 / 5.0) * reduce_moment(Moment::DerivI4, h, pv);
    }
    return 0.0;
}

std::array<cplx, 2> PFMatrix::apply(const std::array<cplx, 2>& v) const {
    return {a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]};
}

PFMatrix pf_matrix(cplx h) {
    const cplx q = 4.0 * h + 1.0;
    if (std::abs(h) == 0.0 || std::abs(q) == 0.0) {
        std::ostringstream os;
        os << "Picard-Fuchs matrix has a pole at h = " << h;
        throw PoleError(os.str(), 0.0, false);
    }
    PFMatrix m;
    m.h = h;
    m.a[0][0] = (12.0 * h + 4.0) / (4.0 * h * q);
    m.a[0][1] = -5.0 / (4.0 * h * q);
    m.a[1][0] = -1.0 / q;
    m.a[1][1] = 5.0 / q;
    return m;
}

std::array<std::array<cplx, 2>, 2> pf_forward_matrix(cplx h) {
    return {{{4.0 * h / 3.0, 1.0 / 3.0}, {4.0 * h / 15.0, 4.0 * h / 5.0 + 4.0 / 15.0}}};
}

PFResidual pf_residual(double h, Annulus a, const QuadratureSpec& spec,
                       double coefficient_perturbation) {
    const double I0 = integral_I(0, h, a, Approach::Exact, spec);
    const double I2 = integral_I(2, h, a, Approach::Exact, spec);
    const double D0 = integral_I_prime(0, h, a, Approach::Exact, spec);
    const double D2 = integral_I_prime(2, h, a, Approach::Exact, spec);
    auto b = pf_forward_matrix(h);
    b[0][0] += coefficient_perturbation;
    PFResidual r;
    r.eq_first = std::abs(I0 - std::real(b[0][0]) * D0 - std::real(b[0][1]) * D2) / (1.0 + std::abs(I0));
    r.eq_second = std::abs(I2 - std::real(b[1][0]) * D0 - std::real(b[1][1]) * D2) / (1.0 + std::abs(I2));
    return r;
}

Path default_path(cplx h_target, Annulus a) {
    const double hb = base_point(a);
    const Interval s = sigma(a);
    if (h_target.imag() == 0.0 && s.contains(h_target.real()))
        return Path::from(hb).line_to(h_target);
    const double sgn = h_target.imag() < 0.0 ? -1.0 : 1.0;
    const double level = sgn * std::max(std::abs(h_target.imag()), 0.1);
    Path p = Path::from(hb);
    p.line_to(cplx(hb, level));
    p.line_to(cplx(h_target.real(), level));
    if (h_target.imag() != level) p.line_to(h_target);
    return p;
}

namespace {

namespace ode = boost::numeric::odeint;

void check_clearance(const PathPiece& piece, double clearance) {
    Path p;
    p.pieces.push_back(piece);
    for (cplx z : {cplx(0.0), cplx(-0.25)}) {
        if (p.clearance(z) < clearance) {
            std::ostringstream os;
            os << "path passes within " << p.clearance(z) << " of the singular point " << z.real()
               << " (clearance " << clearance << " required)";
            throw PathError(os.str());
        }
    }
}

}  // namespace

PeriodState transport_piece(const PathPiece& piece, double s0, double s1, PeriodState start,
                            const TransportOptions& opts) {
    if (s0 == s1) return start;
    check_clearance(piece_slice(piece, s0, s1), opts.clearance);
    auto system = [&piece](const PeriodState& v, PeriodState& dv, double s) {
        const PFMatrix m = pf_matrix(piece_point(piece, s));
        const cplx dh = piece_derivative(piece, s);
        const auto av = m.apply(v);
        dv[0] = dh * av[0];
        dv[1] = dh * av[1];
    };
    ode::runge_kutta_fehlberg78<PeriodState> stepper;
    auto controlled = ode::make_controlled(opts.abs_tol, opts.rel_tol, stepper);
    const double span = s1 - s0;
    try {
        ode::integrate_adaptive(controlled, system, start, s0, s1, span / 16.0);
    } catch (const ode::step_adjustment_error& e) {
        throw AccuracyError(std::string("period transport step underflow: ") + e.what(),
                            std::abs(start[0]), 0.0);
    }
    return start;
}

PeriodState base_state(Annulus a) {
    static std::once_flag flag;
    static PeriodState interior, exterior;
    std::call_once(flag, [] {
        const double hi = base_point(Annulus::InteriorRight);
        interior = {integral_I(0, hi, Annulus::InteriorRight, Approach::Exact, kTightSpec),
                    integral_I(2, hi, Annulus::InteriorRight, Approach::Exact, kTightSpec)};
        const double he = base_point(Annulus::Exterior);
        exterior = {integral_I(0, he, Annulus::Exterior, Approach::Exact, kTightSpec),
                    integral_I(2, he, Annulus::Exterior, Approach::Exact, kTightSpec)};
    });
    return a == Annulus::Exterior ? exterior : interior;
}

PeriodVector continue_complex(cplx h_target, const Path& path, Annulus a,
                              const TransportOptions& opts) {
    const double hb = base_point(a);
    if (std::abs(path.start() - hb) > 1e-14)
        throw PathError("transport path must start at the base point of the annulus");
    if (std::abs(path.end() - h_target) > 1e-12 * std::max(1.0, std::abs(h_target)))
        throw PathError("transport path does not end at the target level");
    PeriodState v = base_state(a);
    for (const auto& piece : path.pieces) v = transport_piece(piece, 0.0, 1.0, v, opts);
    PeriodVector pv;
    pv.h = h_target;
    pv.annulus = a;
    pv.I0 = v[0];
    pv.I2 = v[1];
    pv.I1 = i1_slope(a) * (4.0 * h_target + 1.0);
    return pv;
}

PeriodVector continue_complex(cplx h_target, Annulus a, const TransportOptions& opts) {
    return continue_complex(h_target, default_path(h_target, a), a, opts);
}

cplx richardson_eta(cplx f_eta, cplx f_half, cplx f_quarter) {
    return (8.0 * f_quarter - 6.0 * f_half + f_eta) / 3.0;
}

CutValues cut_values(double h, Annulus a, double eta) {
    const bool on_cut = a == Annulus::Exterior ? h < 0.0 : h > 0.0;
    if (!on_cut) throw DomainError("level is not on the branch cut of the annulus");
    TransportOptions opts;
    opts.clearance = eta / 8.0;
    auto side = [&](double sgn) {
        PeriodVector v[3];
        for (int k = 0; k < 3; ++k) {
            const cplx target(h, sgn * eta / static_cast<double>(1 << k));
            v[k] = continue_complex(target, a, opts);
        }
        PeriodVector out = v[0];
        out.h = h;
        out.I0 = richardson_eta(v[0].I0, v[1].I0, v[2].I0);
        out.I2 = richardson_eta(v[0].I2, v[1].I2, v[2].I2);
        out.I1 = i1_slope(a) * (4.0 * h + 1.0);
        out.side = sgn > 0 ? CutSide::CutPlus : CutSide::CutMinus;
        return out;
    };
    return {side(1.0), side(-1.0)};
}

SaddleLogSeries saddle_log_series(int terms) {
    SaddleLogSeries s;
    s.phi0.assign(terms + 2, 0.0);
    s.phi2.assign(terms + 2, 0.0);
    s.phi0[1] = -1.0;
    s.phi2[2] = s.phi0[1] * (3.0 - 4.0) / 2.0;
    for (int n = 2; n + 1 < terms + 2; ++n) {
        s.phi0[n] = s.phi2[n] * (5.0 - 4.0 * n) / (4.0 * (1.0 - n));
        s.phi2[n + 1] = s.phi0[n] * (3.0 - 4.0 * n) / (n + 1.0);
    }
    s.phi0.resize(terms);
    s.phi2.resize(terms);
    return s;
}

namespace {

double series_value(const std::vector<double>& c, double h) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * h + *it;
    return acc;
}

// The exterior oval near the saddle passes it twice.
double log_multiplicity(Annulus a) { return a == Annulus::Exterior ? 2.0 : 1.0; }

}  // namespace

double saddle_constant(int k, Annulus a, const std::vector<double>& levels,
                       const QuadratureSpec& spec) {
    if (k != 0 && k != 2) throw DomainError("saddle constants are modeled for I0 and I2 only");
    const SaddleLogSeries series = saddle_log_series(12);
    const auto& phi = k == 0 ? series.phi0 : series.phi2;
    const int n = static_cast<int>(levels.size());
    Eigen::MatrixXd m(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        const double h = levels[i];
        const double value = integral_I(k, h, a, Approach::Exact, spec);
        rhs(i) = value - log_multiplicity(a) * series_value(phi, h) * std::log(std::abs(h));
        for (int j = 0; j < n; ++j) m(i, j) = std::pow(h, j);
    }
    return m.colPivHouseholderQr().solve(rhs)(0);
}

AsymptoticsReport asymptotics_check(Annulus a) {
    AsymptoticsReport r;
    r.annulus = a;
    const QuadratureSpec spec{1e-15, 1e-13, 1 << 16};
    const double sgn = a == Annulus::Exterior ? 1.0 : -1.0;
    const std::vector<double> levels{sgn * 1e-2, sgn * 1e-3, sgn * 1e-4};
    r.i0_constant = saddle_constant(0, a, levels, spec);
    r.i2_constant = saddle_constant(2, a, levels, spec);
    r.i0_constant_expected = log_multiplicity(a) * 4.0 / 3.0;
    r.i2_constant_expected = log_multiplicity(a) * 16.0 / 15.0;

    // Coefficient of h ln|h|: subtract the higher log terms, fit [1, h, h ln|h|, h^2].
    const SaddleLogSeries series = saddle_log_series(12);
    std::vector<double> higher = series.phi0;
    higher[1] = 0.0;
    const int n = 8;
    Eigen::MatrixXd m(n, 4);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        const double h = sgn * std::pow(10.0, -4.0 + 2.0 * i / (n - 1));
        const double lg = std::log(std::abs(h));
        rhs(i) = integral_I(0, h, a, Approach::Exact, spec) -
                 log_multiplicity(a) * series_value(higher, h) * lg;
        m(i, 0) = 1.0;
        m(i, 1) = h;
        m(i, 2) = h * lg;
        m(i, 3) = h * h;
    }
    const Eigen::VectorXd fit = m.colPivHouseholderQr().solve(rhs);
    r.log_coefficient = fit(2) / log_multiplicity(a);

    bool ok = std::abs(r.i0_constant - r.i0_constant_expected) <= 1e-6 &&
              std::abs(r.i2_constant - r.i2_constant_expected) <= 1e-6 &&
              std::abs(r.log_coefficient + 1.0) <= 1e-4;
    if (a == Annulus::Exterior) {
        const int k = 9;
        Eigen::MatrixXd plain(k, 2), corrected(k, 3);
        Eigen::VectorXd y(k);
        for (int i = 0; i < k; ++i) {
            const double h = std::pow(10.0, 2.0 + 4.0 * i / (k - 1));
            y(i) = std::log(integral_I(0, h, a, Approach::Exact, spec));
            plain(i, 0) = corrected(i, 0) = 1.0;
            plain(i, 1) = corrected(i, 1) = std::log(h);
            corrected(i, 2) = 1.0 / std::sqrt(h);
        }
        r.slope = plain.colPivHouseholderQr().solve(y)(1);
        r.slope_corrected = corrected.colPivHouseholderQr().solve(y)(1);
        ok = ok && std::abs(r.slope - 0.75) <= 1e-3;
    }
    r.pass = ok;
    return r;
}

}  // namespace duffmel
