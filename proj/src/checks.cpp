#include "duffmel/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "duffmel/abelian.hpp"
#include "duffmel/zeros.hpp"

namespace duffmel {

namespace {

CheckItem item(std::string name, double measured, double tol, std::string detail = {}) {
    return {std::move(name), measured, tol, measured <= tol, false, std::move(detail)};
}

std::vector<double> log_levels(Annulus a, int n) {
    const double lo = -4.0;
    const double hi = is_interior(a) ? std::log10(0.249) : 4.0;
    const double sgn = is_interior(a) ? -1.0 : 1.0;
    std::vector<double> h(n);
    for (int i = 0; i < n; ++i) h[i] = sgn * std::pow(10.0, lo + (hi - lo) * i / std::max(1, n - 1));
    return h;
}

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace

bool all_pass(const std::vector<CheckItem>& items) {
    return std::all_of(items.begin(), items.end(),
                       [](const CheckItem& c) { return c.pass || c.diagnostic; });
}

std::vector<CheckItem> check_saddle_constants() {
    const std::vector<double> levels{-1e-2, -1e-3, -1e-4};
    const double i0 = saddle_constant(0, Annulus::InteriorRight, levels);
    const double i2 = saddle_constant(2, Annulus::InteriorRight, levels);
    std::ostringstream d0, d2;
    d0.precision(12);
    d2.precision(12);
    d0 << "I0(0-) = " << i0 << ", expected 4/3";
    d2 << "I2(0-) = " << i2 << ", expected 16/15";
    return {item("saddle constant I0", std::abs(i0 - 4.0 / 3.0), 1e-6, d0.str()),
            item("saddle constant I2", std::abs(i2 - 16.0 / 15.0), 1e-6, d2.str())};
}

std::vector<CheckItem> check_picard_fuchs(Annulus a, int points, double perturbation) {
    const std::string tag = " [" + std::string(to_string(a)) + "]";
    double first = 0.0, second = 0.0, worst_first_h = 0.0, worst_second_h = 0.0;
    double red[3] = {0.0, 0.0, 0.0};
    const Moment moments[3] = {Moment::DerivI2, Moment::DerivI4, Moment::DerivI6};
    for (double h : log_levels(a, points)) {
        const PFResidual r = pf_residual(h, a, {}, perturbation);
        if (r.eq_first > first) {
            first = r.eq_first;
            worst_first_h = h;
        }
        if (r.eq_second > second) {
            second = r.eq_second;
            worst_second_h = h;
        }
        const PeriodVector pv = period_vector(h, a);
        for (int k = 0; k < 3; ++k) {
            const double direct = integral_I_prime(2 * (k + 1), h, a);
            const double reduced = std::real(reduce_moment(moments[k], h, pv));
            red[k] = std::max(red[k], rel(direct, reduced));
        }
    }
    std::ostringstream d1, d2;
    d1 << "worst at h = " << worst_first_h;
    d2 << "worst at h = " << worst_second_h;
    std::vector<CheckItem> out{
        item("picard-fuchs I0 relation" + tag, first, 1e-8, d1.str()),
        item("picard-fuchs I2 relation" + tag, second, 1e-8, d2.str()),
    };
    const char* names[3] = {"reduction I'2", "reduction I'4", "reduction I'6"};
    for (int k = 0; k < 3; ++k) out.push_back(item(names[k] + tag, red[k], 1e-8));
    return out;
}

std::vector<CheckItem> check_i1_structure() {
    const int n = 50;
    Eigen::MatrixXd m(n, 2);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        const double h = -0.249 + 0.248 * i / (n - 1);
        m(i, 0) = 1.0;
        m(i, 1) = h;
        v(i) = integral_I(1, h, Annulus::InteriorRight);
    }
    const Eigen::Vector2d c = m.colPivHouseholderQr().solve(v);
    const double residual = (m * c - v).cwiseAbs().maxCoeff();
    const double root = -c(0) / c(1);
    double ext = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double h = std::pow(10.0, -3.0 + 6.0 * i / 19.0);
        ext = std::max(ext, std::abs(integral_I(1, h, Annulus::Exterior)));
    }
    std::ostringstream d;
    d.precision(12);
    d << "I1 = " << c(0) << " + " << c(1) << " h, root " << root;
    return {item("interior I1 linear fit", residual, 1e-9, d.str()),
            item("interior I1 root at -1/4", std::abs(root + 0.25), 1e-6, d.str()),
            item("exterior I1 vanishes", ext, 1e-10)};
}

std::vector<CheckItem> check_i0_nonvanishing(double R, int radii, int angles) {
    double min0 = std::numeric_limits<double>::infinity(), min1 = min0;
    cplx at0, at1;
    for (int i = 0; i < radii; ++i) {
        const double r = std::pow(10.0, -2.0 + (std::log10(R) + 2.0) * i / (radii - 1));
        for (int j = 0; j < angles; ++j) {
            const double t = -std::numbers::pi + 2.0 * std::numbers::pi * (j + 0.5) / angles;
            const cplx h = std::polar(r, t);
            const PeriodVector pv = continue_complex(h, Annulus::Exterior);
            const cplx d0 = pf_matrix(h).apply({pv.I0, pv.I2})[0];
            const double scale = std::pow(std::abs(h), 0.75);
            if (std::abs(pv.I0) / scale < min0) {
                min0 = std::abs(pv.I0) / scale;
                at0 = h;
            }
            if (std::abs(d0) / scale < min1) {
                min1 = std::abs(d0) / scale;
                at1 = h;
            }
        }
    }
    auto lower = [](std::string name, double m, cplx h) {
        std::ostringstream os;
        os << "minimum at h = " << h;
        return CheckItem{std::move(name), m, 1e-6, m > 1e-6, false, os.str()};
    };
    const CheckItem a = lower("exterior I0 nonvanishing on D_R", min0, at0);
    const CheckItem b = lower("exterior I0' nonvanishing on D_R", min1, at1);
    return {a, b};
}

std::vector<CheckItem> check_wronskian() {
    const std::vector<double> near{-0.02, -0.05, -0.1, -0.15, -0.2, -0.23};
    const std::vector<double> far{-0.27, -0.3, -0.5, -1.0, -2.0, -5.0, -9.0};
    auto spread = [](const std::vector<double>& levels, double& mean) {
        std::vector<double> c;
        for (double h : levels) c.push_back(wronskian_constant(h, 1e-4));
        mean = 0.0;
        for (double v : c) mean += v;
        mean /= c.size();
        double s = 0.0;
        for (double v : c) s = std::max(s, std::abs(v - mean) / std::abs(mean));
        return s;
    };
    double cn = 0.0, cf = 0.0;
    const double sn = spread(near, cn);
    const double sf = spread(far, cf);
    std::ostringstream dn, df, dj;
    dn.precision(12);
    df.precision(12);
    dn << "constant " << cn;
    df << "constant " << cf;
    dj << "ratio " << cn / cf;
    return {item("wronskian constant on (-1/4, 0)", sn, 1e-6, dn.str()),
            item("wronskian constant on (-inf, -1/4)", sf, 1e-6, df.str()),
            item("wronskian jump factor 2 at -1/4", std::abs(cn / cf - 2.0) / 2.0, 1e-2, dj.str())};
}

std::vector<CheckItem> check_asymptotic_slope() {
    const AsymptoticsReport r = asymptotics_check(Annulus::Exterior);
    std::ostringstream d, dc;
    d.precision(9);
    dc.precision(9);
    d << "slope " << r.slope;
    dc << "slope " << r.slope_corrected << " with an h^{-1/2} term fitted";
    CheckItem corrected = item("exterior I0 slope, corrected", std::abs(r.slope_corrected - 0.75), 1e-3,
                               dc.str());
    corrected.diagnostic = true;
    return {item("exterior I0 log-log slope on [1e2, 1e6]", std::abs(r.slope - 0.75), 1e-3, d.str()),
            corrected};
}

std::string format_item(const CheckItem& c) {
    std::ostringstream os;
    os.precision(3);
    os << (c.diagnostic ? "NOTE" : (c.pass ? "PASS" : "FAIL")) << "  " << c.name << "  measured "
       << std::scientific << c.measured << " tol " << c.tolerance;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    return os.str();
}

}  // namespace duffmel
