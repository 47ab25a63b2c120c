#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "duffmel/abelian.hpp"
#include "duffmel/errors.hpp"
#include "direct_exterior.hpp"

using namespace duffmel;
using std::numbers::pi;

namespace {

// Midpoint rule in theta for x = m + r sin(theta); the integrand is smooth and periodic.
double midpoint_I(int k, double h, Annulus a) {
    const OvalGeometry g = branch_points(h, a);
    const double m = g.center(), r = g.half_width();
    const int n = 4000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = -pi / 2 + pi * (i + 0.5) / n;
        const double x = m + r * std::sin(t);
        acc += std::pow(x, k) * oval_y(x, h, 1e-9) * r * std::cos(t);
    }
    return 2.0 * g.orientation * acc * pi / n;
}

}  // namespace

TEST_SUITE("abelian") {
    TEST_CASE("real integrals against a midpoint oracle") {
        for (Annulus a : {Annulus::InteriorLeft, Annulus::InteriorRight}) {
            for (double h : {-0.2, -0.125, -0.03}) {
                for (int k : {0, 1, 2, 4})
                    CHECK(integral_I(k, h, a) == doctest::Approx(midpoint_I(k, h, a)).epsilon(1e-10));
            }
        }
        for (double h : {0.1, 1.0, 7.0})
            for (int k : {0, 2, 4})
                CHECK(integral_I(k, h, Annulus::Exterior) ==
                      doctest::Approx(midpoint_I(k, h, Annulus::Exterior)).epsilon(1e-10));
    }

    TEST_CASE("parity and odd moments") {
        CHECK(integral_I(0, -0.125, Annulus::InteriorLeft) ==
              doctest::Approx(integral_I(0, -0.125, Annulus::InteriorRight)).epsilon(1e-13));
        CHECK(std::abs(integral_I(1, 1.0, Annulus::Exterior)) < 1e-13);
        CHECK(std::abs(integral_I(3, 2.0, Annulus::Exterior)) < 1e-13);
        const double c = pi / (2.0 * std::sqrt(2.0));
        CHECK(i1_slope(Annulus::InteriorRight) == doctest::Approx(c));
        CHECK(i1_slope(Annulus::InteriorLeft) == doctest::Approx(-c));
        CHECK(i1_slope(Annulus::Exterior) == 0.0);
        for (double h : {-0.24, -0.125, -0.01})
            CHECK(integral_I(1, h, Annulus::InteriorRight) == doctest::Approx(c * (4.0 * h + 1.0)).epsilon(1e-11));
    }

    TEST_CASE("derivatives against finite differences") {
        for (auto [h, a] : {std::pair{-0.125, Annulus::InteriorRight}, std::pair{-0.2, Annulus::InteriorLeft},
                            std::pair{1.5, Annulus::Exterior}}) {
            const double d = 1e-3;
            for (int k : {0, 2}) {
                const double fd = (-integral_I(k, h + 2 * d, a) + 8 * integral_I(k, h + d, a) -
                                   8 * integral_I(k, h - d, a) + integral_I(k, h - 2 * d, a)) /
                                  (12 * d);
                CHECK(integral_I_prime(k, h, a) == doctest::Approx(fd).epsilon(1e-6));
            }
        }
        // linearized center: period 2 pi / sqrt(2)
        CHECK(integral_I_prime(0, -0.25, Annulus::InteriorRight, Approach::Limit) ==
              doctest::Approx(pi * std::sqrt(2.0)).epsilon(1e-10));
        const double h = 1.0;
        const PeriodVector pv = period_vector(h, Annulus::Exterior);
        CHECK(integral_I_prime(2, h, Annulus::Exterior) ==
              doctest::Approx(std::real((5.0 * pv.I2 - pv.I0) / (4.0 * h + 1.0))).epsilon(1e-10));
    }

    TEST_CASE("moment reductions against quadrature") {
        const Poly2 zero;
        for (auto [h, a] : {std::pair{-0.125, Annulus::InteriorRight}, std::pair{-0.04, Annulus::InteriorLeft},
                            std::pair{0.8, Annulus::Exterior}}) {
            const PeriodVector pv = period_vector(h, a);
            const OvalGeometry g = branch_points(h, a);
            CHECK(std::real(reduce_moment(Moment::CubeOfY, h, pv)) ==
                  doctest::Approx(oval_integral(Poly2::monomial(0, 3), zero, g)).epsilon(1e-10));
            CHECK(std::real(reduce_moment(Moment::I4, h, pv)) ==
                  doctest::Approx(integral_I(4, h, a)).epsilon(1e-10));
            CHECK(std::real(reduce_moment(Moment::I6, h, pv)) ==
                  doctest::Approx(integral_I(6, h, a)).epsilon(1e-10));
            for (auto [m, k] : {std::pair{Moment::DerivI0, 0}, std::pair{Moment::DerivI2, 2},
                                std::pair{Moment::DerivI4, 4}, std::pair{Moment::DerivI6, 6}})
                CHECK(std::real(reduce_moment(m, h, pv)) ==
                      doctest::Approx(integral_I_prime(k, h, a)).epsilon(1e-9));
        }
        const PeriodVector near = period_vector(-1e-6, Annulus::InteriorRight);
        CHECK(std::real(reduce_moment(Moment::CubeOfY, -1e-6, near)) == doctest::Approx(16.0 / 35.0).epsilon(1e-4));
        CHECK(std::real(reduce_moment(Moment::I4, -1e-6, near)) == doctest::Approx(128.0 / 105.0).epsilon(1e-4));
        const double hc = -0.25 + 1e-9;
        CHECK(std::abs(reduce_moment(Moment::I4, hc, period_vector(hc, Annulus::InteriorRight))) < 1e-7);
    }

    TEST_CASE("Picard-Fuchs matrices") {
        for (cplx h : {cplx(1.0), cplx(-0.125), cplx(0.3, 2.0)}) {
            const PFMatrix a = pf_matrix(h);
            const auto b = pf_forward_matrix(h);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    const cplx v = a.a[i][0] * b[0][j] + a.a[i][1] * b[1][j];
                    CHECK(std::abs(v - (i == j ? 1.0 : 0.0)) < 1e-13);
                }
        }
        CHECK(std::abs(pf_matrix(1.0).apply({1.0, 0.0})[1] + 0.2) < 1e-15);
        CHECK_THROWS_AS(pf_matrix(0.0), PoleError);
        CHECK_THROWS_AS(pf_matrix(-0.25), PoleError);
        CHECK(pf_residual(2.0, Annulus::Exterior).eq_first < 1e-8);
        CHECK(pf_residual(-0.125, Annulus::InteriorRight).eq_second < 1e-8);
        CHECK(pf_residual(2.0, Annulus::Exterior, {}, 1e-3).eq_first > 1e-5);
    }

    TEST_CASE("saddle and asymptotic constants") {
        const std::vector<double> levels{-1e-2, -1e-3, -1e-4};
        CHECK(saddle_constant(0, Annulus::InteriorRight, levels) == doctest::Approx(4.0 / 3.0).epsilon(1e-7));
        CHECK(saddle_constant(2, Annulus::InteriorRight, levels) == doctest::Approx(16.0 / 15.0).epsilon(1e-7));
        const SaddleLogSeries s = saddle_log_series(4);
        CHECK(s.phi0[1] == -1.0);
        CHECK(s.phi0[2] == doctest::Approx(3.0 / 8.0));
        CHECK(s.phi0[3] == doctest::Approx(-35.0 / 64.0));
        // constant term of x sqrt(1 - x^2/2) over [0, sqrt 2], doubled
        const auto r = integrate_endpoint_sqrt(
            [](double x) { return x * std::sqrt(std::max(0.0, 1.0 - x * x / 2.0)); }, 0.0, std::sqrt(2.0));
        CHECK(2.0 * r.value == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    }

    TEST_CASE("complex continuation") {
        const Annulus ext = Annulus::Exterior;
        const PeriodVector base = continue_complex(1.0, ext);
        CHECK(std::abs(base.I0 - integral_I(0, 1.0, ext)) < 1e-10);
        const PeriodVector mid = continue_complex(-0.125, Annulus::InteriorRight);
        CHECK(std::abs(mid.I2 - integral_I(2, -0.125, Annulus::InteriorRight)) < 1e-10);

        const cplx target(1.0, 2.0);
        const PeriodVector a = continue_complex(target, ext);
        const Path other = Path::from(1.0).line_to(4.0).line_to(cplx(4.0, 3.0)).line_to(target);
        const PeriodVector b = continue_complex(target, other, ext);
        CHECK(std::abs(a.I0 - b.I0) < 1e-8);
        CHECK(std::abs(a.I2 - b.I2) < 1e-8);

        // real level reached through the complex plane
        const PeriodVector r = continue_complex(5.0, Path::from(1.0).line_to(cplx(1.0, 1.0)).line_to(cplx(5.0, 1.0)).line_to(5.0), ext);
        CHECK(std::abs(r.I0 - integral_I(0, 5.0, ext)) < 1e-9);

        CHECK_THROWS_AS(continue_complex(0.5, Path::from(0.3).line_to(0.5), ext), PathError);
        CHECK_THROWS_AS(continue_complex(cplx(0.0, 1e-5), Path::from(1.0).line_to(cplx(0.0, 1e-5)), ext), PathError);
    }

    TEST_CASE("continuation against direct complex quadrature") {
        const Annulus ext = Annulus::Exterior;
        for (cplx target : {cplx(-0.265, 0.0222), cplx(-3.0, 0.5), cplx(2.0, -4.0)}) {
            testing::DirectExterior d(1.0);
            d.follow(default_path(target, ext));
            const PeriodVector pv = continue_complex(target, ext);
            CHECK(std::abs(d.I(0) - pv.I0) < 1e-9 * std::max(1.0, std::abs(pv.I0)));
            CHECK(std::abs(d.I(2) - pv.I2) < 1e-9 * std::max(1.0, std::abs(pv.I2)));
        }
    }

    TEST_CASE("monodromy around the saddle") {
        const Annulus a = Annulus::InteriorRight;
        const Path loop = Path::from(-0.125).arc_to(0.0, 3.0 * pi);
        const PeriodVector pv = continue_complex(-0.125, loop, a);
        const PeriodVector base = period_vector(-0.125, a);
        const SaddleLogSeries s = saddle_log_series(80);
        double phi = 0.0;
        for (auto it = s.phi0.rbegin(); it != s.phi0.rend(); ++it) phi = phi * -0.125 + *it;
        CHECK(std::abs(pv.I0 - base.I0 - cplx(0.0, 2.0 * pi * phi)) < 1e-9);
    }

    TEST_CASE("boundary values on the cuts") {
        const CutValues ext = cut_values(-0.125, Annulus::Exterior);
        CHECK(std::abs(ext.plus.I0 - std::conj(ext.minus.I0)) < 1e-10);
        CHECK(std::abs(ext.plus.I2 - std::conj(ext.minus.I2)) < 1e-10);
        CHECK(ext.plus.side == CutSide::CutPlus);
        const CutValues in = cut_values(0.5, Annulus::InteriorRight);
        CHECK(std::abs(in.plus.I1 - in.minus.I1) < 1e-12);
        CHECK(std::abs(in.plus.I0 - std::conj(in.minus.I0)) < 1e-10);
        // f(eta) = 3 + 0.4 eta + 0.08 eta^2 at eta = 1, 1/2, 1/4
        CHECK(std::abs(richardson_eta(3.48, 3.22, 3.105) - 3.0) < 1e-12);
    }
}
