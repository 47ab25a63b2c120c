#include <doctest.h>

#include <cmath>

#include "duffmel/errors.hpp"
#include "duffmel/geometry.hpp"

using namespace duffmel;

namespace {

// Largest root of H(x, 0) = h by bisection, for h in (-1/4, 0) or h > 0.
double outer_root(double h) {
    double lo = 1.0, hi = 20.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (hamiltonian(mid, 0.0) < h ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_SUITE("geometry") {
    TEST_CASE("critical values") {
        const auto cv = critical_values();
        CHECK(cv.h_c == doctest::Approx(-0.25));
        CHECK(cv.h_s == 0.0);
        CHECK(hamiltonian(1.0, 0.0) == doctest::Approx(-0.25));
        CHECK(hamiltonian(-1.0, 0.0) == doctest::Approx(-0.25));
        CHECK(hamiltonian(0.0, 0.0) == 0.0);
    }

    TEST_CASE("sigma and names") {
        CHECK(sigma(Annulus::InteriorRight).contains(-0.1));
        CHECK_FALSE(sigma(Annulus::InteriorRight).contains(0.1));
        CHECK(sigma(Annulus::Exterior).contains(5.0));
        CHECK_FALSE(sigma(Annulus::Exterior).contains(0.0));
        for (Annulus a : {Annulus::InteriorLeft, Annulus::InteriorRight, Annulus::Exterior})
            CHECK(parse_annulus(to_string(a)) == a);
        CHECK_THROWS_AS(parse_annulus("middle"), DomainError);
    }

    TEST_CASE("branch points lie on the level set") {
        for (double h : {-0.249, -0.2, -0.125, -0.05, -1e-4}) {
            const auto r = branch_points(h, Annulus::InteriorRight);
            CHECK(hamiltonian(r.x_lo, 0.0) == doctest::Approx(h).epsilon(1e-12));
            CHECK(hamiltonian(r.x_hi, 0.0) == doctest::Approx(h).epsilon(1e-12));
            CHECK(r.x_lo > 0.0);
            CHECK(r.x_lo < 1.0);
            CHECK(r.x_hi > 1.0);
            CHECK(r.x_hi < std::sqrt(2.0));
            CHECK(r.x_hi == doctest::Approx(outer_root(h)).epsilon(1e-13));
            const auto l = branch_points(h, Annulus::InteriorLeft);
            CHECK(l.x_lo == doctest::Approx(-r.x_hi));
            CHECK(l.x_hi == doctest::Approx(-r.x_lo));
        }
        for (double h : {1e-4, 0.5, 2.0, 1e3}) {
            const auto e = branch_points(h, Annulus::Exterior);
            CHECK(e.x_lo == doctest::Approx(-e.x_hi));
            CHECK(e.x_hi == doctest::Approx(outer_root(h)).epsilon(1e-12));
        }
    }

    TEST_CASE("small root keeps full precision near the saddle") {
        const double h = -1e-10;
        const auto r = branch_points(h, Annulus::InteriorRight);
        // x_lo^2 = u_-, and u_- = -2h + O(h^2) for small h
        CHECK(r.u_minus == doctest::Approx(2e-10).epsilon(1e-9));
        CHECK(r.x_lo * r.x_lo == doctest::Approx(r.u_minus).epsilon(1e-14));
    }

    TEST_CASE("cofactor reproduces y") {
        for (Annulus a : {Annulus::InteriorLeft, Annulus::InteriorRight, Annulus::Exterior}) {
            const double h = is_interior(a) ? -0.13 : 0.7;
            const auto g = branch_points(h, a);
            for (int i = 1; i < 20; ++i) {
                const double x = g.x_lo + (g.x_hi - g.x_lo) * i / 20.0;
                const double y = std::sqrt(2.0 * h + x * x - 0.5 * x * x * x * x);
                CHECK(std::sqrt((x - g.x_lo) * (g.x_hi - x)) * g.cofactor(x) ==
                      doctest::Approx(y).epsilon(1e-13));
                CHECK(oval_y(x, h) == doctest::Approx(y).epsilon(1e-13));
            }
        }
    }

    TEST_CASE("domain errors and limits") {
        CHECK_THROWS_AS(branch_points(0.1, Annulus::InteriorRight), DomainError);
        CHECK_THROWS_AS(branch_points(-0.1, Annulus::Exterior), DomainError);
        CHECK_THROWS_AS(branch_points(-0.25, Annulus::InteriorRight), DomainError);
        const auto c = branch_points(-0.25, Annulus::InteriorRight, Approach::Limit);
        CHECK(c.x_lo == doctest::Approx(1.0));
        CHECK(c.x_hi == doctest::Approx(1.0));
        CHECK_THROWS_AS(oval_y(3.0, 0.5), DomainError);
        CHECK(oval_y(1.0, -0.25) == 0.0);
        CHECK(oval_y(0.0, 2.0) == doctest::Approx(2.0));
        CHECK(oval_y(std::sqrt(2.0), 0.0) == 0.0);
        CHECK(branch_points(2.0, Annulus::Exterior).x_hi == doctest::Approx(2.0).epsilon(1e-15));
        const auto s = branch_points(-1e-12, Annulus::InteriorRight);
        CHECK(s.x_lo == doctest::Approx(0.0).epsilon(1e-5));
        CHECK(s.x_hi == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    }

    TEST_CASE("section points") {
        const Point r = section_point(-0.125, Annulus::InteriorRight);
        CHECK(r.y == 0.0);
        CHECK(r.x == doctest::Approx(outer_root(-0.125)).epsilon(1e-13));
        const Point l = section_point(-0.125, Annulus::InteriorLeft);
        CHECK(l.x == doctest::Approx(-r.x));
        const Point e = section_point(2.0, Annulus::Exterior);
        CHECK(e.x == 0.0);
        CHECK(e.y == doctest::Approx(2.0));
        CHECK(hamiltonian(e.x, e.y) == doctest::Approx(2.0));
    }
}
