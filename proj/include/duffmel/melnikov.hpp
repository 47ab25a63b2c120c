#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "duffmel/abelian.hpp"
#include "duffmel/geometry.hpp"
#include "duffmel/polynomial.hpp"

namespace duffmel {

// Coefficients over the monomials 1, x, y, xy, x^2, y^2, x^2 y, x y^2, x^3, y^3.
// lambda* enter f, gamma* enter g; suffix 1 is the order-eps part, suffix 2 the order-eps^2 part.
struct PerturbationParams {
    std::array<double, 10> lambda1{};
    std::array<double, 10> gamma1{};
    std::array<double, 10> lambda2{};
    std::array<double, 10> gamma2{};

    bool operator==(const PerturbationParams&) const = default;
};

struct MonomialPowers {
    int px;
    int py;
};

MonomialPowers monomial_powers(int index);

// sum_i c[i] m_i(x, y) as a polynomial in (x, y)
Poly2 field_polynomial(const std::array<double, 10>& c);

enum class Prefactor { One, InverseFourHPlusOne };
enum class M2Source { Corrected, Printed };

struct MelnikovForm {
    int order = 1;
    Annulus annulus = Annulus::InteriorRight;
    Polynomial poly0;
    Polynomial poly1;
    Polynomial poly2;
    Prefactor prefactor = Prefactor::One;
    M2Source source = M2Source::Corrected;

    bool is_zero() const { return poly0.is_zero() && poly1.is_zero() && poly2.is_zero(); }
};

MelnikovForm m1_form(const PerturbationParams& p, Annulus a);

std::vector<double> m1_vanishing_residuals(const PerturbationParams& p, Annulus a);

constexpr double kM1ZeroTol = 1e-12;

// Solves the M1 = 0 conditions for gamma1; the xy condition is imposed on the interior only.
PerturbationParams enforce_m1_zero(const PerturbationParams& p, Annulus a = Annulus::InteriorRight);

void require_m1_zero(const PerturbationParams& p, Annulus a);

// Second Melnikov function. Corrected: reduction of the Iliev formula (default).
// Printed: coefficient lists as published, kept for comparison.
MelnikovForm m2_form(const PerturbationParams& p, Annulus a, M2Source source = M2Source::Corrected);

cplx m_eval(const MelnikovForm& form, cplx h, const PeriodVector& pv);

// Sum of the magnitudes of the individual terms; the natural scale for relative errors.
double m_eval_scale(const MelnikovForm& form, cplx h, const PeriodVector& pv);

struct IlievIngredients {
    Poly2 F;    // (x, y)
    Poly2 G;    // (x, y)
    Poly2 G1;   // odd part of G in y
    Poly2 G2;   // even part of G in y
    Poly2 p1;   // (x, w): G1 = y p1(x, y^2)
    Poly2 p2;   // (x, w): G2 = p2(x, y^2)
    Poly2 P2;   // (x, h): int_0^x p2(s, 2h + s^2 - s^4/2) ds
    Poly2 P2h;  // (x, h)
    Poly2 G1y;  // (x, y): G1h = G1y / y
    Poly2 divergence;  // f_x + g_y of the order-eps field
};

IlievIngredients iliev_ingredients(const PerturbationParams& p);

double m2_iliev_quadrature(const PerturbationParams& p, double h, Annulus a,
                           const QuadratureSpec& spec = {});

// Direct quadrature of oint g dx - f dy for the order-eps field.
double m1_quadrature(const PerturbationParams& p, double h, Annulus a,
                     const QuadratureSpec& spec = {});

struct CoefficientDeviation {
    std::string slot;  // e.g. "poly0[1]"
    double printed;
    double corrected;
};

struct ValueDeviation {
    double h;
    double printed;
    double corrected;
    double oracle;
    double printed_rel_err;
    double corrected_rel_err;
};

struct DeviationReport {
    Annulus annulus;
    std::vector<CoefficientDeviation> coefficients;
    std::vector<ValueDeviation> values;
    bool printed_consistent = true;    // printed form within tolerance of the oracle
    bool corrected_consistent = true;  // corrected form within tolerance of the oracle
};

DeviationReport m2_deviations(const PerturbationParams& p, Annulus a, const std::vector<double>& levels,
                              double tol = 1e-7);

std::string to_json(const DeviationReport& r);

PerturbationParams parse_params_json(const std::string& text);
PerturbationParams load_params(const std::string& path);
std::string params_to_json(const PerturbationParams& p);

// Coefficients uniform in [-1, 1]; constrained draws pass through enforce_m1_zero.
PerturbationParams random_params(std::mt19937_64& rng, bool constrained, Annulus a);

}  // namespace duffmel
