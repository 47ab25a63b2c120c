#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "duffmel/geometry.hpp"
#include "duffmel/path.hpp"
#include "duffmel/polynomial.hpp"
#include "duffmel/quadrature.hpp"

namespace duffmel {

enum class CutSide { Interior, CutPlus, CutMinus };

struct PeriodVector {
    cplx h;
    Annulus annulus;
    cplx I0;
    cplx I1;
    cplx I2;
    CutSide side = CutSide::Interior;
};

// I_k = oint x^k y dx over the flow-oriented oval.
double integral_I(int k, double h, Annulus a, Approach approach = Approach::Exact,
                  const QuadratureSpec& spec = {});

// I'_k = oint x^k / y dx, the h-derivative of I_k.
double integral_I_prime(int k, double h, Annulus a, Approach approach = Approach::Exact,
                        const QuadratureSpec& spec = {});

// oint (p(x, y) + n(x, y) / y) dx over the flow-oriented oval of geometry g.
double oval_integral(const Poly2& p, const Poly2& n, const OvalGeometry& g,
                     const QuadratureSpec& spec = {});

// oint f dy, using y dy = (x - x^3) dx along the level curve.
double oval_integral_dy(const Poly2& f, const OvalGeometry& g, const QuadratureSpec& spec = {});

// Slope c of I_1 = c (4h + 1); negative on the left lobe, zero on the exterior.
double i1_slope(Annulus a);

double base_point(Annulus a);

// Real period data by quadrature; I1 from the linear law.
PeriodVector period_vector(double h, Annulus a, const QuadratureSpec& spec = {});

enum class Moment {
    CubeOfY,  // oint y^3 dx
    I4,
    I6,
    DerivI0,
    DerivI2,
    DerivI4,
    DerivI6,
};

cplx reduce_moment(Moment m, cplx h, const PeriodVector& pv);

struct PFMatrix {
    cplx h;
    std::array<std::array<cplx, 2>, 2> a;  // d/dh (I0, I2) = a (I0, I2)

    std::array<cplx, 2> apply(const std::array<cplx, 2>& v) const;
};

PFMatrix pf_matrix(cplx h);

// Coefficients B of (I0, I2) = B (I0', I2') as printed with the Picard-Fuchs system.
std::array<std::array<cplx, 2>, 2> pf_forward_matrix(cplx h);

struct PFResidual {
    double eq_first;   // |I0 - (4/3) h I0' - (1/3) I2'| / (1 + |I0|)
    double eq_second;  // |I2 - (4h/15) I0' - (4h/5 + 4/15) I2'| / (1 + |I2|)
};

PFResidual pf_residual(double h, Annulus a, const QuadratureSpec& spec = {},
                       double coefficient_perturbation = 0.0);

constexpr double kRhoMin = 1e-3;
constexpr double kCutEta = 1e-3;

// Path from the base point to h_target that stays inside the cut domain of the annulus.
Path default_path(cplx h_target, Annulus a);

struct TransportOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double clearance = kRhoMin;
};

using PeriodState = std::array<cplx, 2>;

// Transport of (I0, I2) along a single path piece between parameters s0 and s1.
PeriodState transport_piece(const PathPiece& piece, double s0, double s1, PeriodState start,
                            const TransportOptions& opts = {});

PeriodState base_state(Annulus a);

PeriodVector continue_complex(cplx h_target, const Path& path, Annulus a,
                              const TransportOptions& opts = {});
PeriodVector continue_complex(cplx h_target, Annulus a, const TransportOptions& opts = {});

struct CutValues {
    PeriodVector plus;
    PeriodVector minus;
};

// Boundary values on the cut: interior [0, inf), exterior (-inf, 0].
CutValues cut_values(double h, Annulus a, double eta = kCutEta);

// Richardson combination for offsets eta, eta/2, eta/4 with O(eta) and O(eta^2) removed.
cplx richardson_eta(cplx f_eta, cplx f_half, cplx f_quarter);

// Coefficients of the analytic factors multiplying ln h in I0 and I2 near h = 0,
// normalized by I0 = (-h + ...) ln h + analytic.
struct SaddleLogSeries {
    std::vector<double> phi0;
    std::vector<double> phi2;
};

SaddleLogSeries saddle_log_series(int terms);

struct AsymptoticsReport {
    Annulus annulus;
    double i0_constant = 0.0;
    double i2_constant = 0.0;
    double i0_constant_expected = 0.0;
    double i2_constant_expected = 0.0;
    double log_coefficient = 0.0;  // fitted coefficient of h ln|h| in I0 (interior)
    double slope = 0.0;            // log-log slope of exterior I0 at large h
    double slope_corrected = 0.0;  // slope with the h^{-1/2} correction modeled
    bool pass = false;
};

// One-sided extrapolation of I_k to h = 0 from the listed levels, modeling the known log terms.
double saddle_constant(int k, Annulus a, const std::vector<double>& levels,
                       const QuadratureSpec& spec = {});

AsymptoticsReport asymptotics_check(Annulus a);

}  // namespace duffmel
