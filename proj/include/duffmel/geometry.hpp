#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace duffmel {

// H(x, y) = y^2/2 - x^2/2 + x^4/4
double hamiltonian(double x, double y);

struct CriticalValues {
    double h_c;  // centers (+-1, 0)
    double h_s;  // saddle (0, 0)
};

CriticalValues critical_values();

enum class Annulus { InteriorLeft, InteriorRight, Exterior };

struct Interval {
    double lo;
    double hi;
    bool contains(double v) const { return v > lo && v < hi; }
};

Interval sigma(Annulus a);
bool is_interior(Annulus a);
std::string_view to_string(Annulus a);
Annulus parse_annulus(std::string_view name);

// Exact: h must lie in the open interval sigma. Limit: closure endpoints are accepted.
enum class Approach { Exact, Limit };

struct Point {
    double x;
    double y;
};

// Level oval of H = h. On [x_lo, x_hi] the upper branch factors as
// y = sqrt((x - x_lo)(x_hi - x)) * cofactor(x) with a cofactor smooth on the closed interval.
struct OvalGeometry {
    double h;
    Annulus annulus;
    double x_lo;
    double x_hi;
    int orientation;  // +1: integrals follow the flow of X0 (clockwise in the (x, y) plane)
    double u_plus;    // 1 + sqrt(1 + 4h)
    double u_minus;   // 1 - sqrt(1 + 4h), computed without cancellation

    double cofactor(double x) const;
    double center() const { return 0.5 * (x_lo + x_hi); }
    double half_width() const { return 0.5 * (x_hi - x_lo); }
};

OvalGeometry branch_points(double h, Annulus a, Approach approach = Approach::Exact);

constexpr double kOvalClampTol = 1e-12;

double oval_y(double x, double h, double tol = kOvalClampTol);

Point section_point(double h, Annulus a, Approach approach = Approach::Exact);

}  // namespace duffmel
