#include "duffmel/geometry.hpp"

#include <cmath>
#include <sstream>

#include "duffmel/errors.hpp"

namespace duffmel {

double hamiltonian(double x, double y) {
    const double x2 = x * x;
    return 0.5 * y * y - 0.5 * x2 + 0.25 * x2 * x2;
}

CriticalValues critical_values() { return {-0.25, 0.0}; }

Interval sigma(Annulus a) {
    if (a == Annulus::Exterior) return {0.0, std::numeric_limits<double>::infinity()};
    return {-0.25, 0.0};
}

bool is_interior(Annulus a) { return a != Annulus::Exterior; }

std::string_view to_string(Annulus a) {
    switch (a) {
        case Annulus::InteriorLeft: return "interior-left";
        case Annulus::InteriorRight: return "interior-right";
        case Annulus::Exterior: return "exterior";
    }
    return "?";
}

Annulus parse_annulus(std::string_view name) {
    if (name == "interior-left") return Annulus::InteriorLeft;
    if (name == "interior-right") return Annulus::InteriorRight;
    if (name == "exterior") return Annulus::Exterior;
    throw DomainError("unknown annulus '" + std::string(name) + "'");
}

namespace {

void check_level(double h, Annulus a, Approach approach) {
    const Interval s = sigma(a);
    const bool ok = approach == Approach::Limit ? (h >= s.lo && h <= s.hi) : s.contains(h);
    if (!ok || !std::isfinite(h)) {
        std::ostringstream os;
        os << "h = " << h << " outside sigma(" << to_string(a) << ") = (" << s.lo << ", " << s.hi
           << ")";
        throw DomainError(os.str());
    }
}

}  // namespace

OvalGeometry branch_points(double h, Annulus a, Approach approach) {
    check_level(h, a, approach);
    const double r = std::sqrt(std::max(0.0, 1.0 + 4.0 * h));
    OvalGeometry g{};
    g.h = h;
    g.annulus = a;
    g.orientation = 1;
    g.u_plus = 1.0 + r;
    g.u_minus = -4.0 * h / (1.0 + r);
    const double p = std::sqrt(g.u_plus);
    switch (a) {
        case Annulus::InteriorRight:
            g.x_lo = std::sqrt(std::max(0.0, g.u_minus));
            g.x_hi = p;
            break;
        case Annulus::InteriorLeft:
            g.x_lo = -p;
            g.x_hi = -std::sqrt(std::max(0.0, g.u_minus));
            break;
        case Annulus::Exterior:
            g.x_lo = -p;
            g.x_hi = p;
            break;
    }
    return g;
}

double OvalGeometry::cofactor(double x) const {
    switch (annulus) {
        case Annulus::InteriorRight: return std::sqrt(0.5 * (x_hi + x) * (x + x_lo));
        case Annulus::InteriorLeft: return std::sqrt(0.5 * (x_lo + x) * (x + x_hi));
        case Annulus::Exterior: return std::sqrt(0.5 * (x * x - u_minus));
    }
    return 0.0;
}

double oval_y(double x, double h, double tol) {
    const double x2 = x * x;
    const double v = 2.0 * h + x2 - 0.5 * x2 * x2;
    if (v >= 0.0) return std::sqrt(v);
    if (v >= -tol) return 0.0;
    std::ostringstream os;
    os << "point x = " << x << " is off the level h = " << h << " (y^2 = " << v << ")";
    throw DomainError(os.str());
}

Point section_point(double h, Annulus a, Approach approach) {
    const OvalGeometry g = branch_points(h, a, approach);
    switch (a) {
        case Annulus::InteriorRight: return {g.x_hi, 0.0};
        case Annulus::InteriorLeft: return {g.x_lo, 0.0};
        case Annulus::Exterior: return {0.0, std::sqrt(2.0 * h)};
    }
    return {0.0, 0.0};
}

}  // namespace duffmel
