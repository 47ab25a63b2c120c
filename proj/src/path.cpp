#include "duffmel/path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace duffmel {

namespace {
const cplx kI{0.0, 1.0};
}

cplx piece_point(const PathPiece& p, double s) {
    if (const auto* seg = std::get_if<Segment>(&p)) return seg->from + s * (seg->to - seg->from);
    const auto& arc = std::get<Arc>(p);
    const double t = arc.theta_from + s * (arc.theta_to - arc.theta_from);
    return arc.center + arc.radius * std::exp(kI * t);
}

cplx piece_derivative(const PathPiece& p, double s) {
    if (const auto* seg = std::get_if<Segment>(&p)) return seg->to - seg->from;
    const auto& arc = std::get<Arc>(p);
    const double dt = arc.theta_to - arc.theta_from;
    const double t = arc.theta_from + s * dt;
    return kI * dt * arc.radius * std::exp(kI * t);
}

double piece_length(const PathPiece& p) {
    if (const auto* seg = std::get_if<Segment>(&p)) return std::abs(seg->to - seg->from);
    const auto& arc = std::get<Arc>(p);
    return arc.radius * std::abs(arc.theta_to - arc.theta_from);
}

PathPiece piece_slice(const PathPiece& p, double s0, double s1) {
    if (std::holds_alternative<Segment>(p)) return Segment{piece_point(p, s0), piece_point(p, s1)};
    const auto& arc = std::get<Arc>(p);
    const double dt = arc.theta_to - arc.theta_from;
    return Arc{arc.center, arc.radius, arc.theta_from + s0 * dt, arc.theta_from + s1 * dt};
}

cplx Path::start() const { return pieces.empty() ? cursor_ : piece_point(pieces.front(), 0.0); }

cplx Path::end() const { return pieces.empty() ? cursor_ : piece_point(pieces.back(), 1.0); }

double Path::length() const {
    double total = 0.0;
    for (const auto& p : pieces) total += piece_length(p);
    return total;
}

double Path::clearance(cplx z) const {
    double best = std::abs(start() - z);
    for (const auto& p : pieces) {
        if (const auto* seg = std::get_if<Segment>(&p)) {
            const cplx d = seg->to - seg->from;
            const double n2 = std::norm(d);
            double t = n2 > 0.0 ? std::real((z - seg->from) * std::conj(d)) / n2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            best = std::min(best, std::abs(seg->from + t * d - z));
        } else {
            const auto& arc = std::get<Arc>(p);
            const cplx rel = z - arc.center;
            const double lo = std::min(arc.theta_from, arc.theta_to);
            const double hi = std::max(arc.theta_from, arc.theta_to);
            double phi = std::arg(rel);
            // Closest angle on the arc, accounting for 2 pi periodicity.
            double dist = std::numeric_limits<double>::infinity();
            for (int k = -3; k <= 3; ++k) {
                const double t = std::clamp(phi + 2.0 * M_PI * k, lo, hi);
                dist = std::min(dist, std::abs(arc.center + arc.radius * std::exp(kI * t) - z));
            }
            best = std::min(best, dist);
        }
    }
    return best;
}

Path Path::from(cplx z) {
    Path p;
    p.cursor_ = z;
    return p;
}

Path& Path::line_to(cplx z) {
    pieces.push_back(Segment{cursor_, z});
    cursor_ = z;
    return *this;
}

Path& Path::arc_to(cplx center, double theta_to) {
    const cplx rel = cursor_ - center;
    const Arc arc{center, std::abs(rel), std::arg(rel), theta_to};
    pieces.push_back(arc);
    cursor_ = piece_point(arc, 1.0);
    return *this;
}

}  // namespace duffmel
