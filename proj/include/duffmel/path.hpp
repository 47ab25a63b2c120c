#pragma once

#include <complex>
#include <variant>
#include <vector>

namespace duffmel {

using cplx = std::complex<double>;

struct Segment {
    cplx from;
    cplx to;
};

// Points center + radius * exp(i theta), theta running from theta_from to theta_to.
struct Arc {
    cplx center;
    double radius;
    double theta_from;
    double theta_to;
};

using PathPiece = std::variant<Segment, Arc>;

cplx piece_point(const PathPiece& p, double s);
cplx piece_derivative(const PathPiece& p, double s);
double piece_length(const PathPiece& p);
// Restriction of p to the parameter range [s0, s1], reparameterized on [0, 1].
PathPiece piece_slice(const PathPiece& p, double s0, double s1);

struct Path {
    std::vector<PathPiece> pieces;

    cplx start() const;
    cplx end() const;
    double length() const;
    // Smallest distance from the path to z.
    double clearance(cplx z) const;

    Path& line_to(cplx z);
    Path& arc_to(cplx center, double theta_to);
    static Path from(cplx z);

private:
    cplx cursor_{};
};

}  // namespace duffmel
