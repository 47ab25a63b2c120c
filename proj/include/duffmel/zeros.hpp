#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "duffmel/abelian.hpp"
#include "duffmel/melnikov.hpp"

namespace duffmel {

struct Contour {
    double R = 10.0;
    double eta = kCutEta;
    double rho = kRhoMin;
};

struct RealRoot {
    double location;
    double bracket;  // width of the final bracket
};

struct RealZeros {
    std::vector<RealRoot> roots;
    std::vector<double> suspect;  // local minima of |fn| near zero without a sign change
};

constexpr int kRealScanPoints = 512;
constexpr double kRootWidth = 1e-12;
constexpr int kDegenerateSamples = 64;
constexpr double kDegenerateLevel = 1e-14;

// Sign-change roots of fn on (lo, hi), refined to width kRootWidth.
RealZeros real_zeros(const std::function<double(double)>& fn, double lo, double hi);

// True if fn is below kDegenerateLevel at kDegenerateSamples points of (lo, hi).
bool identically_zero(const std::function<double(double)>& fn, double lo, double hi);

// Function of the period data, evaluated along the contour.
using PeriodFunction = std::function<cplx(const PeriodVector&)>;

// The normalized function whose zeros are counted: M1 or M2 on the interior,
// M1 / I0 and (4h + 1) M2 / I0 on the exterior.
PeriodFunction counting_function(const MelnikovForm& form);

// Real interval of the period annulus enclosed by the keyhole contour.
Interval counting_interval(Annulus a, const Contour& c);

// Period data sampled along the keyhole boundary of D_R. Nodes are added on demand by
// transporting from the nearest sampled neighbour on the same piece, so one table can
// serve many counting functions.
class ContourTable {
public:
    enum class Part { Puncture, CutPlus, Circle, CutMinus };

    ContourTable(Annulus a, const Contour& c, int density = 1);

    Annulus annulus() const { return annulus_; }
    const Contour& contour() const { return contour_; }
    std::size_t piece_count() const { return pieces_.size(); }
    Part part(std::size_t piece) const { return parts_[piece]; }
    std::vector<double> nodes(std::size_t piece) const;
    const PeriodVector& at(std::size_t piece, double s);
    std::size_t size() const;
    // Relative mismatch of (I0, I2) between the two ends of the closed contour.
    double closure_error();

private:
    Annulus annulus_;
    Contour contour_;
    std::vector<PathPiece> pieces_;
    std::vector<Part> parts_;
    std::vector<std::map<double, PeriodVector>> cache_;
    TransportOptions opts_;
};

struct WindingResult {
    double turns = 0.0;
    int winding = 0;
    bool integral = false;
    double circle_turns = 0.0;
    double cut_turns = 0.0;
    double puncture_turns = 0.0;
    double max_step = 0.0;  // largest phase increment between neighbouring samples
    std::size_t samples = 0;
};

constexpr double kIntegralityTurns = 0.1;
constexpr double kTargetPhaseStep = 0.785398163397448;  // pi / 4
constexpr double kMaxPhaseStep = 1.5707963267948966;    // pi / 2

// Argument principle over the keyhole boundary; throws DegenerateError if fn vanishes on it.
WindingResult winding_count(const PeriodFunction& fn, ContourTable& table);
WindingResult winding_count(const MelnikovForm& form, const Contour& c = {});

// (f(h + i0) - f(h - i0)) / 2i on the cut, from Richardson-extrapolated boundary values.
double imaginary_part_on_cut(const PeriodFunction& fn, double h, Annulus a, double eta = kCutEta);

// Im(I2 / I0) |I0|^2 on the exterior cut, divided by h (4h + 1).
double wronskian_constant(double h, double eta = kCutEta);

enum class CertificateStatus { WithinBound, BoundViolated, Inconclusive, Degenerate };

std::string_view to_string(CertificateStatus s);

struct ZeroCertificate {
    Annulus annulus = Annulus::InteriorRight;
    int order = 1;
    std::vector<RealRoot> real_roots;
    std::vector<double> suspect_roots;
    int winding_count = 0;
    WindingResult winding;
    int paper_bound = 0;
    Contour contour;
    double closure_error = 0.0;
    CertificateStatus status = CertificateStatus::Inconclusive;
    std::string note;
};

int paper_bound(Annulus a, int order);

// Caches period data on the real counting interval and along the contour for one annulus.
class CertificationContext {
public:
    explicit CertificationContext(Annulus a, const Contour& c = {}, int density = 1);

    Annulus annulus() const { return table_.annulus(); }
    ContourTable& table() { return table_; }
    const PeriodVector& real_period(double h);

private:
    ContourTable table_;
    std::map<double, PeriodVector> real_;
};

ZeroCertificate certify(const PerturbationParams& p, int order, CertificationContext& ctx);
ZeroCertificate certify(const PerturbationParams& p, int order, Annulus a, const Contour& c = {});

std::string to_json(const ZeroCertificate& z);

}  // namespace duffmel
