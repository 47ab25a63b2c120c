#pragma once

#include <string>
#include <vector>

#include "duffmel/geometry.hpp"

namespace duffmel {

struct CheckItem {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool diagnostic = false;  // reported, never fails a run
    std::string detail;
};

bool all_pass(const std::vector<CheckItem>& items);

// Interior I0, I2 at h -> 0- by one-sided extrapolation over {-1e-2, -1e-3, -1e-4}.
std::vector<CheckItem> check_saddle_constants();

// Residuals of the two Picard-Fuchs relations on `points` log-spaced levels, and the
// derivative reductions I'2, I'4, I'6. `perturbation` shifts one matrix coefficient.
std::vector<CheckItem> check_picard_fuchs(Annulus a, int points = 50, double perturbation = 0.0);

// Interior I1 is linear with root -1/4; exterior I1 vanishes.
std::vector<CheckItem> check_i1_structure();

// |I0| and |I0'| over a polar grid of D_R for the exterior family, normalized by |h|^{3/4}.
std::vector<CheckItem> check_i0_nonvanishing(double R = 10.0, int radii = 20, int angles = 20);

// Im(I2/I0)|I0|^2 / (h(4h+1)) on the exterior cut: constant per segment, doubling across -1/4.
std::vector<CheckItem> check_wronskian();

// Exterior log-log slope of I0 over [1e2, 1e6]; the corrected slope is a diagnostic.
std::vector<CheckItem> check_asymptotic_slope();

std::string format_item(const CheckItem& c);

}  // namespace duffmel
