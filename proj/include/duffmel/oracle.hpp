#pragma once

#include <cstddef>
#include <vector>

#include "duffmel/geometry.hpp"
#include "duffmel/melnikov.hpp"

namespace duffmel {

struct State {
    double x;
    double y;
};

// Primary sections: {y = 0, x > 1} (interior right), {y = 0, x < -1} (interior left),
// {x = 0, y > 0} (exterior). Alternate sections cross each oval at a different point.
enum class Section { Primary, Alternate };

struct SectionEvent {
    Annulus annulus;
    Section section = Section::Primary;

    double crossing(const State& s) const;
    // True if the step from `before` to `after` crosses the section in the flow direction.
    bool crossed(const State& before, const State& after) const;
};

struct FlowOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double event_tol = 1e-13;
    double t_max = 1e3;
    double max_step = 0.1;
};

struct FlowResult {
    State state;
    double time;
    std::size_t steps;
};

// Integrates x' = y + eps f, y' = x - x^3 + eps g (f = f1 + eps f2, likewise g) until the
// first crossing of the section after leaving the start point.
FlowResult flow(const State& start, const PerturbationParams& p, double eps, const SectionEvent& ev,
                const FlowOptions& opts = {});

Point section_start(double h, Annulus a, Section s);

struct DisplacementSample {
    double h;
    double epsilon;
    double d;  // H(return point) - h
    double integration_tol;
    double return_time;
};

DisplacementSample displacement(double h, double eps, const PerturbationParams& p, Annulus a,
                                Section s = Section::Primary, const FlowOptions& opts = {});

std::vector<double> default_eps_list();

struct MelnikovFit {
    double h;
    Annulus annulus;
    double m1;
    double m2;
    double m3;
    double sigma1;
    double sigma2;
    double condition;
    int sign;  // calibrated sign relating d to oint g dx - f dy
    std::vector<DisplacementSample> samples;
};

MelnikovFit melnikov_fit(double h, const PerturbationParams& p, Annulus a,
                         const std::vector<double>& eps_list = default_eps_list(),
                         const FlowOptions& opts = {});

// +1 when d = eps M1 + ..., -1 when d = -eps M1 + ...; probed once with f = x.
int displacement_sign();

// Log-log slope of |d/eps^k - reference| against eps.
double convergence_order(const std::vector<DisplacementSample>& samples, double reference, int k);

struct ConvergenceCase {
    std::vector<DisplacementSample> samples;
    double reference;
};

// Common slope over several cases, each with its own intercept.
double pooled_convergence_order(const std::vector<ConvergenceCase>& cases, int k);

}  // namespace duffmel
