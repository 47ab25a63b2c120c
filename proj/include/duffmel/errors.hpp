#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace duffmel {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Quadrature or integrator failed to reach the requested tolerance.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best_value, double err_est)
        : std::runtime_error(what), best_value_(best_value), err_est_(err_est) {}
    double best_value() const { return best_value_; }
    double err_est() const { return err_est_; }

private:
    double best_value_;
    double err_est_;
};

class PathError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PoleError : public std::runtime_error {
public:
    PoleError(const std::string& what, std::complex<double> bracket, bool removable)
        : std::runtime_error(what), bracket_(bracket), removable_(removable) {}
    std::complex<double> bracket() const { return bracket_; }
    bool removable() const { return removable_; }

private:
    std::complex<double> bracket_;
    bool removable_;
};

class ConstraintError : public std::invalid_argument {
public:
    ConstraintError(const std::string& what, std::vector<double> residuals)
        : std::invalid_argument(what), residuals_(std::move(residuals)) {}
    const std::vector<double>& residuals() const { return residuals_; }

private:
    std::vector<double> residuals_;
};

// Trajectory did not return to the section within the time budget.
class EscapeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace duffmel
