#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "duffmel/errors.hpp"
#include "duffmel/path.hpp"

namespace duffmel {

struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    std::size_t max_nodes = 4096;  // cap on integrand evaluations

    void validate() const;
};

template <class T>
struct QuadratureResult {
    T value{};
    double err_est = 0.0;
    std::size_t nodes = 0;
};

namespace detail {

inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Panel {
    double a, b;
    T value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class T, class F>
Panel<T> gauss_kronrod_15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    const T fc = f(c);
    T resk = fc * kWgk[7];
    T resg = fc * kWg[3];
    double resabs = magnitude(resk);
    T fv1[7], fv2[7];
    for (int j = 0; j < 7; ++j) {
        const double dx = r * kXgk[j];
        fv1[j] = f(c - dx);
        fv2[j] = f(c + dx);
        const T s = fv1[j] + fv2[j];
        resk += kWgk[j] * s;
        resabs += kWgk[j] * (magnitude(fv1[j]) + magnitude(fv2[j]));
        if (j % 2 == 1) resg += kWg[j / 2] * s;
    }
    const T reskh = resk * 0.5;
    double resasc = kWgk[7] * magnitude(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (magnitude(fv1[j] - reskh) + magnitude(fv2[j] - reskh));
    resk *= r;
    resg *= r;
    resabs *= std::abs(r);
    resasc *= std::abs(r);
    double err = magnitude(resk - resg);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(50.0 * eps * resabs, err);
    return {a, b, resk, err};
}

}  // namespace detail

// Globally adaptive G7K15 on [a, b] for a smooth integrand.
template <class T, class F>
QuadratureResult<T> integrate_adaptive(F&& f, double a, double b, const QuadratureSpec& spec) {
    spec.validate();
    std::priority_queue<detail::Panel<T>> heap;
    auto first = detail::gauss_kronrod_15<T>(f, a, b);
    T total = first.value;
    double err = first.err;
    std::size_t nodes = 15;
    heap.push(first);
    while (err > std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(total))) {
        if (nodes + 30 > spec.max_nodes) {
            std::ostringstream os;
            os << "quadrature did not converge within " << spec.max_nodes << " nodes (err_est "
               << err << ")";
            throw AccuracyError(os.str(), detail::magnitude(total), err);
        }
        auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        auto left = detail::gauss_kronrod_15<T>(f, worst.a, m);
        auto right = detail::gauss_kronrod_15<T>(f, m, worst.b);
        nodes += 30;
        total += left.value + right.value - worst.value;
        err += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    T sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().err;
        heap.pop();
    }
    return {sum, esum, nodes};
}

enum class SqrtWeight { Sqrt, InverseSqrt };

// Integral over [a, b] of g(x) * w(x)^{+-1/2} with w = (x - a)(b - x) and g smooth on [a, b].
// Uses x = m + r sin(theta), under which the weighted integrand is smooth in theta.
template <class T, class G>
QuadratureResult<T> integrate_sqrt_weighted(G&& g, double a, double b, SqrtWeight weight,
                                            const QuadratureSpec& spec) {
    const double m = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    auto integrand = [&](double theta) -> T {
        const double c = std::cos(theta);
        const T v = g(m + r * std::sin(theta));
        return weight == SqrtWeight::Sqrt ? v * (r * r * c * c) : v;
    };
    return integrate_adaptive<T>(integrand, -M_PI / 2, M_PI / 2, spec);
}

// Integral over [a, b] of f where f may have x^{+-1/2}-type endpoint behavior.
template <class F>
QuadratureResult<double> integrate_endpoint_sqrt(F&& f, double a, double b,
                                                 const QuadratureSpec& spec = {}) {
    const double m = 0.5 * (a + b);
    const double r = 0.5 * (b - a);
    auto integrand = [&](double theta) -> double {
        const double c = std::cos(theta);
        if (c <= 0.0) return 0.0;
        return f(m + r * std::sin(theta)) * r * c;
    };
    return integrate_adaptive<double>(integrand, -M_PI / 2, M_PI / 2, spec);
}

// Contour integral of f(h) dh along the path, adaptive per piece.
template <class F>
QuadratureResult<std::complex<double>> integrate_path(F&& f, const Path& path,
                                                      const QuadratureSpec& spec = {}) {
    QuadratureResult<std::complex<double>> out;
    for (const auto& piece : path.pieces) {
        auto integrand = [&](double s) -> std::complex<double> {
            return f(piece_point(piece, s)) * piece_derivative(piece, s);
        };
        const auto part = integrate_adaptive<std::complex<double>>(integrand, 0.0, 1.0, spec);
        out.value += part.value;
        out.err_est += part.err_est;
        out.nodes += part.nodes;
    }
    return out;
}

}  // namespace duffmel
