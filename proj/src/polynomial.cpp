#include "duffmel/polynomial.hpp"

#include <algorithm>
#include <cmath>

namespace duffmel {

int Polynomial::degree() const {
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[i] != 0.0) return i;
    return -1;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

std::complex<double> Polynomial::operator()(std::complex<double> x) const {
    std::complex<double> acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
}

double Polynomial::max_abs() const {
    double m = 0.0;
    for (double v : c) m = std::max(m, std::abs(v));
    return m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0.0);
    for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.coeff(i) + b.coeff(i);
    return r;
}

Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r = a;
    for (double& v : r.c) v *= s;
    return r;
}

Poly2::Poly2(int deg_u, int deg_v)
    : nu_(deg_u + 1), nv_(deg_v + 1), c_(static_cast<std::size_t>(nu_) * nv_, 0.0) {}

Poly2 Poly2::monomial(int i, int j, double coeff) {
    Poly2 p(i, j);
    p.ref(i, j) = coeff;
    return p;
}

double Poly2::at(int i, int j) const {
    if (i < 0 || j < 0 || i >= nu_ || j >= nv_) return 0.0;
    return c_[static_cast<std::size_t>(i) * nv_ + j];
}

void Poly2::grow(int nu, int nv) {
    if (nu <= nu_ && nv <= nv_) return;
    Poly2 g(std::max(nu, nu_) - 1, std::max(nv, nv_) - 1);
    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; ++j) g.ref(i, j) = at(i, j);
    *this = std::move(g);
}

void Poly2::add(int i, int j, double value) {
    grow(i + 1, j + 1);
    ref(i, j) += value;
}

double Poly2::operator()(double u, double v) const {
    double acc = 0.0;
    for (int i = nu_ - 1; i >= 0; --i) {
        double row = 0.0;
        for (int j = nv_ - 1; j >= 0; --j) row = row * v + at(i, j);
        acc = acc * u + row;
    }
    return acc;
}

Poly2 Poly2::d_u() const {
    Poly2 r(std::max(nu_ - 2, 0), std::max(nv_ - 1, 0));
    for (int i = 1; i < nu_; ++i)
        for (int j = 0; j < nv_; ++j) r.add(i - 1, j, i * at(i, j));
    return r;
}

Poly2 Poly2::d_v() const {
    Poly2 r(std::max(nu_ - 1, 0), std::max(nv_ - 2, 0));
    for (int i = 0; i < nu_; ++i)
        for (int j = 1; j < nv_; ++j) r.add(i, j - 1, j * at(i, j));
    return r;
}

Poly2 Poly2::integral_u() const {
    Poly2 r(nu_, std::max(nv_ - 1, 0));
    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; ++j) r.add(i + 1, j, at(i, j) / (i + 1));
    return r;
}

Poly2 Poly2::integral_v() const {
    Poly2 r(std::max(nu_ - 1, 0), nv_);
    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; ++j) r.add(i, j + 1, at(i, j) / (j + 1));
    return r;
}

Poly2 Poly2::at_v_zero() const {
    Poly2 r(std::max(nu_ - 1, 0), 0);
    for (int i = 0; i < nu_; ++i) r.add(i, 0, at(i, 0));
    return r;
}

Poly2 Poly2::at_v(double v) const {
    Poly2 r(std::max(nu_ - 1, 0), 0);
    for (int i = 0; i < nu_; ++i) {
        double acc = 0.0;
        for (int j = nv_ - 1; j >= 0; --j) acc = acc * v + at(i, j);
        r.add(i, 0, acc);
    }
    return r;
}

Poly2 Poly2::even_v() const {
    Poly2 r = *this;
    for (int i = 0; i < nu_; ++i)
        for (int j = 1; j < nv_; j += 2) r.ref(i, j) = 0.0;
    return r;
}

Poly2 Poly2::odd_v() const {
    Poly2 r = *this;
    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; j += 2) r.ref(i, j) = 0.0;
    return r;
}

Poly2 Poly2::compose_v(const Poly2& q) const {
    Poly2 result;
    for (int j = 0; j < nv_; ++j) {
        Poly2 qj = Poly2::monomial(0, 0);
        for (int k = 0; k < j; ++k) qj = qj * q;
        for (int i = 0; i < nu_; ++i) {
            const double a = at(i, j);
            if (a != 0.0) result = result + Poly2::monomial(i, 0, a) * qj;
        }
    }
    return result;
}

Poly2 Poly2::even_to_square() const {
    Poly2 r;
    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; j += 2)
            if (at(i, j) != 0.0) r.add(i, j / 2, at(i, j));
    return r;
}

Poly2 Poly2::odd_to_square() const {
    Poly2 r;
    for (int i = 0; i < nu_; ++i)
        for (int j = 1; j < nv_; j += 2)
            if (at(i, j) != 0.0) r.add(i, (j - 1) / 2, at(i, j));
    return r;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (int i = 0; i < o.nu_; ++i)
        for (int j = 0; j < o.nv_; ++j)
            if (o.at(i, j) != 0.0) r.add(i, j, o.at(i, j));
    return r;
}

Poly2 Poly2::operator-(const Poly2& o) const { return *this + o * -1.0; }

Poly2 Poly2::operator*(const Poly2& o) const {
    if (nu_ == 0 || o.nu_ == 0) return {};
    Poly2 r(nu_ + o.nu_ - 2, nv_ + o.nv_ - 2);
    for (int i = 0; i < nu_; ++i)
        for (int j = 0; j < nv_; ++j) {
            const double a = at(i, j);
            if (a == 0.0) continue;
            for (int k = 0; k < o.nu_; ++k)
                for (int l = 0; l < o.nv_; ++l) r.ref(i + k, j + l) += a * o.at(k, l);
        }
    return r;
}

Poly2 Poly2::operator*(double s) const {
    Poly2 r = *this;
    for (double& v : r.c_) v *= s;
    return r;
}

double Poly2::max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace duffmel
