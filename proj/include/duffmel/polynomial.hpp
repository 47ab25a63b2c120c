#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace duffmel {

// Real polynomial in one variable, coefficients in ascending order.
struct Polynomial {
    std::vector<double> c;

    Polynomial() = default;
    Polynomial(std::initializer_list<double> coeffs) : c(coeffs) {}
    explicit Polynomial(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    int degree() const;  // -1 for the zero polynomial
    bool is_zero() const { return degree() < 0; }
    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> x) const;
    double coeff(std::size_t i) const { return i < c.size() ? c[i] : 0.0; }
    double max_abs() const;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& a);

// Dense polynomial in two variables (u, v); coefficient of u^i v^j at (i, j).
class Poly2 {
public:
    Poly2() = default;
    Poly2(int deg_u, int deg_v);

    static Poly2 monomial(int i, int j, double coeff = 1.0);

    int deg_u() const { return nu_ - 1; }
    int deg_v() const { return nv_ - 1; }
    double at(int i, int j) const;
    void add(int i, int j, double value);

    double operator()(double u, double v) const;

    Poly2 d_u() const;
    Poly2 d_v() const;
    Poly2 integral_u() const;  // antiderivative in u vanishing at u = 0
    Poly2 integral_v() const;  // antiderivative in v vanishing at v = 0
    Poly2 at_v_zero() const;   // v := 0
    Poly2 at_v(double v) const;  // v := value, leaving a polynomial in u

    // Split by parity in v.
    Poly2 even_v() const;
    Poly2 odd_v() const;

    // Substitute v := q(u, w) and return a polynomial in (u, w).
    Poly2 compose_v(const Poly2& q) const;

    // For a polynomial with only even powers of v, the polynomial p with self = p(u, v^2).
    Poly2 even_to_square() const;
    // For a polynomial with only odd powers of v, the polynomial p with self = v * p(u, v^2).
    Poly2 odd_to_square() const;

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(double s) const;

    double max_abs() const;
    bool is_zero(double tol = 0.0) const { return max_abs() <= tol; }

private:
    int nu_ = 0;
    int nv_ = 0;
    std::vector<double> c_;
    double& ref(int i, int j) { return c_[static_cast<std::size_t>(i) * nv_ + j]; }
    void grow(int nu, int nv);
};

}  // namespace duffmel
