#include "duffmel/melnikov.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "duffmel/errors.hpp"

namespace duffmel {

using nlohmann::json;

MonomialPowers monomial_powers(int index) {
    static constexpr MonomialPowers table[10] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 0},
                                                 {0, 2}, {2, 1}, {1, 2}, {3, 0}, {0, 3}};
    if (index < 0 || index > 9) throw DomainError("monomial index out of range");
    return table[index];
}

Poly2 field_polynomial(const std::array<double, 10>& c) {
    Poly2 p(3, 3);
    for (int i = 0; i < 10; ++i) {
        const auto m = monomial_powers(i);
        if (c[i] != 0.0) p.add(m.px, m.py, c[i]);
    }
    return p;
}

MelnikovForm m1_form(const PerturbationParams& p, Annulus a) {
    const auto& l = p.lambda1;
    const auto& g = p.gamma1;
    MelnikovForm f;
    f.order = 1;
    f.annulus = a;
    f.poly0 = Polynomial{l[1] + g[2], 4.0 / 7.0 * (l[7] + 3.0 * g[9])};
    f.poly1 = is_interior(a) ? Polynomial{2.0 * l[4] + g[3]} : Polynomial{};
    f.poly2 = Polynomial{g[6] + 3.0 * l[8] + l[7] / 7.0 + 3.0 * g[9] / 7.0};
    return f;
}

std::vector<double> m1_vanishing_residuals(const PerturbationParams& p, Annulus a) {
    const auto& l = p.lambda1;
    const auto& g = p.gamma1;
    std::vector<double> r{l[1] + g[2], l[7] + 3.0 * g[9]};
    if (is_interior(a)) r.push_back(2.0 * l[4] + g[3]);
    r.push_back(g[6] + 3.0 * l[8]);
    return r;
}

PerturbationParams enforce_m1_zero(const PerturbationParams& p, Annulus a) {
    PerturbationParams q = p;
    q.gamma1[2] = -q.lambda1[1];
    q.gamma1[9] = -q.lambda1[7] / 3.0;
    if (is_interior(a)) q.gamma1[3] = -2.0 * q.lambda1[4];
    q.gamma1[6] = -3.0 * q.lambda1[8];
    return q;
}

void require_m1_zero(const PerturbationParams& p, Annulus a) {
    const auto r = m1_vanishing_residuals(p, a);
    for (double v : r) {
        if (std::abs(v) > kM1ZeroTol) {
            std::ostringstream os;
            os << "M1 does not vanish on " << to_string(a) << "; residuals:";
            for (double x : r) os << ' ' << x;
            throw ConstraintError(os.str(), r);
        }
    }
}

namespace {

MelnikovForm m2_corrected(const PerturbationParams& p, Annulus a) {
    const auto& l = p.lambda1;
    const auto& g = p.gamma1;
    const auto& L = p.lambda2;
    const auto& G = p.gamma2;
    const double A = l[3] + 2.0 * g[5];
    const double B = l[6] + g[7];
    const double K = g[3] + 2.0 * l[4];

    const double a0 = G[2] + L[1] - A * l[0];
    const double a1 = 12.0 / 7.0 * G[9] + 4.0 / 7.0 * L[7] - 4.0 / 7.0 * A * l[5] -
                      B * (8.0 / 63.0 * l[7] + 8.0 / 7.0 * l[8]);
    const double r0 = G[6] + 3.0 * L[8] + L[7] / 7.0 + 3.0 * G[9] / 7.0 - A * (l[4] + l[5] / 7.0) -
                      B * (2.0 * l[1] + 16.0 / 63.0 * l[7] + 16.0 / 7.0 * l[8]);
    const double r1 = -8.0 / 9.0 * B * l[7];

    MelnikovForm f;
    f.order = 2;
    f.annulus = a;
    f.source = M2Source::Corrected;
    if (is_interior(a)) {
        f.poly0 = Polynomial{a0, a1};
        f.poly1 = Polynomial{G[3] + 2.0 * L[4] - A * (l[1] + l[7] / 8.0 + l[8]) -
                                 B * (2.0 * l[0] + 2.0 * l[4] + l[5] / 4.0),
                             -A * l[7] / 2.0 - B * l[5]};
        f.poly2 = Polynomial{r0, r1};
        return f;
    }
    // Exterior: (4h+1)^{-1} [ (4h+1)(a0 + a1 h) I0 + (4h+1)(r0 + r1 h) I2 + K-terms ].
    f.prefactor = Prefactor::InverseFourHPlusOne;
    f.poly0 = Polynomial{a0 - K * g[0], 4.0 * a0 + a1 + K * (4.0 / 3.0 * g[4] - 8.0 / 15.0 * A),
                         4.0 * a1};
    f.poly2 = Polynomial{r0 + K * (5.0 * g[0] + 5.0 / 3.0 * g[4] - l[3] / 2.0 - 17.0 / 30.0 * A),
                         4.0 * r0 + r1 + K * (-2.0 * l[3] + 2.0 / 5.0 * A), 4.0 * r1};
    return f;
}

MelnikovForm m2_printed(const PerturbationParams& p, Annulus a) {
    const auto& l = p.lambda1;
    const auto& g = p.gamma1;
    const auto& L = p.lambda2;
    const auto& G = p.gamma2;
    const double A = l[3] + 2.0 * g[5];
    const double B = l[6] + g[7];
    const double K = 2.0 * l[4] + g[3];
    MelnikovForm f;
    f.order = 2;
    f.annulus = a;
    f.source = M2Source::Printed;
    if (is_interior(a)) {
        const double alpha0 = -l[0] * A + L[1] + G[2];
        const double alpha1 = A * (-l[8] / 7.0 - l[5]);
        const double beta0 = -A * (l[1] - l[7] / 8.0) + 2.0 * B * (l[0] + 2.0 * l[4] - 2.0 * l[7]) +
                             2.0 * L[4] + G[3];
        const double beta1 = -0.5 * l[7] * A + 3.0 * l[7] * B;
        const double rho = A * (l[4] - l[5] / 7.0 - 8.0 / 7.0 * l[8]) - 2.0 * l[1] * B + G[6] +
                           3.0 * L[8] + L[7] / 7.0 + 3.0 * G[9] / 7.0;
        f.poly0 = Polynomial{alpha0, 4.0 * alpha1};
        f.poly1 = Polynomial{beta0, 4.0 * beta1};
        f.poly2 = Polynomial{rho};
        return f;
    }
    const double alpha2 = -4.0 / 7.0 * l[5] * A + 4.0 / 7.0 * (L[7] + 3.0 * G[9]) - 8.0 / 7.0 * l[8] * B;
    const double alpha0 = -l[0] * A + L[1] + G[2] - g[0] * K;
    const double alpha1 = -l[0] * A + L[1] + G[2] + alpha2 + g[4] / 3.0 * K +
                          8.0 / 15.0 * K * (g[5] + l[3] / 2.0);
    const double s = 2.0 * l[4] * l[3] + l[3] * g[3] / 2.0 + 2.0 * l[4] * g[5] + 2.0 * l[1] * l[6] +
                     2.0 * l[1] * g[7] - G[6] - 3.0 * L[8] - L[7] / 7.0 - 3.0 * G[9] / 7.0 +
                     l[5] / 7.0 * A + 16.0 / 7.0 * l[8] * B;
    const double beta0 = -(s - 5.0 * K * (g[4] / 3.0 + g[0]) + 17.0 / 15.0 * K * (g[5] + l[3] / 2.0));
    const double beta1 = -(s - 1.0 / 5.0 * K * (g[5] + l[3] / 2.0));
    f.prefactor = Prefactor::InverseFourHPlusOne;
    f.poly0 = Polynomial{alpha0, 4.0 * alpha1, alpha2};
    f.poly2 = Polynomial{beta0, 4.0 * beta1};
    return f;
}

}  // namespace

MelnikovForm m2_form(const PerturbationParams& p, Annulus a, M2Source source) {
    require_m1_zero(p, a);
    return source == M2Source::Printed ? m2_printed(p, a) : m2_corrected(p, a);
}

namespace {

cplx bracket(const MelnikovForm& form, cplx h, const PeriodVector& pv) {
    return form.poly0(h) * pv.I0 + form.poly1(h) * pv.I1 + form.poly2(h) * pv.I2;
}

}  // namespace

cplx m_eval(const MelnikovForm& form, cplx h, const PeriodVector& pv) {
    if (pv.annulus != form.annulus && !(is_interior(pv.annulus) && is_interior(form.annulus)))
        throw DomainError("period data belong to a different annulus than the form");
    PeriodVector v = pv;
    if (pv.annulus != form.annulus) v.I1 = -pv.I1;
    const cplx b = bracket(form, h, v);
    if (form.prefactor == Prefactor::One) return b;
    const cplx q = 4.0 * h + 1.0;
    if (std::abs(q) < 1e-14) {
        const double scale = m_eval_scale(form, h, v);
        const bool removable = std::abs(b) <= 1e-12 * std::max(1.0, scale);
        throw PoleError("exterior second-order form evaluated at h = -1/4", b, removable);
    }
    return b / q;
}

double m_eval_scale(const MelnikovForm& form, cplx h, const PeriodVector& pv) {
    double s = std::abs(form.poly0(h) * pv.I0) + std::abs(form.poly1(h) * pv.I1) +
               std::abs(form.poly2(h) * pv.I2);
    if (form.prefactor == Prefactor::InverseFourHPlusOne) {
        const double q = std::abs(4.0 * h + 1.0);
        if (q > 0.0) s /= q;
    }
    return s;
}

IlievIngredients iliev_ingredients(const PerturbationParams& p) {
    IlievIngredients r;
    const Poly2 f = field_polynomial(p.lambda1);
    const Poly2 g = field_polynomial(p.gamma1);
    r.F = f.integral_v() - g.at_v_zero().integral_u();
    r.G = g + r.F.d_u();
    r.G1 = r.G.odd_v();
    r.G2 = r.G.even_v();
    r.p1 = r.G1.odd_to_square();
    r.p2 = r.G2.even_to_square();
    Poly2 level;  // 2h + x^2 - x^4/2 in (x, h)
    level.add(0, 1, 2.0);
    level.add(2, 0, 1.0);
    level.add(4, 0, -0.5);
    r.P2 = r.p2.compose_v(level).integral_u();
    r.P2h = r.P2.d_v();
    r.G1y = r.G1.d_v();
    r.divergence = f.d_u() + g.d_v();
    return r;
}

namespace {

Poly2 slope_factor() {
    Poly2 s;
    s.add(1, 0, 1.0);
    s.add(3, 0, -1.0);
    return s;
}

}  // namespace

double m2_iliev_quadrature(const PerturbationParams& p, double h, Annulus a,
                           const QuadratureSpec& spec) {
    require_m1_zero(p, a);
    const OvalGeometry geo = branch_points(h, a);
    const IlievIngredients in = iliev_ingredients(p);
    const Poly2 P2 = in.P2.at_v(h);
    const Poly2 P2h = in.P2h.at_v(h);
    const Poly2 f2 = field_polynomial(p.lambda2);
    const Poly2 g2 = field_polynomial(p.gamma2);

    const Poly2 smooth_part = in.G1 * P2h * -1.0 + g2;
    const Poly2 over_y_part = in.G1y * P2 - in.F * in.divergence - f2 * slope_factor();
    return oval_integral(smooth_part, over_y_part, geo, spec);
}

double m1_quadrature(const PerturbationParams& p, double h, Annulus a, const QuadratureSpec& spec) {
    const OvalGeometry geo = branch_points(h, a);
    const Poly2 f = field_polynomial(p.lambda1);
    const Poly2 g = field_polynomial(p.gamma1);
    return oval_integral(g, f * slope_factor() * -1.0, geo, spec);
}

DeviationReport m2_deviations(const PerturbationParams& p, Annulus a, const std::vector<double>& levels,
                              double tol) {
    DeviationReport rep;
    rep.annulus = a;
    const MelnikovForm printed = m2_form(p, a, M2Source::Printed);
    const MelnikovForm corrected = m2_form(p, a, M2Source::Corrected);
    const std::pair<const char*, const Polynomial MelnikovForm::*> slots[] = {
        {"poly0", &MelnikovForm::poly0}, {"poly1", &MelnikovForm::poly1}, {"poly2", &MelnikovForm::poly2}};
    for (const auto& [name, member] : slots) {
        const Polynomial& pp = printed.*member;
        const Polynomial& cp = corrected.*member;
        const std::size_t n = std::max(pp.c.size(), cp.c.size());
        for (std::size_t i = 0; i < n; ++i) {
            const double x = pp.coeff(i), y = cp.coeff(i);
            if (std::abs(x - y) > 1e-14 * std::max({1.0, std::abs(x), std::abs(y)}))
                rep.coefficients.push_back({std::string(name) + "[" + std::to_string(i) + "]", x, y});
        }
    }
    for (double h : levels) {
        const PeriodVector pv = period_vector(h, a);
        ValueDeviation v{};
        v.h = h;
        v.printed = std::real(m_eval(printed, h, pv));
        v.corrected = std::real(m_eval(corrected, h, pv));
        v.oracle = m2_iliev_quadrature(p, h, a);
        const double scale_p = std::max(m_eval_scale(printed, h, pv), std::abs(v.oracle));
        const double scale_c = std::max(m_eval_scale(corrected, h, pv), std::abs(v.oracle));
        v.printed_rel_err = scale_p > 0.0 ? std::abs(v.printed - v.oracle) / scale_p : 0.0;
        v.corrected_rel_err = scale_c > 0.0 ? std::abs(v.corrected - v.oracle) / scale_c : 0.0;
        rep.printed_consistent = rep.printed_consistent && v.printed_rel_err <= tol;
        rep.corrected_consistent = rep.corrected_consistent && v.corrected_rel_err <= tol;
        rep.values.push_back(v);
    }
    return rep;
}

std::string to_json(const DeviationReport& r) {
    json j;
    j["annulus"] = std::string(to_string(r.annulus));
    j["printed_consistent"] = r.printed_consistent;
    j["corrected_consistent"] = r.corrected_consistent;
    j["coefficients"] = json::array();
    for (const auto& c : r.coefficients)
        j["coefficients"].push_back({{"slot", c.slot}, {"printed", c.printed}, {"corrected", c.corrected}});
    j["values"] = json::array();
    for (const auto& v : r.values)
        j["values"].push_back({{"h", v.h},
                               {"printed", v.printed},
                               {"corrected", v.corrected},
                               {"oracle", v.oracle},
                               {"printed_rel_err", v.printed_rel_err},
                               {"corrected_rel_err", v.corrected_rel_err}});
    return j.dump();
}

namespace {

const char* const kParamKeys[] = {"lambda1", "gamma1", "lambda2", "gamma2"};

std::array<double, 10>& slot(PerturbationParams& p, int k) {
    switch (k) {
        case 0: return p.lambda1;
        case 1: return p.gamma1;
        case 2: return p.lambda2;
        default: return p.gamma2;
    }
}

}  // namespace

PerturbationParams parse_params_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("params: malformed document: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("params: top level must be an object");
    const std::set<std::string> known(std::begin(kParamKeys), std::end(kParamKeys));
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw std::invalid_argument("params: unknown key '" + key + "'");
    PerturbationParams p;
    for (int k = 0; k < 4; ++k) {
        const char* key = kParamKeys[k];
        if (!j.contains(key)) continue;
        const json& arr = j.at(key);
        if (!arr.is_array() || arr.size() != 10)
            throw std::invalid_argument(std::string("params: '") + key + "' must be an array of 10 reals");
        for (int i = 0; i < 10; ++i) {
            if (!arr[i].is_number())
                throw std::invalid_argument(std::string("params: '") + key + "' entry " +
                                            std::to_string(i) + " is not a number");
            const double v = arr[i].get<double>();
            if (!std::isfinite(v))
                throw std::invalid_argument(std::string("params: '") + key + "' entry is not finite");
            slot(p, k)[i] = v;
        }
    }
    return p;
}

PerturbationParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("params: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_params_json(ss.str());
}

std::string params_to_json(const PerturbationParams& p) {
    json j;
    PerturbationParams copy = p;
    for (int k = 0; k < 4; ++k) j[kParamKeys[k]] = slot(copy, k);
    return j.dump();
}

PerturbationParams random_params(std::mt19937_64& rng, bool constrained, Annulus a) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    PerturbationParams p;
    for (int k = 0; k < 4; ++k)
        for (double& v : slot(p, k)) v = u(rng);
    return constrained ? enforce_m1_zero(p, a) : p;
}

}  // namespace duffmel
