#include "duffmel/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/toms748_solve.hpp>
#include <nlohmann/json.hpp>

#include "duffmel/errors.hpp"

namespace duffmel {

using nlohmann::json;

namespace {

constexpr int kRefineDepth = 6;
constexpr double kRefineTrigger = 1e-2;
constexpr double kSuspectLevel = 1e-6;
constexpr double kMinNodeGap = 1e-9;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

class Scanner {
public:
    Scanner(const std::function<double(double)>& fn, RealZeros& out) : fn_(fn), out_(out) {}

    void scan(double lo, double hi, int n, int depth) {
        std::vector<double> xs(n + 1), fs(n + 1);
        for (int i = 0; i <= n; ++i) {
            xs[i] = i == n ? hi : lo + (hi - lo) * i / n;
            fs[i] = fn_(xs[i]);
            scale_ = std::max(scale_, std::abs(fs[i]));
        }
        for (int i = 0; i < n; ++i) {
            if (fs[i] == 0.0 && depth == 0 && i > 0) out_.roots.push_back({xs[i], 0.0});
            if (sign_of(fs[i]) * sign_of(fs[i + 1]) < 0) bracket(xs[i], xs[i + 1], fs[i], fs[i + 1]);
        }
        for (int i = 1; i < n; ++i) {
            const double m = std::abs(fs[i]);
            if (m == 0.0 || m >= std::abs(fs[i - 1]) || m >= std::abs(fs[i + 1])) continue;
            if (sign_of(fs[i - 1]) != sign_of(fs[i]) || sign_of(fs[i + 1]) != sign_of(fs[i])) continue;
            if (m > kRefineTrigger * scale_) continue;
            if (depth < kRefineDepth) {
                scan(xs[i - 1], xs[i + 1], 8, depth + 1);
            } else if (m <= kSuspectLevel * scale_) {
                out_.suspect.push_back(xs[i]);
            }
        }
    }

private:
    void bracket(double a, double b, double fa, double fb) {
        std::uintmax_t iters = 200;
        auto tol = [](double l, double r) { return r - l <= kRootWidth; };
        const auto r = boost::math::tools::toms748_solve(fn_, a, b, fa, fb, tol, iters);
        out_.roots.push_back({0.5 * (r.first + r.second), r.second - r.first});
    }

    const std::function<double(double)>& fn_;
    RealZeros& out_;
    double scale_ = 0.0;
};

}  // namespace

RealZeros real_zeros(const std::function<double(double)>& fn, double lo, double hi) {
    if (!(lo < hi)) throw DomainError("real_zeros needs a non-empty interval");
    RealZeros out;
    Scanner(fn, out).scan(lo, hi, kRealScanPoints, 0);
    std::sort(out.roots.begin(), out.roots.end(),
              [](const RealRoot& a, const RealRoot& b) { return a.location < b.location; });
    std::sort(out.suspect.begin(), out.suspect.end());
    return out;
}

bool identically_zero(const std::function<double(double)>& fn, double lo, double hi) {
    for (int k = 0; k < kDegenerateSamples; ++k) {
        const double h = lo + (hi - lo) * (k + 0.5) / kDegenerateSamples;
        if (!(std::abs(fn(h)) < kDegenerateLevel)) return false;
    }
    return true;
}

PeriodFunction counting_function(const MelnikovForm& form) {
    MelnikovForm bracket = form;
    bracket.prefactor = Prefactor::One;
    if (is_interior(form.annulus))
        return [bracket](const PeriodVector& pv) { return m_eval(bracket, pv.h, pv); };
    return [bracket](const PeriodVector& pv) { return m_eval(bracket, pv.h, pv) / pv.I0; };
}

Interval counting_interval(Annulus a, const Contour& c) {
    if (is_interior(a)) return {-0.25 + 1e-6, -c.rho};
    return {c.rho, c.R};
}

ContourTable::ContourTable(Annulus a, const Contour& c, int density)
    : annulus_(a), contour_(c) {
    if (!(c.R > 1.0)) throw DomainError("contour radius must exceed 1");
    if (!(c.eta > 0.0 && c.eta <= 1e-2 && c.rho > 0.0 && c.rho <= 1e-2))
        throw DomainError("contour offsets must lie in (0, 1e-2]");
    if (density < 1) throw DomainError("contour density must be positive");
    opts_.clearance = 0.5 * std::min(c.eta, c.rho);

    // Built for a cut along [0, inf) and rotated by pi for the exterior family.
    const double pi = std::numbers::pi;
    const double ts = std::asin(std::min(c.eta / c.rho, 1.0));
    const double tr = std::asin(c.eta / c.R);
    const double x0 = c.rho * std::cos(ts);
    const double xr = c.R * std::cos(tr);
    std::vector<double> breaks{x0};
    for (double x = c.rho; x < xr; x *= 2.0)
        if (x > x0 * (1.0 + 1e-12) + 1e-15) breaks.push_back(x);
    breaks.push_back(xr);

    std::vector<std::pair<PathPiece, Part>> z;
    std::vector<int> counts;
    z.push_back({Arc{0.0, c.rho, pi, ts}, Part::Puncture});
    counts.push_back(16);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        z.push_back({Segment{cplx(breaks[i], c.eta), cplx(breaks[i + 1], c.eta)}, Part::CutPlus});
        counts.push_back(8);
    }
    z.push_back({Arc{0.0, c.R, tr, 2.0 * pi - tr}, Part::Circle});
    counts.push_back(128);
    for (std::size_t i = breaks.size() - 1; i > 0; --i) {
        z.push_back({Segment{cplx(breaks[i], -c.eta), cplx(breaks[i - 1], -c.eta)}, Part::CutMinus});
        counts.push_back(8);
    }
    z.push_back({Arc{0.0, c.rho, -ts, -pi}, Part::Puncture});
    counts.push_back(16);

    const bool flip = a == Annulus::Exterior;
    for (auto& [piece, part] : z) {
        if (flip) {
            if (auto* s = std::get_if<Segment>(&piece)) {
                piece = Segment{-s->from, -s->to};
            } else {
                auto& arc = std::get<Arc>(piece);
                piece = Arc{-arc.center, arc.radius, arc.theta_from + pi, arc.theta_to + pi};
            }
        }
        pieces_.push_back(piece);
        parts_.push_back(part);
    }

    cache_.resize(pieces_.size());
    const cplx h0 = piece_point(pieces_.front(), 0.0);
    PeriodVector pv = continue_complex(h0, a, opts_);
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const int n = counts[k] * density;
        pv.h = piece_point(pieces_[k], 0.0);
        cache_[k].emplace(0.0, pv);
        for (int i = 1; i <= n; ++i) pv = at(k, static_cast<double>(i) / n);
    }
}

std::vector<double> ContourTable::nodes(std::size_t piece) const {
    std::vector<double> s;
    s.reserve(cache_[piece].size());
    for (const auto& kv : cache_[piece]) s.push_back(kv.first);
    return s;
}

const PeriodVector& ContourTable::at(std::size_t piece, double s) {
    auto& c = cache_[piece];
    auto it = c.lower_bound(s);
    if (it != c.end() && it->first == s) return it->second;
    if (it == c.begin()) throw PathError("contour node requested before the start of its piece");
    const auto& [sl, left] = *std::prev(it);
    const PeriodState v =
        transport_piece(pieces_[piece], sl, s, PeriodState{left.I0, left.I2}, opts_);
    PeriodVector pv;
    pv.h = piece_point(pieces_[piece], s);
    pv.annulus = annulus_;
    pv.I0 = v[0];
    pv.I2 = v[1];
    pv.I1 = i1_slope(annulus_) * (4.0 * pv.h + 1.0);
    return c.emplace_hint(it, s, pv)->second;
}

std::size_t ContourTable::size() const {
    std::size_t n = 0;
    for (const auto& c : cache_) n += c.size();
    return n;
}

double ContourTable::closure_error() {
    const PeriodVector& a = at(0, 0.0);
    const PeriodVector& b = at(pieces_.size() - 1, 1.0);
    return std::max(std::abs(a.I0 - b.I0) / std::abs(a.I0), std::abs(a.I2 - b.I2) / std::abs(a.I2));
}

WindingResult winding_count(const PeriodFunction& fn, ContourTable& table) {
    std::vector<std::vector<double>> nodes(table.piece_count());
    std::vector<std::vector<cplx>> values(table.piece_count());
    bool any_nonzero = false;
    for (std::size_t k = 0; k < table.piece_count(); ++k) {
        nodes[k] = table.nodes(k);
        for (double s : nodes[k]) {
            values[k].push_back(fn(table.at(k, s)));
            any_nonzero = any_nonzero || std::abs(values[k].back()) >= kDegenerateLevel;
        }
    }
    if (!any_nonzero) throw DegenerateError("counting function vanishes along the whole contour");
    WindingResult r;
    double total = 0.0;
    for (std::size_t k = 0; k < table.piece_count(); ++k) {
        std::vector<double>& s = nodes[k];
        std::vector<cplx>& f = values[k];
        double piece_total = 0.0;
        std::size_t i = 0;
        while (i + 1 < s.size()) {
            double step = std::numbers::pi;
            if (f[i] != 0.0 && f[i + 1] != 0.0) step = std::arg(f[i + 1] / f[i]);
            if (std::abs(step) > kTargetPhaseStep && s[i + 1] - s[i] > kMinNodeGap) {
                const double mid = 0.5 * (s[i] + s[i + 1]);
                s.insert(s.begin() + i + 1, mid);
                f.insert(f.begin() + i + 1, fn(table.at(k, mid)));
                continue;
            }
            r.max_step = std::max(r.max_step, std::abs(step));
            piece_total += step;
            ++i;
        }
        r.samples += s.size();
        const double turns = piece_total / (2.0 * std::numbers::pi);
        switch (table.part(k)) {
            case ContourTable::Part::Circle: r.circle_turns += turns; break;
            case ContourTable::Part::Puncture: r.puncture_turns += turns; break;
            default: r.cut_turns += turns; break;
        }
        total += piece_total;
    }
    r.turns = total / (2.0 * std::numbers::pi);
    r.winding = static_cast<int>(std::lround(r.turns));
    r.integral = std::abs(r.turns - r.winding) < kIntegralityTurns && r.max_step < kMaxPhaseStep;
    return r;
}

WindingResult winding_count(const MelnikovForm& form, const Contour& c) {
    if (form.is_zero()) throw DegenerateError("Melnikov form is identically zero");
    ContourTable table(form.annulus, c);
    return winding_count(counting_function(form), table);
}

double imaginary_part_on_cut(const PeriodFunction& fn, double h, Annulus a, double eta) {
    const CutValues cv = cut_values(h, a, eta);
    return ((fn(cv.plus) - fn(cv.minus)) / cplx(0.0, 2.0)).real();
}

double wronskian_constant(double h, double eta) {
    const CutValues cv = cut_values(h, Annulus::Exterior, eta);
    const cplx fp = cv.plus.I2 / cv.plus.I0;
    const cplx fm = cv.minus.I2 / cv.minus.I0;
    const double im = ((fp - fm) / cplx(0.0, 2.0)).real();
    const double mod2 = std::abs(cv.plus.I0) * std::abs(cv.minus.I0);
    return im * mod2 / (h * (4.0 * h + 1.0));
}

std::string_view to_string(CertificateStatus s) {
    switch (s) {
        case CertificateStatus::WithinBound: return "within-bound";
        case CertificateStatus::BoundViolated: return "bound-violated";
        case CertificateStatus::Inconclusive: return "inconclusive";
        case CertificateStatus::Degenerate: return "degenerate";
    }
    return "?";
}

int paper_bound(Annulus a, int order) {
    if (order != 1 && order != 2) throw DomainError("order must be 1 or 2");
    if (is_interior(a)) return order == 1 ? 3 : 4;
    return order == 1 ? 2 : 4;
}

CertificationContext::CertificationContext(Annulus a, const Contour& c, int density)
    : table_(a, c, density) {}

const PeriodVector& CertificationContext::real_period(double h) {
    auto it = real_.find(h);
    if (it != real_.end()) return it->second;
    return real_.emplace(h, period_vector(h, annulus())).first->second;
}

ZeroCertificate certify(const PerturbationParams& p, int order, CertificationContext& ctx) {
    const Annulus a = ctx.annulus();
    ZeroCertificate z;
    z.annulus = a;
    z.order = order;
    z.paper_bound = paper_bound(a, order);
    z.contour = ctx.table().contour();
    MelnikovForm form;
    if (order == 1) {
        form = m1_form(p, a);
    } else {
        require_m1_zero(p, a);
        form = m2_form(p, a);
    }
    const PeriodFunction fn = counting_function(form);
    const Interval iv = counting_interval(a, z.contour);
    auto real_fn = [&](double h) { return fn(ctx.real_period(h)).real(); };
    if (form.is_zero() || identically_zero(real_fn, iv.lo, iv.hi)) {
        z.status = CertificateStatus::Degenerate;
        z.note = "counting function vanishes identically";
        return z;
    }
    const RealZeros rz = real_zeros(real_fn, iv.lo, iv.hi);
    z.real_roots = rz.roots;
    z.suspect_roots = rz.suspect;
    try {
        z.winding = winding_count(fn, ctx.table());
    } catch (const DegenerateError& e) {
        z.status = CertificateStatus::Degenerate;
        z.note = e.what();
        return z;
    }
    z.winding_count = z.winding.winding;
    z.closure_error = ctx.table().closure_error();
    if (!z.winding.integral) {
        z.status = CertificateStatus::Inconclusive;
        z.note = "winding phase sum is not within 0.1 turns of an integer";
    } else if (z.winding_count > z.paper_bound) {
        z.status = CertificateStatus::BoundViolated;
    } else if (static_cast<int>(z.real_roots.size()) > z.winding_count) {
        z.status = CertificateStatus::Inconclusive;
        z.note = "more real roots than the winding count";
    } else {
        z.status = CertificateStatus::WithinBound;
    }
    return z;
}

ZeroCertificate certify(const PerturbationParams& p, int order, Annulus a, const Contour& c) {
    CertificationContext ctx(a, c);
    return certify(p, order, ctx);
}

std::string to_json(const ZeroCertificate& z) {
    json roots = json::array();
    for (const auto& r : z.real_roots) roots.push_back({{"location", r.location}, {"bracket", r.bracket}});
    json j;
    j["annulus"] = std::string(to_string(z.annulus));
    j["order"] = z.order;
    j["real_roots"] = roots;
    j["suspect_roots"] = z.suspect_roots;
    j["winding_count"] = z.winding_count;
    j["winding_turns"] = z.winding.turns;
    j["phase_turns"] = {{"circle", z.winding.circle_turns},
                        {"cut", z.winding.cut_turns},
                        {"puncture", z.winding.puncture_turns}};
    j["max_phase_step"] = z.winding.max_step;
    j["contour_samples"] = z.winding.samples;
    j["paper_bound"] = z.paper_bound;
    j["contour"] = {{"R", z.contour.R}, {"eta", z.contour.eta}, {"rho", z.contour.rho}};
    j["closure_error"] = z.closure_error;
    j["status"] = std::string(to_string(z.status));
    if (!z.note.empty()) j["note"] = z.note;
    TransportOptions t;
    j["tolerances"] = {{"transport_rel", t.rel_tol},
                       {"transport_abs", t.abs_tol},
                       {"root_width", kRootWidth},
                       {"integrality_turns", kIntegralityTurns},
                       {"phase_step", kMaxPhaseStep}};
    return j.dump();
}

}  // namespace duffmel
