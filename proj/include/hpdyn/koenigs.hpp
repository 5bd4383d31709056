#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "herglotz.hpp"
#include "limits.hpp"
#include "orbit.hpp"

namespace hpdyn {

enum class KoenigsKind { Valiron, PommerenkeNormalized };

// h_n for a hyperbolic map: f^n(z)/|f^n(i)|.
// h_n for a parabolic map of positive step: (f^n(z) - x_n)/(b y_n), with
// x_n + i y_n = f^n(z_0).
class KoenigsApprox {
public:
    static KoenigsApprox valiron(const HerglotzTriplet& f, std::size_t depth, double rel_tol = evaluation_tolerance) {
        if (!f.is_hyperbolic()) throw ClassificationError("Valiron construction needs a hyperbolic map");
        KoenigsApprox h(f, KoenigsKind::Valiron, depth, rel_tol);
        OrbitCursor c{ScaledPoint(cplx(0.0, 1.0), 0)};
        advance(f, c, depth, rel_tol);
        h.anchor_ = c.z;
        return h;
    }

    static KoenigsApprox pommerenke(const HerglotzTriplet& f, const UpperHalfPoint& z0, std::size_t depth,
                                    double rel_tol = evaluation_tolerance) {
        if (!f.is_parabolic()) throw ClassificationError("Pommerenke construction needs a parabolic map");
        KoenigsApprox h(f, KoenigsKind::PommerenkeNormalized, depth, rel_tol);
        const Orbit o = iterate(f, z0, depth, rel_tol);
        DriftResult d;
        try {
            d = drift_coefficient(o);
        } catch (const Undetermined&) {
            throw DriftZero("Pommerenke construction: drift coefficient not determined");
        }
        if (std::abs(d.b) < drift_zero) throw DriftZero("Pommerenke construction: zero hyperbolic step (b = 0)");
        h.b_ = d.b;
        h.anchor_ = o.points.back();
        return h;
    }

    KoenigsKind kind() const { return kind_; }
    std::size_t depth() const { return depth_; }
    double alpha() const { return f_.alpha(); }
    double drift() const { return b_; }
    const HerglotzTriplet& map() const { return f_; }

    // h_n at a possibly huge point, returned in scaled form.
    ScaledPoint eval_scaled(const ScaledPoint& z) const {
        OrbitCursor c{z};
        advance(f_, c, depth_, rel_tol_);
        return normalize(c.z);
    }

    cplx operator()(const cplx& z) const { return eval_scaled(ScaledPoint(UpperHalfPoint(z))).value(); }

    // h_n(f^k(w)) from the continuation of an orbit: f^{n+k}(w) is `later`.
    ScaledPoint from_iterate(const ScaledPoint& later) const { return normalize(later); }

private:
    KoenigsApprox(const HerglotzTriplet& f, KoenigsKind k, std::size_t depth, double rel_tol)
        : f_(f), kind_(k), depth_(depth), rel_tol_(rel_tol) {
        if (depth < 1) throw DomainError("Koenigs depth must be positive");
    }

    ScaledPoint normalize(const ScaledPoint& p) const {
        if (kind_ == KoenigsKind::Valiron) {
            // divide by |anchor| = |m_a| 2^{e_a}
            const double ma = std::abs(anchor_.m);
            return ScaledPoint(p.m / ma, p.e - anchor_.e);
        }
        const cplx a = anchor_.value();
        const cplx w = p.value();
        return ScaledPoint((w - a.real()) / (b_ * a.imag()), 0);
    }

    HerglotzTriplet f_;
    KoenigsKind kind_;
    std::size_t depth_;
    double rel_tol_;
    ScaledPoint anchor_{};
    double b_ = 0.0;
};

// max over the grid of |h(f(z)) - alpha h(z)| or |h(f(z)) - h(z) - 1|
inline double abel_residual(const KoenigsApprox& h, const std::vector<cplx>& grid) {
    double worst = 0.0;
    for (const cplx& z : grid) {
        const UpperHalfPoint p(z);
        const ScaledPoint fz = step(h.map(), ScaledPoint(p)).next;
        const cplx a = h.eval_scaled(fz).value();
        const cplx b = h(z);
        const double r = h.kind() == KoenigsKind::Valiron ? std::abs(a - h.alpha() * b) : std::abs(a - b - 1.0);
        worst = std::max(worst, r);
    }
    return worst;
}

// Points x + iy with x in [-1, 1], y in [0.5, 2].
inline std::vector<cplx> unit_grid(int nx = 5, int ny = 5) {
    std::vector<cplx> g;
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            g.emplace_back(-1.0 + 2.0 * i / std::max(1, nx - 1), 0.5 + 1.5 * j / std::max(1, ny - 1));
    return g;
}

// --- conformality at infinity ---------------------------------------------

enum class Conformality { Conformal, NotConformal, Undetermined };

inline const char* conformality_name(Conformality c) {
    switch (c) {
    case Conformality::Conformal: return "conformal";
    case Conformality::NotConformal: return "not_conformal";
    case Conformality::Undetermined: return "undetermined";
    }
    return "?";
}

inline constexpr double conformality_floor = 1e-6;

struct ConformalityReport {
    Conformality verdict = Conformality::Undetermined;
    cplx derivative{};                 // angular limit of h(w)/w when conformal
    std::vector<double> radii;         // 10^2 ... 10^6
    std::vector<cplx> axis_quotients;  // h(iy)/(iy)
    std::vector<double> cone_inf;      // min over the rays of Im h(z)/Im z at each radius
    Conformality axis_probe = Conformality::Undetermined;
    Conformality cone_probe = Conformality::Undetermined;
};

// Works for any evaluator h: H -> C given on scaled points.
template <class H>
ConformalityReport conformality_at_infinity(const H& h, int first_decade = 2, int last_decade = 6) {
    ConformalityReport r;
    const double rays[3] = {std::numbers::pi / 4, std::numbers::pi / 2, 3 * std::numbers::pi / 4};
    std::vector<double> log_mod, args, log_cone;
    for (int k = first_decade; k <= last_decade; ++k) {
        const double R = std::pow(10.0, k);
        r.radii.push_back(R);
        double inf = std::numeric_limits<double>::infinity();
        for (double phi : rays) {
            const cplx z = std::polar(R, phi);
            const cplx hz = h(z);
            inf = std::min(inf, hz.imag() / z.imag());
            if (phi == rays[1]) {
                const cplx q = hz / z;
                r.axis_quotients.push_back(q);
                log_mod.push_back(std::log(std::abs(q)));
                args.push_back(std::arg(q));
            }
        }
        r.cone_inf.push_back(inf);
        log_cone.push_back(inf > 0 ? std::log(inf) : -745.0);
    }

    // (i) h(iy)/(iy) settles to a nonzero value, or decays.
    const auto tm = decade_trend(log_mod);
    const auto ta = decade_trend(args);
    if (tm.trend == Trend::Converging && ta.trend == Trend::Converging)
        r.axis_probe = Conformality::Conformal;
    else if (tm.trend == Trend::Diverging && log_mod.back() < log_mod.front())
        r.axis_probe = Conformality::NotConformal;

    // (ii) inf Im h/Im z over the cone, against the floor and its decade trend.
    const auto tc = decade_trend(log_cone);
    if (r.cone_inf.back() < conformality_floor ||
        (tc.trend == Trend::Diverging && log_cone.back() < log_cone.front()))
        r.cone_probe = Conformality::NotConformal;
    else if (tc.trend == Trend::Converging && std::exp(tc.extrapolated) >= conformality_floor)
        r.cone_probe = Conformality::Conformal;

    if (r.axis_probe == r.cone_probe) r.verdict = r.axis_probe;
    if (r.verdict == Conformality::Conformal)
        r.derivative = std::polar(std::exp(tm.extrapolated), ta.extrapolated);
    return r;
}

inline ConformalityReport conformality_at_infinity(const KoenigsApprox& h) {
    return conformality_at_infinity([&](const cplx& z) { return h(z); });
}

// d_H(i, w) - d_H(i, h(w))
inline double distance_defect(const ScaledPoint& w, const ScaledPoint& hw) {
    if (!(hw.m.imag() > 0)) throw DomainError("distance defect: h(w) is not in the half-plane");
    return distance_from_i(w) - distance_from_i(hw);
}

inline double distance_defect(const KoenigsApprox& h, const UpperHalfPoint& w) {
    const ScaledPoint sw(w);
    return distance_defect(sw, h.eval_scaled(sw));
}

} // namespace hpdyn
