#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "herglotz.hpp"
#include "limits.hpp"

namespace hpdyn {

inline constexpr std::size_t hyperbolic_budget = 1000;
inline constexpr std::size_t parabolic_budget = 100000;

// z_0, ..., z_N with accumulators. Points are kept as mantissa/exponent
// pairs since hyperbolic orbits leave the double range after ~1000 steps.
struct Orbit {
    double alpha = 1.0;
    std::vector<ScaledPoint> points;
    std::vector<double> log_y_ratio;     // log(y_k / (alpha^k y_0)), [0] = 0
    std::vector<double> step_distances;  // d_H(z_k, z_{k+1})
    std::vector<double> drift;           // (x_{k+1} - x_k) / y_k

    std::size_t steps() const { return points.empty() ? 0 : points.size() - 1; }
    const ScaledPoint& operator[](std::size_t k) const { return points[k]; }
    // log y_k, from the accumulator
    double log_y(std::size_t k) const {
        return points.front().log_im() + static_cast<double>(k) * std::log(alpha) + log_y_ratio[k];
    }
};

inline void require_dw_infinity(const HerglotzTriplet& f) {
    if (!(f.alpha() >= 1.0))
        throw ClassificationError("alpha < 1: the Denjoy-Wolff point is not at infinity");
}

// Orbit state without history, for very long runs.
struct OrbitCursor {
    ScaledPoint z;
    double log_y_ratio = 0.0;
    std::size_t n = 0;
    StepResult last{};
};

inline void advance(const HerglotzTriplet& f, OrbitCursor& c, std::size_t steps, double rel_tol = evaluation_tolerance) {
    for (std::size_t i = 0; i < steps; ++i) {
        c.last = step(f, c.z, rel_tol);
        c.z = c.last.next;
        c.log_y_ratio += c.last.log_y_increment;
        ++c.n;
    }
}

inline Orbit iterate(const HerglotzTriplet& f, const UpperHalfPoint& z0, std::size_t n,
                     double rel_tol = evaluation_tolerance) {
    require_dw_infinity(f);
    if (n < 1) throw DomainError("iterate: need at least one step");
    Orbit o;
    o.alpha = f.alpha();
    o.points.reserve(n + 1);
    o.log_y_ratio.reserve(n + 1);
    o.step_distances.reserve(n);
    o.drift.reserve(n);
    o.points.emplace_back(z0);
    o.log_y_ratio.push_back(0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const StepResult s = step(f, o.points.back(), rel_tol);
        o.points.push_back(s.next);
        o.log_y_ratio.push_back(o.log_y_ratio.back() + s.log_y_increment);
        o.step_distances.push_back(step_distance(s));
        o.drift.push_back(s.delta.real() / s.im_before);
    }
    return o;
}

// --- hyperbolic step -------------------------------------------------------

struct StepVerdict {
    bool positive = false;
    double limit = 0.0;          // tail value of the step distances
    std::size_t monotone_violations = 0;
    LimitVerdict log_distance;   // detector on log d_k
};

inline constexpr double step_threshold = 1e-6;

inline StepVerdict hyperbolic_step(const Orbit& o) {
    if (o.alpha != 1.0) throw ClassificationError("hyperbolic step: map is not parabolic");
    const auto& d = o.step_distances;
    if (d.size() < 32) throw Undetermined("hyperbolic step: orbit too short");
    StepVerdict v;
    // Schwarz-Pick: the distances never increase.
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] > d[k - 1] * (1.0 + 1e-12) + 1e-12) ++v.monotone_violations;
    if (v.monotone_violations > 0)
        throw ContradictionError("hyperbolic step: step distances increase along the orbit");

    const std::size_t N = d.size() - 1;
    const double tail = d[N];
    if (tail == 0.0) return v;  // the orbit stopped moving at double precision; f = id is excluded
    std::vector<double> logs(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) logs[k] = std::log(d[k]);
    v.log_distance = detect_limit(logs);
    v.limit = tail;

    const double back = d[N - N / 10];
    const bool stable = (back - tail) <= 1e-4 * tail;
    if (tail > step_threshold && stable) {
        v.positive = true;
        return v;
    }
    if (v.log_distance.diverging() && v.log_distance.direction < 0) return v;  // decays to 0
    if (tail < step_threshold && d[N] <= d[N / 2]) return v;
    throw Undetermined("hyperbolic step: step distances neither stabilized nor decayed");
}

struct DriftResult {
    double b = 0.0;
    LimitVerdict verdict;
};

inline constexpr double drift_zero = 1e-8;

// b = lim (x_{n+1} - x_n) / y_n, cross-checked against the step verdict.
inline DriftResult drift_coefficient(const Orbit& o) {
    if (o.alpha != 1.0) throw ClassificationError("drift coefficient: map is not parabolic");
    DriftResult r;
    r.verdict = detect_limit(o.drift);
    if (!r.verdict.finite()) {
        // a drift that decays like a power of n has limit 0
        std::vector<double> logs;
        logs.reserve(o.drift.size());
        for (double x : o.drift) logs.push_back(x == 0.0 ? -745.0 : std::log(std::abs(x)));
        const auto lv = detect_limit(logs);
        if (!(lv.diverging() && lv.direction < 0)) throw Undetermined("drift coefficient: no limit detected");
        r.b = 0.0;
    } else {
        r.b = r.verdict.value;
    }
    try {
        const auto st = hyperbolic_step(o);
        const bool zero_b = std::abs(r.b) < drift_zero;
        if (zero_b == st.positive)
            throw ContradictionError("drift coefficient and hyperbolic step disagree (b = " + std::to_string(r.b) + ")");
    } catch (const Undetermined&) {
    }
    return r;
}

// --- shift -----------------------------------------------------------------

struct ShiftVerdict {
    bool finite = false;
    double I = 0.0;  // lim Im f^n(z_0) when finite
    LimitVerdict verdict;
};

inline std::vector<double> imaginary_parts(const Orbit& o) {
    std::vector<double> y;
    y.reserve(o.points.size());
    for (const auto& p : o.points) y.push_back(std::exp(p.log_im()));
    return y;
}

inline ShiftVerdict shift_classification(const Orbit& o) {
    if (o.steps() < 32) throw Undetermined("shift: orbit too short");
    ShiftVerdict v;
    const std::size_t N = o.steps();
    const double ly0 = o.points.front().log_im();
    const double lyN = o.points.back().log_im();
    if (o.alpha > 1.0 || lyN - ly0 > std::log(1e3)) return v;
    const auto y = imaginary_parts(o);
    v.verdict = detect_limit(y);
    const double inc = std::expm1(o.log_y_ratio[N] - o.log_y_ratio[N - 1]);
    if (v.verdict.finite() && inc < 1e-9) {
        v.finite = true;
        v.I = std::max(v.verdict.value, y[N]);
        return v;
    }
    if (v.verdict.diverging() && v.verdict.direction > 0) return v;
    throw Undetermined("shift: imaginary parts neither settled nor escaping");
}

// --- rate limits -----------------------------------------------------------

struct ComplexLimit {
    LimitTag tag = LimitTag::Undetermined;
    cplx value{};
    LimitVerdict log_y_ratio;  // detector on log(y_n / alpha^n y_0)
    LimitVerdict slope;        // detector on x_n / y_n
};

inline std::vector<double> slopes(const Orbit& o) {
    std::vector<double> s;
    s.reserve(o.points.size());
    for (const auto& p : o.points) s.push_back(p.slope());
    return s;
}

// L(z) = lim f^n(z)/alpha^n = lim (y_n/alpha^n)(x_n/y_n + i)
inline ComplexLimit hyperbolic_rate_limit(const Orbit& o) {
    if (!(o.alpha > 1.0)) throw ClassificationError("hyperbolic rate limit: map is not hyperbolic");
    ComplexLimit L;
    L.log_y_ratio = detect_limit(o.log_y_ratio);
    L.slope = detect_limit(slopes(o));
    if (L.log_y_ratio.diverging() && L.log_y_ratio.direction > 0) {
        L.tag = LimitTag::Diverging;
        return L;
    }
    if (L.log_y_ratio.finite() && L.slope.finite()) {
        L.tag = LimitTag::Finite;
        const double y0 = std::exp(o.points.front().log_im());
        L.value = std::exp(L.log_y_ratio.value) * y0 * cplx(L.slope.value, 1.0);
    }
    return L;
}

// lim f^n(z)/n, real. The sequence is x_n/n for n >= 1.
inline LimitVerdict parabolic_rate_limit(const Orbit& o) {
    if (o.alpha != 1.0) throw ClassificationError("parabolic rate limit: map is not parabolic");
    std::vector<double> s;
    s.reserve(o.steps());
    for (std::size_t n = 1; n <= o.steps(); ++n) s.push_back(o.points[n].value().real() / static_cast<double>(n));
    return detect_limit(s);
}

// The same limit from two base points; they must agree to 1e-6 relative.
inline LimitVerdict parabolic_rate_limit(const HerglotzTriplet& f, const UpperHalfPoint& z0,
                                         const UpperHalfPoint& z1, std::size_t n) {
    const auto a = parabolic_rate_limit(iterate(f, z0, n));
    const auto b = parabolic_rate_limit(iterate(f, z1, n));
    if (a.finite() && b.finite() && std::abs(a.value - b.value) > 1e-6 * std::abs(a.value))
        throw ContradictionError("parabolic rate limit depends on the base point");
    if (a.tag != b.tag) return {};
    return a;
}

// |f^n(z)| / (n sqrt(Im f^n(z))), n >= 1
inline std::vector<double> infinite_shift_diagnostic(const Orbit& o) {
    std::vector<double> s;
    s.reserve(o.steps());
    for (std::size_t n = 1; n <= o.steps(); ++n) {
        const auto& p = o.points[n];
        s.push_back(std::exp(p.log_abs() - std::log(static_cast<double>(n)) - 0.5 * p.log_im()));
    }
    return s;
}

// --- angle -----------------------------------------------------------------

struct AngleResult {
    LimitTag tag = LimitTag::Undetermined;
    bool tangential = false;
    double theta = 0.0;
    LimitVerdict verdict;
};

inline AngleResult orbit_angle(const Orbit& o) {
    std::vector<double> a;
    a.reserve(o.points.size());
    for (const auto& p : o.points) a.push_back(p.arg());
    AngleResult r;
    r.verdict = detect_limit(a);
    if (!r.verdict.finite()) return r;
    r.tag = LimitTag::Finite;
    r.theta = std::clamp(r.verdict.value, 0.0, std::numbers::pi);
    r.tangential = r.theta < 1e-4 || r.theta > std::numbers::pi - 1e-4;
    return r;
}

} // namespace hpdyn
