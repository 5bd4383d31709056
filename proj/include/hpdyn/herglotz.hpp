#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "errors.hpp"
#include "geometry.hpp"
#include "measure.hpp"

namespace hpdyn {

inline constexpr double evaluation_tolerance = 1e-10;

// f(z) = alpha z + beta + int (1 + t z)/(t - z) d mu(t)
class HerglotzTriplet {
public:
    HerglotzTriplet(double alpha, double beta, FiniteMeasure mu, bool check = true)
        : alpha_(alpha), beta_(beta), mu_(std::move(mu)) {
        if (!(std::isfinite(alpha) && alpha >= 0)) throw DomainError("alpha must be finite and >= 0");
        if (!std::isfinite(beta)) throw DomainError("beta must be finite");
        if (check) check_representation();
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    const FiniteMeasure& mu() const { return mu_; }
    bool is_parabolic() const { return alpha_ == 1.0; }
    bool is_hyperbolic() const { return alpha_ > 1.0; }

private:
    void check_representation() const;

    double alpha_;
    double beta_;
    FiniteMeasure mu_;
};

namespace detail {

// Integral of (1 + t z)/(t - z) d mu divided by R = 2^k, where u = z/R.
// With q = t/R the kernel is (R^-2 + q u)/(q - u). Real and imaginary parts
// are formed separately so that the (positive) imaginary part never cancels.
inline cplx herglotz_integral_scaled(const FiniteMeasure& mu, cplx u, int k, double rel_tol) {
    if (mu.empty()) return {0.0, 0.0};
    const double A = std::ldexp(1.0, -2 * k);
    const double ur = u.real(), ui = u.imag();
    const double u2 = ur * ur + ui * ui;
    auto kernel = [=](const Abscissa& x) -> cplx {
        // Near the peak t = Re z (1 + rel); then q - u_r and q u_r - |u|^2
        // are formed from rel without cancellation.
        const bool anc = x.anchored();
        const double q = anc ? ur * (1.0 + x.rel) : x.scaled(k);
        if (std::abs(q) <= 1.0) {
            const double qu = anc ? ur * ur * x.rel - ui * ui : q * ur - u2;
            const double dr = anc ? ur * x.rel : q - ur;
            const double den = dr * dr + ui * ui;
            return {(A * dr + q * qu) / den, ui * (A + q * q) / den};
        }
        const double w = 1.0 / q;
        const double dr = anc ? x.rel / (1.0 + x.rel) : 1.0 - ur * w;
        const double di = ui * w;
        const double den = dr * dr + di * di;
        const double re = anc ? (A * dr + ur * ur * x.rel - ui * ui) * w : A * w * dr + ur - u2 * w;
        return {re / den, ui * (A * w * w + 1.0) / den};
    };
    Frame fr;
    fr.scale_exp = k;
    fr.opt.rel_tol = rel_tol;
    // The real part only moves the orbit sideways; it is resolved relative
    // to |J|. The imaginary part feeds the rate accumulators and keeps its
    // own relative tolerance.
    fr.opt.cross_ratio = {1.0, 0.0};
    const double base = k * ln2;
    const int sx = ur >= 0 ? 1 : -1;
    const double ax = std::abs(ur);
    fr.add_log_abs_both(base + std::log(std::abs(u)));
    if (ax > 0) {
        fr.add_log_abs(base + std::log(ax), sx);
        fr.add_log_abs(base + std::log(ax + ui), sx);
        if (ax > ui) fr.add_log_abs(base + std::log(ax - ui), sx);
        if (ax > 4 * ui) {
            fr.add_log_abs(base + std::log(ax + 0.25 * ui), sx);
            fr.add_log_abs(base + std::log(ax - 0.25 * ui), sx);
        }
        if (ui < 0.05 * ax) fr.window = PeakWindow{base + std::log(ax), sx, std::min(0.5, 200.0 * ui / ax), ui / ax};
    }
    return mu.integrate<cplx>(kernel, fr);
}

inline int clamp_scale(int k) { return std::clamp(k, -200, 1 << 28); }

} // namespace detail

// One application of f to a possibly huge point. The log increment is
// log(Im f(z) / (alpha Im z)) = log1p((1/alpha) int (1+t^2)/|t-z|^2 d mu),
// accumulated without forming alpha^n.
struct StepResult {
    ScaledPoint next;
    double log_y_increment;
    // f(z) - z divided by 2^k, and Im z / 2^k, for scale free step data
    cplx delta;
    double im_before;
};

inline StepResult step(const HerglotzTriplet& f, const ScaledPoint& z, double rel_tol = evaluation_tolerance) {
    const int k = detail::clamp_scale(z.scale_exponent());
    const cplx u{std::ldexp(z.m.real(), z.e - k), std::ldexp(z.m.imag(), z.e - k)};
    const cplx J = detail::herglotz_integral_scaled(f.mu(), u, k, rel_tol);
    const double b = std::ldexp(f.beta(), -k);
    const cplx w = f.alpha() * u + b + J;
    if (!(w.imag() > 0) || !std::isfinite(w.real()))
        throw QuadratureFailure("evaluation left the upper half-plane (imaginary part " + std::to_string(w.imag()) + ")");
    StepResult r;
    r.next = ScaledPoint(w, k);
    r.log_y_increment = f.alpha() > 0 ? std::log1p(J.imag() / (f.alpha() * u.imag())) : std::log(w.imag() / u.imag());
    r.delta = (f.alpha() - 1.0) * u + b + J;
    r.im_before = u.imag();
    return r;
}

// d_H(z, f(z)) from the step data; exact in the increment, so small steps
// between huge points keep their relative accuracy.
inline double step_distance(const StepResult& s) {
    const double diff = std::abs(s.delta);
    if (diff == 0.0) return 0.0;
    const double y0 = s.im_before;
    const double y1 = y0 + s.delta.imag();
    const double rho = diff / std::hypot(s.delta.real(), y0 + y1);
    const double logX = 2.0 * std::log(diff) - std::log(4.0) - std::log(y0) - std::log(y1);
    return std::log1p(rho) + 0.5 * detail::log1p_exp(logX);
}

inline UpperHalfPoint evaluate(const HerglotzTriplet& f, const UpperHalfPoint& z, double rel_tol = evaluation_tolerance) {
    return step(f, ScaledPoint(z), rel_tol).next.point();
}

// int (1+t^2)/(t^2+y^2) d mu
inline double excess_kernel_integral(const HerglotzTriplet& f, double y, double rel_tol = evaluation_tolerance) {
    if (!(y > 0)) throw DomainError("excess: y must be positive");
    if (f.mu().empty()) return 0.0;
    const int k = detail::clamp_scale(std::ilogb(y));
    const double s = std::ldexp(y, -k);
    const double A = std::ldexp(1.0, -2 * k);
    auto kernel = [=](const Abscissa& x) {
        const double q = x.scaled(k);
        if (std::abs(q) <= 1.0) return (A + q * q) / (q * q + s * s);
        const double w = 1.0 / q;
        return (A * w * w + 1.0) / (1.0 + s * s * w * w);
    };
    Frame fr;
    fr.scale_exp = k;
    fr.opt.rel_tol = rel_tol;
    fr.add_log_abs_both(std::log(y));
    return f.mu().integrate<double>(kernel, fr);
}

// Im f(iy) - alpha y
inline double imag_excess(const HerglotzTriplet& f, double y, double rel_tol = evaluation_tolerance) {
    return y * excess_kernel_integral(f, y, rel_tol);
}

inline void HerglotzTriplet::check_representation() const {
    if (mu_.empty()) return;
    const cplx J = detail::herglotz_integral_scaled(mu_, {0.0, 1.0}, 0, evaluation_tolerance);
    if (!(std::abs(J.real()) <= 1e-9 * std::max(1.0, total_mass(mu_))))
        throw QuadratureFailure("representation check Re f(i) = beta failed");
}

enum class MapClass { NotDenjoyWolffInfinity, Hyperbolic, ParabolicCandidate };

inline const char* class_name(MapClass c) {
    switch (c) {
    case MapClass::NotDenjoyWolffInfinity: return "not_dw_infinity";
    case MapClass::Hyperbolic: return "hyperbolic";
    case MapClass::ParabolicCandidate: return "parabolic";
    }
    return "?";
}

inline MapClass classify(const HerglotzTriplet& f) {
    if (f.alpha() < 1.0) return MapClass::NotDenjoyWolffInfinity;
    if (f.alpha() == 1.0) return MapClass::ParabolicCandidate;
    return MapClass::Hyperbolic;
}

} // namespace hpdyn
