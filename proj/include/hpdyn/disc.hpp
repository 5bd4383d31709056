#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "herglotz.hpp"
#include "limits.hpp"
#include "orbit.hpp"
#include "verdict.hpp"

namespace hpdyn {

// Disc-side quantities of w = f^n(S(z)), read off the half-plane point:
// g - tau = -2i tau/(w+i), 1 - |g|^2 = 4 Im w/|w+i|^2.
struct DiscIterate {
    double log_abs_w_plus_i = 0.0;
    double log_gap = 0.0;            // log |g - tau|
    double log_one_minus_sq = 0.0;   // log (1 - |g|^2)
    double modulus = 0.0;            // |g|, may round to 1
    double product = 0.0;            // |g - tau| |w|

    double log_one_minus_mod() const { return log_one_minus_sq - std::log1p(modulus); }
};

inline DiscIterate disc_iterate(const ScaledPoint& w) {
    DiscIterate d;
    const cplx shift{0.0, std::ldexp(1.0, -w.e)};  // i in the units of w
    const double a = std::abs(w.m + shift);
    d.log_abs_w_plus_i = std::log(a) + w.e * ln2;
    d.log_gap = ln2 - d.log_abs_w_plus_i;
    d.log_one_minus_sq = std::log(4.0) + w.log_im() - 2.0 * d.log_abs_w_plus_i;
    d.modulus = std::abs(w.m - shift) / a;
    d.product = 2.0 * std::abs(w.m) / a;
    return d;
}

class DiscMap {
public:
    // g = S^{-1} o f o S with S(z) = i(tau+z)/(tau-z); the identity
    // S(g(z)) = f(S(z)) is checked on a grid.
    static DiscMap conjugate(const HerglotzTriplet& f, cplx tau) {
        require_unimodular(tau);
        DiscMap g(f, tau);
        for (double r : {0.0, 0.3, 0.6, 0.9})
            for (int k = 0; k < 8; ++k) {
                const DiscPoint z(std::polar(r, k * std::numbers::pi / 4));
                const DiscPoint back = cayley_to_disc(cayley_to_halfplane(z, tau), tau);
                if (std::abs(back.z() - z.z()) > 1e-10)
                    throw ContradictionError("Cayley round trip failed");
                const UpperHalfPoint fw = evaluate(f, cayley_to_halfplane(z, tau));
                const cplx gz = g(z.z());
                const cplx again = cayley_to_halfplane(DiscPoint(gz), tau).z();
                if (std::abs(again - fw.z()) > 1e-10 * std::max(1.0, std::abs(fw.z())))
                    throw ContradictionError("conjugation identity S(g(z)) = f(S(z)) failed");
            }
        return g;
    }

    cplx tau() const { return tau_; }
    const HerglotzTriplet& map() const { return f_; }

    cplx operator()(const cplx& z) const {
        const UpperHalfPoint w = cayley_to_halfplane(DiscPoint(z), tau_);
        return cayley_to_disc(evaluate(f_, w), tau_).z();
    }

    UpperHalfPoint lift(const cplx& z) const { return cayley_to_halfplane(DiscPoint(z), tau_); }

    // g^n(z) through the half-plane orbit. Rounds to tau once the orbit is far out.
    cplx iterate(const cplx& z, std::size_t n) const {
        OrbitCursor c{ScaledPoint(lift(z))};
        advance(f_, c, n);
        const cplx q = c.z.m + cplx(0.0, std::ldexp(1.0, -c.z.e));
        const cplx gap = -2.0 * cplx(0.0, 1.0) * tau_ / q;
        return tau_ + cplx(std::ldexp(gap.real(), -c.z.e), std::ldexp(gap.imag(), -c.z.e));
    }

private:
    DiscMap(const HerglotzTriplet& f, cplx tau) : f_(f), tau_(tau) {}
    HerglotzTriplet f_;
    cplx tau_;
};

// --- rate products -----------------------------------------------------------

struct DiscProducts {
    Regime regime = Regime::Hyperbolic;
    std::vector<std::size_t> n;      // sampled iteration counts
    std::vector<double> product;     // |g^n - tau| |f^n(w)|
    std::vector<double> log_gap;     // log(a_n |g^n - tau|), a_n = alpha^n or n
    std::vector<double> log_depth;   // log(alpha^n (1 - |g^n|)) or log(n^2 (1 - |g^n|))
    LimitVerdict product_verdict;
    LimitVerdict gap_verdict;
    LimitVerdict depth_verdict;
    Verdict verdict = Verdict::Undetermined;
};

inline std::size_t sample_stride(std::size_t N, std::size_t max_samples = 65536) {
    return std::max<std::size_t>(1, (N + max_samples - 1) / max_samples);
}

namespace detail {

// `next(k)` returns the half-plane point f^k(w) for increasing sampled k.
template <class Next>
DiscProducts disc_products_impl(Next&& next, const std::vector<std::size_t>& ks, double alpha, Regime regime) {
    DiscProducts r;
    r.regime = regime;
    const double la = std::log(alpha);
    for (std::size_t k : ks) {
        const DiscIterate d = disc_iterate(next(k));
        const double dn = static_cast<double>(k);
        r.n.push_back(k);
        r.product.push_back(d.product);
        if (regime == Regime::Hyperbolic) {
            r.log_gap.push_back(dn * la + d.log_gap);
            r.log_depth.push_back(dn * la + d.log_one_minus_mod());
        } else {
            r.log_gap.push_back(std::log(dn) + d.log_gap);
            r.log_depth.push_back(2.0 * std::log(dn) + d.log_one_minus_mod());
        }
    }
    r.product_verdict = detect_limit(r.product);
    if (regime == Regime::ParabolicZero) {
        r.verdict = Verdict::NotApplicable;
        return r;
    }
    r.gap_verdict = detect_limit(r.log_gap);
    r.depth_verdict = detect_limit(r.log_depth);
    // alpha^n (1-|g^n|) and n^2 (1-|g^n|) converge to positive limits exactly
    // in the extremal case; alpha^n |g^n - tau| cannot grow (Julia), n |g^n - tau| can.
    const Verdict a = r.gap_verdict.finite() ? Verdict::Extremal
                      : r.gap_verdict.diverging() && r.gap_verdict.direction < 0 ? Verdict::NotExtremal
                                                                                 : Verdict::Undetermined;
    const Verdict b = r.depth_verdict.finite() ? Verdict::Extremal
                      : r.depth_verdict.diverging()                ? Verdict::NotExtremal
                                                                   : Verdict::Undetermined;
    if (a != Verdict::Undetermined && b != Verdict::Undetermined && a != b)
        throw ContradictionError("disc products: the two normalized gaps disagree");
    r.verdict = b != Verdict::Undetermined ? b : a;
    return r;
}

inline std::vector<std::size_t> sampled_counts(std::size_t N) {
    const std::size_t stride = sample_stride(N);
    std::vector<std::size_t> ks;
    for (std::size_t k = stride; k <= N; k += stride) ks.push_back(k);
    return ks;
}

} // namespace detail

inline DiscProducts disc_rate_products(const DiscMap& g, const cplx& z, std::size_t N, Regime regime) {
    if (N < 32) throw DomainError("disc products: budget must be at least 32");
    OrbitCursor c{ScaledPoint(g.lift(z))};
    auto next = [&](std::size_t k) {
        advance(g.map(), c, k - c.n);
        return c.z;
    };
    return detail::disc_products_impl(next, detail::sampled_counts(N), g.map().alpha(), regime);
}

// From a stored orbit of w; the disc point is S^{-1}(w) for any tau.
inline DiscProducts disc_rate_products(const Orbit& o, Regime regime) {
    if (o.steps() < 32) throw DomainError("disc products: budget must be at least 32");
    return detail::disc_products_impl([&](std::size_t k) { return o.points[k]; }, detail::sampled_counts(o.steps()),
                                      o.alpha, regime);
}

// --- composition operator norm bounds ---------------------------------------

enum class Space { Hardy, Bergman };

inline const char* space_name(Space s) { return s == Space::Hardy ? "hardy" : "bergman"; }

struct NormBounds {
    double lower = 1.0;
    double upper = 1.0;
};

inline void check_norm_args(double m, double p) {
    if (!(m >= 0.0 && m < 1.0)) throw DomainError("norm bounds: |g(0)| must lie in [0, 1)");
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("norm bounds: p must be >= 1");
}

// Bounds for ||C_g|| on H^p from m = |g(0)|.
inline NormBounds hardy_norm_bounds(double m, double p) {
    check_norm_args(m, p);
    return {std::pow(1.0 / ((1.0 - m) * (1.0 + m)), 1.0 / p), std::pow((1.0 + m) / (1.0 - m), 1.0 / p)};
}

// Bounds for ||C_g|| on A^p.
inline NormBounds bergman_norm_bounds(double m, double p) {
    check_norm_args(m, p);
    return {std::pow(1.0 / ((1.0 - m) * (1.0 + m)), 2.0 / p), std::pow((1.0 + m) / (1.0 - m), 2.0 / p)};
}

// Per n, the p-th powers of the bounds are p-free:
// Hardy lower^p = 1/(1-m^2), upper^p = (1+m)/(1-m); Bergman squares both.
struct NormBoundReport {
    Space space = Space::Hardy;
    double p = 1.0;
    Regime regime = Regime::Hyperbolic;
    std::vector<std::size_t> n;
    std::vector<double> modulus;           // m_n = |g^n(0)|, may round to 1
    std::vector<double> log_lower_p;       // log lower^p
    std::vector<double> log_upper_p;       // log upper^p
    std::vector<double> log_norm_lower;    // log(lower^p / normalizer)
    std::vector<double> log_norm_upper;
    LimitVerdict lower_verdict;
    double max_upper_over_lower = 0.0;     // of the p-th powers
    Verdict verdict = Verdict::Undetermined;
};

namespace detail {

template <class Next>
NormBoundReport norm_report_impl(Next&& next, std::size_t N, double alpha, double p, Space space, Regime regime) {
    if (!(p >= 1.0)) throw DomainError("norm report: p must be >= 1");
    if (N < 32) throw DomainError("norm report: budget must be at least 32");
    if (regime == Regime::ParabolicZero)
        throw ClassificationError("norm report: zero hyperbolic step is out of scope");
    NormBoundReport r;
    r.space = space;
    r.p = p;
    r.regime = regime;
    const double power = space == Space::Hardy ? 1.0 : 2.0;
    const double la = std::log(alpha);
    for (std::size_t k : sampled_counts(N)) {
        const DiscIterate d = disc_iterate(next(k));
        const double lo = -d.log_one_minus_sq;
        const double up = lo + 2.0 * std::log1p(d.modulus);
        const double dn = static_cast<double>(k);
        const double norm = regime == Regime::Hyperbolic ? dn * la : 2.0 * std::log(dn);
        r.n.push_back(k);
        r.modulus.push_back(d.modulus);
        r.log_lower_p.push_back(power * lo);
        r.log_upper_p.push_back(power * up);
        r.log_norm_lower.push_back(power * (lo - norm));
        r.log_norm_upper.push_back(power * (up - norm));
        r.max_upper_over_lower = std::max(r.max_upper_over_lower, std::exp(power * (up - lo)));
    }
    if (r.max_upper_over_lower > std::pow(4.0, power) * (1.0 + 1e-12))
        throw ContradictionError("norm report: upper/lower exceeds the arithmetic bound");
    r.lower_verdict = detect_limit(r.log_norm_lower);
    if (r.lower_verdict.finite())
        r.verdict = Verdict::Extremal;
    else if (r.lower_verdict.diverging())
        r.verdict = Verdict::NotExtremal;
    return r;
}

} // namespace detail

// m_n = |g^n(0)|; S(0) = i for every tau, so the orbit of i carries everything.
inline NormBoundReport norm_growth_report(const HerglotzTriplet& f, cplx tau, double p, Space space, std::size_t N,
                                          Regime regime) {
    require_unimodular(tau);
    OrbitCursor c{ScaledPoint(cplx(0.0, 1.0), 0)};
    auto next = [&](std::size_t k) {
        advance(f, c, k - c.n);
        return c.z;
    };
    return detail::norm_report_impl(next, N, f.alpha(), p, space, regime);
}

// From a stored orbit of i.
inline NormBoundReport norm_growth_report(const Orbit& o, double p, Space space, Regime regime) {
    if (o.points.empty() || std::abs(o.points.front().value() - cplx(0.0, 1.0)) != 0.0)
        throw DomainError("norm report: the orbit must start at i");
    return detail::norm_report_impl([&](std::size_t k) { return o.points[k]; }, o.steps(), o.alpha, p, space, regime);
}

} // namespace hpdyn
