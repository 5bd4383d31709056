#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "errors.hpp"

namespace hpdyn {

using cplx = std::complex<double>;

inline constexpr double ln2 = 0.69314718055994530942;

class UpperHalfPoint {
public:
    UpperHalfPoint(double re, double im) : re_(re), im_(im) {
        if (!std::isfinite(re) || !std::isfinite(im))
            throw DomainError("UpperHalfPoint: non-finite coordinate");
        if (!(im > 0.0))
            throw DomainError("UpperHalfPoint: imaginary part must be positive, got " + std::to_string(im));
    }
    explicit UpperHalfPoint(cplx z) : UpperHalfPoint(z.real(), z.imag()) {}

    double re() const { return re_; }
    double im() const { return im_; }
    cplx z() const { return {re_, im_}; }

    friend bool operator==(const UpperHalfPoint&, const UpperHalfPoint&) = default;

private:
    double re_;
    double im_;
};

class DiscPoint {
public:
    DiscPoint(double re, double im) : re_(re), im_(im) {
        if (!std::isfinite(re) || !std::isfinite(im))
            throw DomainError("DiscPoint: non-finite coordinate");
        if (!(std::hypot(re, im) < 1.0))
            throw DomainError("DiscPoint: modulus must be below 1");
    }
    explicit DiscPoint(cplx z) : DiscPoint(z.real(), z.imag()) {}

    double re() const { return re_; }
    double im() const { return im_; }
    cplx z() const { return {re_, im_}; }
    double modulus() const { return std::hypot(re_, im_); }

private:
    double re_;
    double im_;
};

// A point of R or the symbol infinity.
class BoundaryAnchor {
public:
    static BoundaryAnchor infinity() { return BoundaryAnchor{}; }
    static BoundaryAnchor at(double x) {
        if (!std::isfinite(x)) throw DomainError("BoundaryAnchor: use infinity() for the point at infinity");
        BoundaryAnchor b;
        b.value_ = x;
        return b;
    }
    bool is_infinity() const { return !value_.has_value(); }
    double value() const {
        if (!value_) throw DomainError("BoundaryAnchor: infinity has no finite value");
        return *value_;
    }

private:
    std::optional<double> value_;
};

// z = m * 2^e. The exponent stays 0 while |z| is moderate so that small
// orbits are represented exactly; huge points are renormalized by powers of two.
struct ScaledPoint {
    cplx m;
    int e = 0;

    static constexpr double far_threshold = 0x1p500;
    static constexpr double near_threshold = 0x1p400;

    ScaledPoint() = default;
    ScaledPoint(cplx mant, int exp2) : m(mant), e(exp2) { normalize(); }
    explicit ScaledPoint(const UpperHalfPoint& p) : m(p.z()), e(0) { normalize(); }

    void normalize() {
        const double a = std::max(std::abs(m.real()), std::abs(m.imag()));
        if (a == 0.0 || !std::isfinite(a)) return;
        if (e < 0) {
            m = {std::ldexp(m.real(), e), std::ldexp(m.imag(), e)};
            e = 0;
            return;
        }
        if (e == 0 && a < far_threshold) return;
        if (e > 0 && a * std::ldexp(1.0, std::min(e, 1000)) < near_threshold) {
            m = {std::ldexp(m.real(), e), std::ldexp(m.imag(), e)};
            e = 0;
            return;
        }
        const int k = std::ilogb(a);
        m = {std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k)};
        e += k;
    }

    bool is_moderate() const { return e == 0; }
    double log_abs() const { return std::log(std::abs(m)) + e * ln2; }
    double log_im() const { return std::log(m.imag()) + e * ln2; }
    double arg() const { return std::arg(m); }
    // x/y, scale free.
    double slope() const { return m.real() / m.imag(); }

    // Exponent of |z| as a power of two.
    int scale_exponent() const {
        const double a = std::max(std::abs(m.real()), std::abs(m.imag()));
        return std::ilogb(a) + e;
    }

    // Plain value; throws when it does not fit in a double.
    cplx value() const {
        if (e == 0) return m;
        const cplx v{std::ldexp(m.real(), e), std::ldexp(m.imag(), e)};
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("ScaledPoint: value exceeds double range");
        return v;
    }

    UpperHalfPoint point() const { return UpperHalfPoint(value()); }
};

namespace detail {

// log(1 + e^u) without overflow.
inline double log1p_exp(double u) {
    if (u > 35.0) return u + std::log1p(std::exp(-u));
    return std::log1p(std::exp(u));
}

} // namespace detail

inline double pseudo_hyperbolic(const UpperHalfPoint& z, const UpperHalfPoint& w) {
    return std::abs(z.z() - w.z()) / std::abs(z.z() - std::conj(w.z()));
}

// d = log(1+rho) + 1/2 log(1 + |z-w|^2/(4 Im z Im w)), which is the
// closed form 1/2 log((1+rho)^2 |z - conj w|^2 / (4 Im z Im w)) rewritten
// with |z - conj w|^2 = |z-w|^2 + 4 Im z Im w. Valid at any scale.
inline double hyperbolic_distance_stable(const ScaledPoint& a, const ScaledPoint& b) {
    const int E = std::max(a.e, b.e);
    const cplx A{std::ldexp(a.m.real(), a.e - E), std::ldexp(a.m.imag(), a.e - E)};
    const cplx B{std::ldexp(b.m.real(), b.e - E), std::ldexp(b.m.imag(), b.e - E)};
    const double diff = std::abs(A - B);
    if (diff == 0.0) return 0.0;
    const double rho = diff / std::abs(A - std::conj(B));
    const double logX = 2.0 * (std::log(diff) + E * ln2) - std::log(4.0) - a.log_im() - b.log_im();
    return std::log1p(rho) + 0.5 * detail::log1p_exp(logX);
}

inline double hyperbolic_distance_stable(const UpperHalfPoint& z, const UpperHalfPoint& w) {
    return hyperbolic_distance_stable(ScaledPoint(z), ScaledPoint(w));
}

inline double hyperbolic_distance(const UpperHalfPoint& z, const UpperHalfPoint& w) {
    if (std::max(std::abs(z.z()), std::abs(w.z())) > 1e6) return hyperbolic_distance_stable(z, w);
    const double rho = pseudo_hyperbolic(z, w);
    return 0.5 * std::log((1.0 + rho) / (1.0 - rho));
}

// d_H(i, w) for a possibly huge w.
inline double distance_from_i(const ScaledPoint& w) {
    return hyperbolic_distance_stable(ScaledPoint(cplx(0.0, 1.0), 0), w);
}

inline void require_unimodular(cplx tau) {
    if (!(std::abs(std::abs(tau) - 1.0) <= 1e-12))
        throw DomainError("tau must lie on the unit circle");
}

// S^{-1}(w) = tau (w - i)/(w + i)
inline DiscPoint cayley_to_disc(const UpperHalfPoint& w, cplx tau) {
    require_unimodular(tau);
    const cplx i{0.0, 1.0};
    const cplx g = tau * (w.z() - i) / (w.z() + i);
    if (!(std::abs(g) < 1.0))
        throw DomainError("cayley_to_disc: image is indistinguishable from the boundary in double precision");
    return DiscPoint(g);
}

// S(z) = i (tau + z)/(tau - z)
inline UpperHalfPoint cayley_to_halfplane(const DiscPoint& z, cplx tau) {
    require_unimodular(tau);
    const cplx i{0.0, 1.0};
    return UpperHalfPoint(i * (tau + z.z()) / (tau - z.z()));
}

// Pseudo-hyperbolic distance of the disc, |(a-b)/(1 - conj(b) a)|.
inline double pseudo_hyperbolic_disc(const DiscPoint& a, const DiscPoint& b) {
    return std::abs(a.z() - b.z()) / std::abs(1.0 - std::conj(b.z()) * a.z());
}

} // namespace hpdyn
