#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>
#ifdef HPDYN_QUAD_DEBUG
#include <cstdio>
#endif

#include "errors.hpp"

// Adaptive Gauss-Kronrod 7/15 on a finite interval with user breakpoints.
// Error control is per component for complex integrands, so a small
// imaginary part is resolved to relative accuracy even next to a large real part.
namespace hpdyn::quad {

struct Options {
    double rel_tol = 1e-10;
    // A component whose integral nearly cancels is resolved relative to
    // floor_ratio times the integral of its absolute value, or relative to
    // cross_ratio[k] times the modulus of the whole (complex) integral.
    double floor_ratio = 1e-3;
    std::array<double, 2> cross_ratio{0.0, 0.0};
    // Absolute tolerance granted by the caller, e.g. from a piece of the
    // integral computed separately.
    std::array<double, 2> abs_floor{0.0, 0.0};
    std::size_t node_budget = std::size_t{1} << 15;
};

template <class V>
struct Result {
    V value{};
    V error{};
    std::size_t nodes = 0;
};

namespace detail {

inline constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Traits;

template <>
struct Traits<double> {
    static constexpr int n = 1;
    static double get(double v, int) { return v; }
    static void set(double& v, int, double x) { v = x; }
};

template <>
struct Traits<std::complex<double>> {
    static constexpr int n = 2;
    static double get(const std::complex<double>& v, int k) { return k == 0 ? v.real() : v.imag(); }
    static void set(std::complex<double>& v, int k, double x) {
        if (k == 0)
            v.real(x);
        else
            v.imag(x);
    }
};

template <class V>
struct Segment {
    double a, b;
    V value;
    std::array<double, 2> err;
    std::array<double, 2> absval;
    bool frozen;
};

template <class V, class F>
Segment<V> gk15(F& f, double a, double b) {
    using T = Traits<V>;
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<V, 15> fv;
    fv[7] = f(c);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        fv[j] = f(c - dx);
        fv[14 - j] = f(c + dx);
    }
    Segment<V> s{a, b, V{}, {0.0, 0.0}, {0.0, 0.0}, false};
    for (int k = 0; k < T::n; ++k) {
        double rk = wgk[7] * T::get(fv[7], k);
        double rg = wg[3] * T::get(fv[7], k);
        double rabs = std::abs(rk);
        for (int j = 0; j < 7; ++j) {
            const double s2 = T::get(fv[j], k) + T::get(fv[14 - j], k);
            rk += wgk[j] * s2;
            rabs += wgk[j] * (std::abs(T::get(fv[j], k)) + std::abs(T::get(fv[14 - j], k)));
            if (j % 2 == 1) rg += wg[j / 2] * s2;
        }
        const double mean = 0.5 * rk;
        double rasc = wgk[7] * std::abs(T::get(fv[7], k) - mean);
        for (int j = 0; j < 7; ++j)
            rasc += wgk[j] * (std::abs(T::get(fv[j], k) - mean) + std::abs(T::get(fv[14 - j], k) - mean));
        const double ah = std::abs(h);
        double err = std::abs((rk - rg) * h);
        rasc *= ah;
        rabs *= ah;
        if (rasc != 0.0 && err != 0.0) err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
        constexpr double eps = std::numeric_limits<double>::epsilon();
        if (rabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * rabs, err);
        T::set(s.value, k, rk * h);
        s.err[k] = err;
        s.absval[k] = rabs;
    }
    return s;
}

} // namespace detail

// Integrate f over [breaks.front(), breaks.back()], splitting at every
// interior breakpoint. Breakpoints must be sorted; duplicates are skipped.
template <class V, class F>
Result<V> integrate(F&& f, const std::vector<double>& breaks, const Options& opt = {}) {
    using T = detail::Traits<V>;
    using Seg = detail::Segment<V>;
    std::vector<Seg> segs;
    std::size_t nodes = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (!(breaks[i + 1] > breaks[i])) continue;
        segs.push_back(detail::gk15<V>(f, breaks[i], breaks[i + 1]));
        nodes += 15;
    }
    Result<V> res;
    for (;;) {
        std::array<double, 2> tot{0.0, 0.0}, err{0.0, 0.0}, absv{0.0, 0.0};
        for (const auto& s : segs)
            for (int k = 0; k < T::n; ++k) {
                tot[k] += T::get(s.value, k);
                err[k] += s.err[k];
                absv[k] += s.absval[k];
            }
        std::array<double, 2> tol{0.0, 0.0};
        bool ok = true;
        const double modulus = std::hypot(tot[0], T::n > 1 ? tot[1] : 0.0);
        for (int k = 0; k < T::n; ++k) {
            const double scale = std::max({std::abs(tot[k]), opt.floor_ratio * absv[k], opt.cross_ratio[k] * modulus});
            tol[k] = std::max({opt.rel_tol * scale, 100.0 * std::numeric_limits<double>::epsilon() * absv[k], opt.abs_floor[k]});
            if (!(err[k] <= tol[k])) ok = false;
        }
        if (!std::isfinite(tot[0]) || !std::isfinite(tot[T::n - 1]))
            throw QuadratureFailure("quadrature: non-finite integrand value");
        if (ok) {
            for (int k = 0; k < T::n; ++k) {
                T::set(res.value, k, tot[k]);
                T::set(res.error, k, err[k]);
            }
            res.nodes = nodes;
            return res;
        }
        // Refine the segment with the largest share of the tolerance violation.
        std::size_t worst = segs.size();
        double worst_key = -1.0;
        for (std::size_t i = 0; i < segs.size(); ++i) {
            if (segs[i].frozen) continue;
            double key = 0.0;
            for (int k = 0; k < T::n; ++k)
                if (err[k] > tol[k]) key = std::max(key, segs[i].err[k] / std::max(tol[k], std::numeric_limits<double>::min()));
            if (key > worst_key) {
                worst_key = key;
                worst = i;
            }
        }
        if (worst == segs.size() || worst_key <= 0.0)
            throw QuadratureFailure("quadrature: tolerance not reachable (segments exhausted)");
        if (nodes + 30 > opt.node_budget) {
#ifdef HPDYN_QUAD_DEBUG
            std::fprintf(stderr, "tot %g %g err %g %g tol %g %g absv %g %g\n", tot[0], tot[1], err[0], err[1], tol[0], tol[1], absv[0], absv[1]);
            for (auto& s : segs)
                if (s.err[0] > 1e-2 * tol[0] || s.err[1] > 1e-2 * tol[1])
                    std::fprintf(stderr, "seg %.17g %.17g err %g %g val %g %g\n", s.a, s.b, s.err[0], s.err[1],
                                 T::get(s.value, 0), T::get(s.value, T::n - 1));
#endif
            throw QuadratureFailure("quadrature: node budget exhausted");
        }
        const Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        if (!(mid > s.a && mid < s.b)) {
            segs[worst].frozen = true;
            continue;
        }
        segs[worst] = detail::gk15<V>(f, s.a, mid);
        segs.push_back(detail::gk15<V>(f, mid, s.b));
        nodes += 30;
    }
}

} // namespace hpdyn::quad
