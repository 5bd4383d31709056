#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"

namespace hpdyn {

enum class DensityFamily { cauchy, one_sided_quadratic, log_tail, gaussian, compact_uniform };

inline std::string_view family_name(DensityFamily f) {
    switch (f) {
    case DensityFamily::cauchy: return "cauchy";
    case DensityFamily::one_sided_quadratic: return "one_sided_quadratic";
    case DensityFamily::log_tail: return "log_tail";
    case DensityFamily::gaussian: return "gaussian";
    case DensityFamily::compact_uniform: return "compact_uniform";
    }
    return "?";
}

inline DensityFamily family_from_name(std::string_view s) {
    for (auto f : {DensityFamily::cauchy, DensityFamily::one_sided_quadratic, DensityFamily::log_tail,
                   DensityFamily::gaussian, DensityFamily::compact_uniform})
        if (family_name(f) == s) return f;
    throw DomainError("unknown density family '" + std::string(s) + "'");
}

// A point of the real line as seen by an integration kernel. Outside [-1,1]
// the abscissa is carried as sign * exp(log_abs_t) so that |t| far beyond
// the double range is still representable.
struct Abscissa {
    double t;          // may be +-inf in the far tails
    double log_abs_t;  // -inf at t = 0
    int sign;          // -1, 0, +1
    bool central;      // |t| <= 1, t exact
    // Inside a peak window t = a (1 + rel) for the window anchor a, with rel
    // exact. NaN elsewhere.
    double rel = std::numeric_limits<double>::quiet_NaN();

    static Abscissa at(double t) {
        return {t, std::log(std::abs(t)), t > 0 ? 1 : (t < 0 ? -1 : 0), std::abs(t) <= 1.0};
    }
    bool anchored() const { return !std::isnan(rel); }

    // t / 2^k
    double scaled(int k) const {
        if (central || std::isfinite(t)) return std::ldexp(t, -k);
        return sign * std::exp(log_abs_t - k * ln2);
    }
    // 1/t^2, finite for every nonzero t
    double inv_sq() const { return std::exp(-2.0 * log_abs_t); }
};

// Parametric density of total mass `scale`.
struct DensityComponent {
    DensityFamily family = DensityFamily::cauchy;
    double scale = 1.0;
    double lower = 0.0, upper = 1.0;  // compact_uniform support
    bool one_sided = false;           // log_tail restricted to t > 0

    static DensityComponent cauchy(double c) { return make(DensityFamily::cauchy, c); }
    static DensityComponent one_sided_quadratic(double c) { return make(DensityFamily::one_sided_quadratic, c); }
    static DensityComponent log_tail(double c, bool positive_side_only = false) {
        auto d = make(DensityFamily::log_tail, c);
        d.one_sided = positive_side_only;
        return d;
    }
    static DensityComponent gaussian(double c) { return make(DensityFamily::gaussian, c); }
    static DensityComponent compact_uniform(double c, double a, double b) {
        auto d = make(DensityFamily::compact_uniform, c);
        d.lower = a;
        d.upper = b;
        if (!(std::isfinite(a) && std::isfinite(b) && a < b))
            throw DomainError("compact_uniform: need finite a < b");
        return d;
    }

    // rho(t) for |t| <= 1
    double density(double t) const {
        using std::numbers::e;
        using std::numbers::pi;
        switch (family) {
        case DensityFamily::cauchy: return scale / (pi * (1.0 + t * t));
        case DensityFamily::one_sided_quadratic: return t > 0 ? scale / ((1.0 + t) * (1.0 + t)) : 0.0;
        case DensityFamily::log_tail: {
            if (one_sided && t <= 0) return 0.0;
            const double L = std::log(e + std::abs(t));
            return (one_sided ? 1.0 : 0.5) * scale / ((e + std::abs(t)) * L * L);
        }
        case DensityFamily::gaussian: return scale * std::exp(-0.5 * t * t) / std::sqrt(2.0 * pi);
        case DensityFamily::compact_uniform: return (t >= lower && t <= upper) ? scale / (upper - lower) : 0.0;
        }
        return 0.0;
    }

    // |t| rho(t) at |t| = exp(lam) >= 1, the weight of d lam.
    double tail_weight(double lam, int sign) const {
        using std::numbers::pi;
        const double u = std::exp(-lam);  // 1/|t|
        switch (family) {
        case DensityFamily::cauchy: return scale * u / (pi * (1.0 + u * u));
        case DensityFamily::one_sided_quadratic: return sign > 0 ? scale * u / ((1.0 + u) * (1.0 + u)) : 0.0;
        case DensityFamily::log_tail: {
            if (one_sided && sign < 0) return 0.0;
            const double r = std::exp(1.0 - lam);  // e/|t|
            const double L = lam + std::log1p(r);
            return (one_sided ? 1.0 : 0.5) * scale / ((1.0 + r) * L * L);
        }
        case DensityFamily::gaussian: {
            if (lam > 7.0) return 0.0;
            return scale * std::exp(lam - 0.5 * std::exp(2.0 * lam)) / std::sqrt(2.0 * pi);
        }
        case DensityFamily::compact_uniform: {
            const double t = sign * std::exp(lam);
            return (t >= lower && t <= upper) ? std::exp(lam) * scale / (upper - lower) : 0.0;
        }
        }
        return 0.0;
    }

    // Points where the density is not smooth.
    std::vector<double> singular_points() const {
        switch (family) {
        case DensityFamily::one_sided_quadratic: return {0.0};
        case DensityFamily::log_tail: return {0.0};
        case DensityFamily::compact_uniform: return {lower, upper};
        default: return {};
        }
    }

    bool abs_moment_finite() const {
        return family == DensityFamily::gaussian || family == DensityFamily::compact_uniform;
    }
    bool log_moment_finite() const { return family != DensityFamily::log_tail; }

private:
    static DensityComponent make(DensityFamily f, double c) {
        if (!(std::isfinite(c) && c > 0)) throw DomainError("density scale must be finite and positive");
        DensityComponent d;
        d.family = f;
        d.scale = c;
        return d;
    }
};

struct Atom {
    double location;
    double mass;
};

// A finite value or the infinite flag.
struct MomentValue {
    bool finite = true;
    double value = 0.0;

    static MomentValue infinite() { return {false, std::numeric_limits<double>::infinity()}; }
    bool is_infinite() const { return !finite; }
};

namespace detail {

// The real line is compactified as v in (-3, 3): t = v on [-1, 1]; beyond,
// |t| = exp(lam) with lam linear in v up to lam_top (so narrow features far
// out keep their resolution) and lam = lam_top + s/(1-s) for the remaining tail.
struct LineMap {
    double lam_top = 1.0;

    double v_from_log_abs(double log_abs_t, int sign) const {
        if (log_abs_t <= 0.0) return sign * std::exp(log_abs_t);
        if (!std::isfinite(log_abs_t)) return 3.0 * sign;
        if (log_abs_t <= lam_top) return sign * (1.0 + log_abs_t / lam_top);
        const double r = log_abs_t - lam_top;
        return sign * (2.0 + r / (1.0 + r));
    }
    double v_from_t(double t) const {
        if (std::abs(t) <= 1.0) return t;
        return v_from_log_abs(std::log(std::abs(t)), t > 0 ? 1 : -1);
    }
    // lam and d lam / d v for 1 < |v| < 3
    std::pair<double, double> lam_of(double av) const {
        if (av <= 2.0) return {(av - 1.0) * lam_top, lam_top};
        const double s = av - 2.0;
        return {lam_top + s / (1.0 - s), 1.0 / ((1.0 - s) * (1.0 - s))};
    }
};

} // namespace detail

// A neighbourhood t = a (1 + r), |r| <= half, of a sharp kernel peak at a,
// integrated in r so that t - a is known exactly. `width` is the peak width
// in r and sets the inner breakpoints.
struct PeakWindow {
    double log_abs_anchor;
    int sign;
    double half;
    double width;
};

// Breakpoints and cutoffs for one integral against mu.
struct Frame {
    int scale_exp = 0;
    double log_cutoff = std::numeric_limits<double>::infinity();
    std::vector<double> t_features;
    std::vector<std::pair<double, int>> log_features;  // (log|t|, sign)
    quad::Options opt{};
    std::optional<PeakWindow> window;

    void add_t(double t) { t_features.push_back(t); }
    void add_log_abs(double log_abs_t, int sign) {
        if (std::isfinite(log_abs_t)) log_features.emplace_back(log_abs_t, sign);
    }
    void add_log_abs_both(double log_abs_t) {
        add_log_abs(log_abs_t, 1);
        add_log_abs(log_abs_t, -1);
    }
    // Restrict to |t| <= T.
    void cutoff(double T) { log_cutoff = std::log(T); }

    detail::LineMap line_map() const {
        double top = 0.0;
        for (const auto& [l, s] : log_features) top = std::max(top, l);
        for (double t : t_features) top = std::max(top, std::log(std::abs(t)));
        if (std::isfinite(log_cutoff)) top = std::max(top, log_cutoff);
        return {top + 5.0};
    }
};

class FiniteMeasure {
public:
    FiniteMeasure() = default;
    FiniteMeasure(std::vector<Atom> atoms, std::vector<DensityComponent> densities)
        : atoms_(std::move(atoms)), densities_(std::move(densities)) {
        validate();
    }

    static FiniteMeasure zero() { return {}; }
    static FiniteMeasure atom(double t, double m) { return FiniteMeasure({{t, m}}, {}); }
    static FiniteMeasure density(DensityComponent d) { return FiniteMeasure({}, {d}); }

    const std::vector<Atom>& atoms() const { return atoms_; }
    const std::vector<DensityComponent>& densities() const { return densities_; }
    bool empty() const { return atoms_.empty() && densities_.empty(); }
    bool atoms_only() const { return densities_.empty(); }

    FiniteMeasure operator+(const FiniteMeasure& o) const {
        auto a = atoms_;
        a.insert(a.end(), o.atoms_.begin(), o.atoms_.end());
        auto d = densities_;
        d.insert(d.end(), o.densities_.begin(), o.densities_.end());
        return FiniteMeasure(std::move(a), std::move(d));
    }

    // Integral of kernel against the density part only.
    template <class V, class K>
    quad::Result<V> integrate_densities(K&& kernel, const Frame& fr) const {
        if (densities_.empty()) return {};
        const auto map = fr.line_map();
        const double v_max = std::isfinite(fr.log_cutoff) ? map.v_from_log_abs(fr.log_cutoff, 1) : 3.0;
        std::vector<double> br{-v_max, -2.0, -1.0, 0.0, 1.0, 2.0, v_max};
        for (const auto& [l, sg] : fr.log_features) br.push_back(map.v_from_log_abs(l, sg));
        for (double t : fr.t_features) br.push_back(map.v_from_t(t));
        for (const auto& d : densities_)
            for (double s : d.singular_points()) br.push_back(map.v_from_t(s));

        // The window, if any, is cut out of the v integral.
        double v_lo = 0.0, v_hi = -1.0;
        const auto& win = fr.window;
        if (win) {
            const double l1 = win->log_abs_anchor + std::log1p(-win->half);
            const double l2 = win->log_abs_anchor + std::log1p(win->half);
            v_lo = map.v_from_log_abs(win->sign > 0 ? l1 : l2, win->sign);
            v_hi = map.v_from_log_abs(win->sign > 0 ? l2 : l1, win->sign);
            br.push_back(v_lo);
            br.push_back(v_hi);
        }
        for (auto& b : br) b = std::clamp(b, -v_max, v_max);
        std::sort(br.begin(), br.end());
        br.erase(std::unique(br.begin(), br.end()), br.end());

        auto integrand = [&](double v) -> V {
            if (v > v_lo && v < v_hi) return V{};
            const double av = std::abs(v);
            const int sign = v > 0 ? 1 : (v < 0 ? -1 : 0);
            double w = 0.0;
            Abscissa x;
            if (av <= 1.0) {
                for (const auto& d : densities_) w += d.density(v);
                x = Abscissa::at(v);
            } else {
                const auto [lam, jac] = map.lam_of(av);
                for (const auto& d : densities_) w += d.tail_weight(lam, sign);
                w *= jac;
                x = {sign * std::exp(lam), lam, sign, false};
            }
            if (w == 0.0) return V{};
            return kernel(x) * w;
        };
        if (!win) return quad::integrate<V>(integrand, br, fr.opt);

        // d mu = rho(t) |a| dr
        const double la = win->log_abs_anchor;
        auto in_window = [&](double r) -> V {
            const double lam = la + std::log1p(r);
            double w = 0.0;
            if (lam >= fr.log_cutoff) return V{};
            Abscissa x;
            if (lam <= 0.0) {
                const double t = win->sign * std::exp(lam);
                for (const auto& d : densities_) w += d.density(t);
                w *= std::exp(la);
                x = Abscissa::at(t);
            } else {
                for (const auto& d : densities_) w += d.tail_weight(lam, win->sign);
                w /= 1.0 + r;
                x = {win->sign * std::exp(lam), lam, win->sign, false};
            }
            x.rel = r;
            if (w == 0.0) return V{};
            return kernel(x) * w;
        };
        std::vector<double> wbr{-win->half, 0.0, win->half};
        for (double b = win->width; b < win->half; b *= 4.0) {
            wbr.push_back(b);
            wbr.push_back(-b);
        }
        for (const auto& d : densities_)
            for (double s : d.singular_points()) {
                if (s == 0.0 || (s > 0) != (win->sign > 0)) continue;
                const double r = std::expm1(std::log(std::abs(s)) - la);
                if (std::abs(r) < win->half) wbr.push_back(r);
            }
        std::sort(wbr.begin(), wbr.end());
        const auto wres = quad::integrate<V>(in_window, wbr, fr.opt);
        // The rest of the line only needs accuracy relative to the peak.
        auto opt = fr.opt;
        using T = quad::detail::Traits<V>;
        const double wmod = std::hypot(T::get(wres.value, 0), T::get(wres.value, T::n - 1));
        for (int k = 0; k < T::n; ++k)
            opt.abs_floor[k] = std::max(opt.abs_floor[k], opt.rel_tol * std::max(std::abs(T::get(wres.value, k)), opt.cross_ratio[k] * wmod));
        auto res = quad::integrate<V>(integrand, br, opt);
        res.value += wres.value;
        res.error += wres.error;
        res.nodes += wres.nodes;
        return res;
    }

    template <class V, class K>
    V integrate(K&& kernel, const Frame& fr) const {
        V s{};
        for (const auto& a : atoms_)
            if (std::log(std::abs(a.location)) < fr.log_cutoff) s += kernel(Abscissa::at(a.location)) * a.mass;
        return s + integrate_densities<V>(kernel, fr).value;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            const auto& a = atoms_[i];
            if (!std::isfinite(a.location)) throw DomainError("atom location must be finite");
            if (!(std::isfinite(a.mass) && a.mass > 0)) throw DomainError("atom mass must be finite and positive");
            for (std::size_t j = 0; j < i; ++j)
                if (atoms_[j].location == a.location) throw DomainError("atom locations must be distinct");
        }
        // Each family must integrate to its scale.
        for (const auto& d : densities_) {
            FiniteMeasure single;
            single.densities_ = {d};
            Frame fr;
            fr.opt.rel_tol = 1e-12;
            const double m = single.integrate_densities<double>([](const Abscissa&) { return 1.0; }, fr).value;
            if (!(std::abs(m - d.scale) <= 1e-8 * d.scale))
                throw DomainError("density normalization check failed for " + std::string(family_name(d.family)));
        }
    }

    std::vector<Atom> atoms_;
    std::vector<DensityComponent> densities_;
};

inline double total_mass(const FiniteMeasure& mu) {
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += a.mass;
    for (const auto& d : mu.densities()) s += d.scale;
    return s;
}

inline constexpr double moment_tolerance = 1e-8;

// Integral of |t| d mu. Divergence is decided by the family flags.
inline MomentValue abs_moment(const FiniteMeasure& mu) {
    double s = 0.0;
    for (const auto& a : mu.atoms()) s += std::abs(a.location) * a.mass;
    for (const auto& d : mu.densities()) {
        if (!d.abs_moment_finite()) return MomentValue::infinite();
        if (d.family == DensityFamily::gaussian) {
            s += d.scale * std::sqrt(2.0 / std::numbers::pi);
        } else {
            auto G = [](double t) { return 0.5 * t * std::abs(t); };
            s += d.scale * (G(d.upper) - G(d.lower)) / (d.upper - d.lower);
        }
    }
    return {true, s};
}

inline double log1p_abs(const Abscissa& x) {
    if (x.central) return std::log1p(std::abs(x.t));
    return x.log_abs_t + std::log1p(std::exp(-x.log_abs_t));
}

// Integral of log(1+|t|) d mu.
inline MomentValue log_moment(const FiniteMeasure& mu) {
    for (const auto& d : mu.densities())
        if (!d.log_moment_finite()) return MomentValue::infinite();
    Frame fr;
    fr.opt.rel_tol = moment_tolerance;
    return {true, mu.integrate<double>(log1p_abs, fr)};
}

// Integral of log(1+|t|) over |t| <= T, finite for every measure; used as
// corroborating cutoff trajectories next to the analytic flags.
inline double log_moment_truncated(const FiniteMeasure& mu, double T) {
    Frame fr;
    fr.opt.rel_tol = moment_tolerance;
    fr.cutoff(T);
    return mu.integrate<double>(log1p_abs, fr);
}

inline double abs_moment_truncated(const FiniteMeasure& mu, double T) {
    Frame fr;
    fr.opt.rel_tol = moment_tolerance;
    fr.cutoff(T);
    return mu.integrate<double>([](const Abscissa& x) { return std::exp(x.log_abs_t); }, fr);
}

} // namespace hpdyn
