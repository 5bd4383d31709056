#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "disc.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "herglotz.hpp"
#include "koenigs.hpp"
#include "limits.hpp"
#include "measure.hpp"
#include "orbit.hpp"
#include "quadrature.hpp"
#include "verdict.hpp"

namespace hpdyn {

enum class Route {
    OrbitLimit,
    HerglotzLogMoment,
    Conformality,
    AsymptoticIntegral,
    DistanceDefect,
    HyperbolicDistance,
    DiscProducts,
    NormSandwich,
};

inline const char* route_name(Route r) {
    switch (r) {
    case Route::OrbitLimit: return "orbit_limit";
    case Route::HerglotzLogMoment: return "herglotz_log_moment";
    case Route::Conformality: return "conformality";
    case Route::AsymptoticIntegral: return "asymptotic_integral";
    case Route::DistanceDefect: return "distance_defect";
    case Route::HyperbolicDistance: return "hyperbolic_distance";
    case Route::DiscProducts: return "disc_products";
    case Route::NormSandwich: return "norm_sandwich";
    }
    return "?";
}

struct CriterionVerdict {
    Route route = Route::OrbitLimit;
    Verdict verdict = Verdict::Undetermined;
    std::string note;
    std::vector<std::pair<std::string, double>> numbers;

    CriterionVerdict& add(std::string key, double v) {
        numbers.emplace_back(std::move(key), v);
        return *this;
    }
};

inline Verdict from_limit(const LimitVerdict& v, int non_extremal_direction = 0) {
    if (v.finite()) return Verdict::Extremal;
    if (v.diverging() && (non_extremal_direction == 0 || v.direction == non_extremal_direction))
        return Verdict::NotExtremal;
    return Verdict::Undetermined;
}

// --- Herglotz moments ---------------------------------------------------------

inline constexpr double log_moment_cutoffs[] = {1e2, 1e4, 1e8, 1e16, 1e32, 1e64};

inline CriterionVerdict extremal_by_log_moment(const HerglotzTriplet& f) {
    if (!f.is_hyperbolic()) throw ClassificationError("log-moment criterion needs a hyperbolic map");
    CriterionVerdict v;
    v.route = Route::HerglotzLogMoment;
    const MomentValue m = log_moment(f.mu());
    for (double T : log_moment_cutoffs) v.add("log_moment_1e" + std::to_string(static_cast<int>(std::log10(T))),
                                              log_moment_truncated(f.mu(), T));
    if (m.finite) {
        v.verdict = Verdict::Extremal;
        v.add("log_moment", m.value);
    } else {
        v.verdict = Verdict::NotExtremal;
        v.note = "log moment infinite (family flag)";
    }
    return v;
}

// --- integrals along the imaginary axis -------------------------------------

// int_1^Y (Im f(iy) - alpha y)/y^p dy at Y = 10, ..., Ymax for p = 1 or 2,
// integrated in s = log y decade by decade.
struct AxisIntegral {
    double power = 2.0;
    std::vector<double> Y;
    std::vector<double> value;
    DecadeTrend trend;
};

inline AxisIntegral excess_axis_integral(const HerglotzTriplet& f, double power, double Ymax = 1e6,
                                         double rel_tol = 1e-9) {
    if (power != 1.0 && power != 2.0) throw DomainError("axis integral: power must be 1 or 2");
    if (!(Ymax >= 1e4)) throw DomainError("axis integral: Ymax must be at least 1e4");
    AxisIntegral r;
    r.power = power;
    const int decades = static_cast<int>(std::floor(std::log10(Ymax) + 1e-9));
    quad::Options opt;
    opt.rel_tol = rel_tol;
    double acc = 0.0;
    for (int k = 0; k < decades; ++k) {
        const double s0 = k * std::numbers::ln10, s1 = (k + 1) * std::numbers::ln10;
        double piece = 0.0;
        if (!f.mu().empty()) {
            // excess/y^p dy = K(y) y^{2-p} ds with K the kernel integral
            auto g = [&](double s) {
                const double y = std::exp(s);
                const double K = excess_kernel_integral(f, y, 1e-11);
                return power == 2.0 ? K : K * y;
            };
            piece = quad::integrate<double>(g, {s0, s1}, opt).value;
        }
        acc += piece;
        r.Y.push_back(std::pow(10.0, k + 1));
        r.value.push_back(acc);
    }
    r.trend = decade_trend(r.value);
    return r;
}

// int_1^Y |f(iy) - i alpha y|/y^2 dy and int_1^Y |Re f(iy)|/y^2 dy.
struct ModulusIntegral {
    std::vector<double> Y;
    std::vector<double> modulus;
    std::vector<double> real_part;
    double real_part_bound = 0.0;  // |beta| + (pi/2) mu(R)
    DecadeTrend trend;
};

inline ModulusIntegral modulus_axis_integral(const HerglotzTriplet& f, double Ymax = 1e6, double rel_tol = 1e-9) {
    ModulusIntegral r;
    r.real_part_bound = std::abs(f.beta()) + 0.5 * std::numbers::pi * total_mass(f.mu());
    const int decades = static_cast<int>(std::floor(std::log10(Ymax) + 1e-9));
    quad::Options opt;
    opt.rel_tol = rel_tol;
    // Re f(iy) is rounding noise for symmetric measures
    opt.abs_floor = {1e-13, 1e-13};
    double am = 0.0, ar = 0.0;
    for (int k = 0; k < decades; ++k) {
        const double s0 = k * std::numbers::ln10, s1 = (k + 1) * std::numbers::ln10;
        auto g = [&](double s) {
            const double y = std::exp(s);
            const double re = evaluate(f, UpperHalfPoint(0.0, y), 1e-11).re();
            const double im = imag_excess(f, y, 1e-11);
            return cplx(std::hypot(re, im) / y, std::abs(re) / y);
        };
        const auto res = quad::integrate<cplx>(g, {s0, s1}, opt).value;
        am += res.real();
        ar += res.imag();
        r.Y.push_back(std::pow(10.0, k + 1));
        r.modulus.push_back(am);
        r.real_part.push_back(ar);
    }
    r.trend = decade_trend(r.modulus);
    return r;
}

struct AsymptoticReport {
    CriterionVerdict verdict;
    AxisIntegral excess;       // (c)
    ModulusIntegral modulus;   // (b)
};

// Extremal iff int_1^oo (Im f(iy) - alpha y)/y^2 dy < oo. The decade trend
// corroborates the log-moment flag; on disagreement the route abstains.
inline AsymptoticReport extremal_by_asymptotic(const HerglotzTriplet& f, double Ymax = 1e6) {
    if (!f.is_hyperbolic()) throw ClassificationError("asymptotic criterion needs a hyperbolic map");
    AsymptoticReport r;
    r.excess = excess_axis_integral(f, 2.0, Ymax);
    r.modulus = modulus_axis_integral(f, Ymax);
    auto& v = r.verdict;
    v.route = Route::AsymptoticIntegral;
    for (std::size_t k = 0; k < r.excess.Y.size(); ++k)
        v.add("I(1e" + std::to_string(k + 1) + ")", r.excess.value[k]);
    const bool flag_finite = log_moment(f.mu()).finite;
    const Trend t = r.excess.trend.trend;
    if (t == Trend::Converging && flag_finite) {
        v.verdict = Verdict::Extremal;
        v.add("I_extrapolated", r.excess.trend.extrapolated);
        if (r.modulus.trend.trend == Trend::Diverging)
            throw ContradictionError("asymptotic criterion: modulus integral diverges while the excess integral converges");
    } else if (t == Trend::Diverging && !flag_finite) {
        v.verdict = Verdict::NotExtremal;
    } else {
        v.note = std::string("decade trend ") + trend_name(t) + " vs log-moment flag " + (flag_finite ? "finite" : "infinite");
    }
    if (r.modulus.real_part.back() > r.modulus.real_part_bound * (1.0 + 1e-8) + 1e-12)
        throw ContradictionError("real-part integral exceeds |beta| + (pi/2) mu(R)");
    return r;
}

// --- kernel identities ----------------------------------------------------

// int_1^oo (1+t^2)/(t^2+y^2) dy = (1+t^2) arctan(t)/t
inline double kernel_F(double t) {
    const double a = std::abs(t);
    if (a < 1e-4) return (1.0 + t * t) * (1.0 - t * t / 3.0);
    return (1.0 + t * t) * std::atan(a) / a;
}

// int_1^oo (1+t^2)/((t^2+y^2) y) dy = (1+t^2) log(1+t^2)/(2t^2)
inline double kernel_G(double t) {
    const double t2 = t * t;
    if (std::abs(t) < 1e-4) return 0.5 * (1.0 + t2) * (1.0 - 0.5 * t2);
    return (1.0 + t2) * std::log1p(t2) / (2.0 * t2);
}

// Largest relative deviation of both closed forms from quadrature over y = 1/u.
inline double kernel_identity_error(const std::vector<double>& ts) {
    double worst = 0.0;
    quad::Options opt;
    opt.rel_tol = 1e-13;
    for (double t : ts) {
        const double t2 = t * t;
        const double a = std::max(std::abs(t), 1e-300);
        std::vector<double> br{0.0, 1.0};
        if (a < 1.0) br = {0.0, a, 1.0};
        // y = 1/u: dy = du/u^2, 1/(t^2 + y^2) = u^2/(t^2 u^2 + 1)
        const double F = quad::integrate<double>([&](double u) { return (1.0 + t2) / (t2 * u * u + 1.0); }, br, opt).value;
        const double G = quad::integrate<double>([&](double u) { return (1.0 + t2) * u / (t2 * u * u + 1.0); }, br, opt).value;
        worst = std::max({worst, std::abs(F - kernel_F(t)) / kernel_F(t), std::abs(G - kernel_G(t)) / kernel_G(t)});
    }
    return worst;
}

struct IntegralTReport {
    AxisIntegral trajectory;   // int_1^Y (Im f(iy) - alpha y)/y dy
    MomentValue abs_moment;
    bool flags_agree = true;
    double kernel_error = 0.0;
    double kernel_total = 0.0;  // int F(t) d mu(t) when finite
};

// int_1^oo (Im f(iy) - alpha y)/y dy = int F(t) d mu(t), finite iff int |t| d mu is.
inline IntegralTReport integral_t_equivalence_check(const HerglotzTriplet& f, double Ymax = 1e6) {
    if (!(f.alpha() >= 1.0)) throw ClassificationError("integral check needs alpha >= 1");
    IntegralTReport r;
    r.trajectory = excess_axis_integral(f, 1.0, Ymax);
    r.abs_moment = abs_moment(f.mu());
    r.kernel_error = kernel_identity_error({0.0, 1e-5, 0.01, 0.5, 1.0, -2.0, 3.0, 10.0, -100.0, 1e4});
    const Trend t = r.trajectory.trend.trend;
    if (t == Trend::Converging) r.flags_agree = r.abs_moment.finite;
    if (t == Trend::Diverging) r.flags_agree = !r.abs_moment.finite;
    if (r.abs_moment.finite && !f.mu().empty()) {
        Frame fr;
        fr.opt.rel_tol = 1e-11;
        r.kernel_total = f.mu().integrate<double>(
            [](const Abscissa& x) {
                if (x.central) return kernel_F(x.t);
                // (1 + 1/t^2) |t| arctan|t| for |t| > 1
                return (1.0 + x.inv_sq()) * std::exp(x.log_abs_t) * std::atan(std::exp(x.log_abs_t));
            },
            fr);
    }
    return r;
}

struct ShiftIntegralReport {
    AxisIntegral trajectory;   // int_1^Y (Im f(iy) - y)/y dy
    bool finite = false;       // by the |t|-moment flag
    double value = 0.0;        // extrapolated when finite
};

// A necessary condition for finite shift: int_1^oo (Im f(iy) - y)/y dy < oo.
inline ShiftIntegralReport finite_shift_necessary_integral(const HerglotzTriplet& f, double Ymax = 1e6) {
    if (!f.is_parabolic()) throw ClassificationError("shift integral needs a parabolic map");
    ShiftIntegralReport r;
    r.trajectory = excess_axis_integral(f, 1.0, Ymax);
    r.finite = abs_moment(f.mu()).finite;
    if (r.finite)
        r.value = r.trajectory.trend.trend == Trend::Converging ? r.trajectory.trend.extrapolated : r.trajectory.value.back();
    return r;
}

// --- divergence sandwich ----------------------------------------------------

struct SandwichReport {
    bool trivial = false;  // mu = 0: both sides vanish
    std::vector<std::size_t> n;
    std::vector<double> numerator;  // log(|f^{n+1}(z)| / alpha^{n+1})
    std::vector<double> integral;   // I_n
    std::vector<double> ratio;
    double C1 = 0.0, C2 = 0.0;      // min / max ratio over [N/2, N]
};

// (1+t^2)/t^2 log(alpha^{2n}(t^2+1)/(t^2+alpha^{2n})), q = alpha^{-2n}.
inline double sandwich_kernel(const Abscissa& x, double log_q) {
    const double one_minus_q = -std::expm1(log_q);
    if (x.central) {
        const double t2 = x.t * x.t;
        if (std::abs(x.t) < 1e-4) return (1.0 + t2) * (one_minus_q - 0.5 * t2 * one_minus_q * (1.0 + std::exp(log_q)));
        const double q = std::exp(log_q);
        return (1.0 + t2) / t2 * std::log1p(t2 * one_minus_q / (1.0 + t2 * q));
    }
    const double l2 = 2.0 * x.log_abs_t;
    const double diff = l2 + std::log1p(std::exp(-l2)) - detail::log1p_exp(l2 + log_q);
    return (1.0 + x.inv_sq()) * diff;
}

inline SandwichReport divergence_sandwich(const HerglotzTriplet& f, const UpperHalfPoint& z, std::size_t N) {
    if (!f.is_hyperbolic()) throw ClassificationError("divergence sandwich needs a hyperbolic map");
    if (N < 4) throw DomainError("divergence sandwich: N must be at least 4");
    SandwichReport r;
    if (f.mu().empty()) {
        r.trivial = true;
        return r;
    }
    const Orbit o = iterate(f, z, N + 1);
    const double la = std::log(f.alpha());
    for (std::size_t n = 1; n <= N; ++n) {
        const double log_q = -2.0 * static_cast<double>(n) * la;
        Frame fr;
        fr.opt.rel_tol = 1e-10;
        fr.add_log_abs_both(static_cast<double>(n) * la);
        const double I = f.mu().integrate<double>([&](const Abscissa& x) { return sandwich_kernel(x, log_q); }, fr);
        const double num = o.points[n + 1].log_abs() - static_cast<double>(n + 1) * la;
        r.n.push_back(n);
        r.numerator.push_back(num);
        r.integral.push_back(I);
        r.ratio.push_back(num / I);
    }
    const auto first = r.ratio.begin() + static_cast<std::ptrdiff_t>(N / 2 - 1);
    r.C1 = *std::min_element(first, r.ratio.end());
    r.C2 = *std::max_element(first, r.ratio.end());
    return r;
}

// --- quantitative lemmas ---------------------------------------------------

struct EstimateSum {
    double sum = 0.0;
    double closed_form = 0.0;
    double gap = 0.0;        // sum - closed form
    double tail_bound = 0.0; // bound on the omitted terms
    bool pass = false;
};

// sum_{n>=0} 1/(t^2 + A^2 alpha^{2n}) against log((t^2+A^2)/A^2)/(2 t^2 log alpha):
// 0 <= sum - closed <= 1/(t^2+A^2).
inline EstimateSum estimate_sum_check(double A, double alpha, double t, std::size_t terms = 1000) {
    if (!(A > 0) || !(alpha > 1) || t == 0.0 || terms < 1000)
        throw DomainError("estimate sum: need A > 0, alpha > 1, t != 0, terms >= 1000");
    EstimateSum r;
    const double t2 = t * t, A2 = A * A;
    const double la = std::log(alpha);
    for (std::size_t k = terms; k-- > 0;) {
        const double g = A2 * std::exp(2.0 * static_cast<double>(k) * la);
        r.sum += 1.0 / (t2 + g);
    }
    r.tail_bound = std::exp(-2.0 * static_cast<double>(terms) * la) / (A2 * (alpha * alpha - 1.0));
    r.closed_form = std::log1p(t2 / A2) / (2.0 * t2 * la);
    r.gap = r.sum - r.closed_form;
    const double slack = 1e-12 * std::max(r.sum, r.closed_form);
    r.pass = r.gap + r.tail_bound >= -slack && r.gap <= 1.0 / (t2 + A2) + slack;
    return r;
}

struct NontangentialCheck {
    double a = 0.0, b = 0.0, C = 0.0;
    std::size_t samples = 0, violations = 0;
    double min_ratio = 0.0, max_ratio = 0.0;  // of |t - z|^2 / (t^2 + y^2)
    bool pass = false;
};

// b is the smaller root of b^2 - (a^2+2) b + 1, computed without cancellation.
inline double nontangential_b(double a) { return 2.0 / (a * a + 2.0 + a * std::sqrt(a * a + 4.0)); }

inline double nontangential_C(double a) { return std::max(1.0 / nontangential_b(a), a * a + a + 1.0); }

inline NontangentialCheck nontangential_constant_check(double a, std::size_t samples = 10000, std::uint64_t seed = 1) {
    if (!(a > 0)) throw DomainError("non-tangential check: a must be positive");
    NontangentialCheck r;
    r.a = a;
    r.b = nontangential_b(a);
    r.C = nontangential_C(a);
    r.samples = samples;
    r.min_ratio = std::numeric_limits<double>::infinity();
    r.max_ratio = 0.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    const double slack = 1e-12;
    for (std::size_t k = 0; k < samples; ++k) {
        const double y = std::pow(10.0, -3.0 + 6.0 * U(rng));
        const double x = a * y * (2.0 * U(rng) - 1.0);
        double t;
        switch (k % 3) {
        case 0: t = x * (1.0 + 0.5 * (2.0 * U(rng) - 1.0)); break;                 // near Re z
        case 1: t = (U(rng) < 0.5 ? -1.0 : 1.0) * std::pow(10.0, -4.0 + 8.0 * U(rng)); break;
        default: t = y * (2.0 * a + 2.0) * (2.0 * U(rng) - 1.0); break;
        }
        const double lhs = (t - x) * (t - x) + y * y;
        const double ratio = lhs / (t * t + y * y);
        r.min_ratio = std::min(r.min_ratio, ratio);
        r.max_ratio = std::max(r.max_ratio, ratio);
        if (ratio < (1.0 / r.C) * (1.0 - slack) || ratio > r.C * (1.0 + slack)) ++r.violations;
    }
    r.pass = r.violations == 0;
    return r;
}

// F(alpha, n, y, t) = log(alpha^{2n}(t^2+y^2)/(t^2+alpha^{2n}y^2)), with
// r = t^2/y^2 and q = alpha^{-2n}: log1p(r(1-q)/(1+rq)).
inline double normalization_F(double alpha, int n, double y, double t) {
    const double r = (t / y) * (t / y);
    const double lq = -2.0 * n * std::log(alpha);
    const double q = std::exp(lq);
    if (!std::isfinite(r)) return -lq;
    return std::log1p(r * -std::expm1(lq) / (1.0 + r * q));
}

struct NormalizationCheck {
    std::size_t points = 0, violations = 0;
    double worst_lower = 0.0;  // min of ratio / lower bound
    double worst_upper = 0.0;  // max of ratio / upper bound
    bool pass = false;
};

inline NormalizationCheck normalization_bounds_check(double alpha, double eps, int n, double y,
                                                     const std::vector<double>& t_grid) {
    if (!(alpha > 1) || !(eps > 0) || !(y > 0) || n < 1)
        throw DomainError("normalization check: need alpha > 1, eps > 0, y > 0, n >= 1");
    NormalizationCheck r;
    r.worst_lower = std::numeric_limits<double>::infinity();
    const double lo = 1.0 / std::max(y * y, 1.0);
    const double hi = std::log(alpha + eps) / std::log(alpha) / std::min(y * y, 1.0);
    for (double t : t_grid) {
        if (t == 0.0) continue;  // removable; both sides vanish
        const double ratio = normalization_F(alpha + eps, n, y, t) / normalization_F(alpha, n, 1.0, t);
        ++r.points;
        r.worst_lower = std::min(r.worst_lower, ratio / lo);
        r.worst_upper = std::max(r.worst_upper, ratio / hi);
        if (ratio < lo * (1.0 - 1e-12) || ratio > hi * (1.0 + 1e-12)) ++r.violations;
    }
    r.pass = r.violations == 0;
    return r;
}

// --- lemma grids -------------------------------------------------------------

struct LemmaTally {
    std::size_t checks = 0, violations = 0;
    bool pass() const { return checks > 0 && violations == 0; }
};

struct LemmaSuite {
    LemmaTally estimate_sum, nontangential, normalization;
    bool pass() const { return estimate_sum.pass() && nontangential.pass() && normalization.pass(); }
};

inline constexpr double lemma_grid_AY[] = {0.2, 1.0, 3.0};
inline constexpr double lemma_grid_alpha[] = {1.5, 2.0, 3.0};
inline constexpr double lemma_grid_eps[] = {0.5, 1.0};
inline constexpr double lemma_grid_t[] = {-1e3, -10.0, -1.0, -0.01, 0.01, 1.0, 10.0, 1e3};
inline constexpr double lemma_grid_a[] = {0.5, 1.0, 10.0};
inline constexpr int lemma_grid_n[] = {1, 5, 20};

// Full grids, then `samples` random parameter draws per lemma (per a for the
// non-tangential check).
inline LemmaSuite run_lemma_suite(std::size_t samples = 10000, std::uint64_t seed = 7) {
    LemmaSuite s;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto log_uniform = [&](double lo, double hi) { return std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * U(rng)); };
    auto signed_t = [&] { return (U(rng) < 0.5 ? -1.0 : 1.0) * log_uniform(1e-3, 1e4); };
    auto tally = [](LemmaTally& t, bool ok) {
        ++t.checks;
        if (!ok) ++t.violations;
    };

    for (double A : lemma_grid_AY)
        for (double al : lemma_grid_alpha)
            for (double t : lemma_grid_t) tally(s.estimate_sum, estimate_sum_check(A, al, t).pass);
    for (std::size_t k = 0; k < samples; ++k)
        tally(s.estimate_sum, estimate_sum_check(log_uniform(0.1, 10.0), 1.05 + 3.95 * U(rng), signed_t()).pass);

    for (double a : lemma_grid_a) {
        const auto r = nontangential_constant_check(a, samples, seed + static_cast<std::uint64_t>(a * 1000));
        s.nontangential.checks += r.samples;
        s.nontangential.violations += r.violations;
    }

    const std::vector<double> ts(std::begin(lemma_grid_t), std::end(lemma_grid_t));
    for (double al : lemma_grid_alpha)
        for (double e : lemma_grid_eps)
            for (double y : lemma_grid_AY)
                for (int n : lemma_grid_n) {
                    const auto r = normalization_bounds_check(al, e, n, y, ts);
                    s.normalization.checks += r.points;
                    s.normalization.violations += r.violations;
                }
    for (std::size_t k = 0; k < samples; ++k) {
        const double al = 1.05 + 3.95 * U(rng);
        const double e = log_uniform(0.01, 2.0);
        const int n = 1 + static_cast<int>(30.0 * U(rng));
        const double y = log_uniform(0.05, 20.0);
        const auto r = normalization_bounds_check(al, e, n, y, {signed_t()});
        s.normalization.checks += r.points;
        s.normalization.violations += r.violations;
    }
    return s;
}

// --- hyperbolic distance rates ------------------------------------------------

struct DistanceRate {
    std::vector<double> sequence;
    LimitVerdict verdict;
    std::optional<double> predicted;
    bool agrees = true;
};

inline constexpr double distance_agreement = 1e-3;

// d_H(i, f^n(z)) - (n/2) log alpha against 1/2 log(|h(z)| |L(i)| / sin arg h(z)),
// with h(z) = lim f^n(z)/|f^n(i)|.
inline DistanceRate hyperbolic_distance_rate(const Orbit& oz, const Orbit& oi) {
    if (!(oz.alpha > 1.0)) throw ClassificationError("hyperbolic distance rate needs a hyperbolic map");
    DistanceRate r;
    const double half_la = 0.5 * std::log(oz.alpha);
    r.sequence.reserve(oz.points.size());
    for (std::size_t n = 0; n < oz.points.size(); ++n)
        r.sequence.push_back(distance_from_i(oz.points[n]) - static_cast<double>(n) * half_la);
    r.verdict = detect_limit(r.sequence);
    const auto L = hyperbolic_rate_limit(oi);
    if (L.tag == LimitTag::Finite) {
        const std::size_t N = std::min(oz.steps(), oi.steps());
        const double log_abs_h = oz.points[N].log_abs() - oi.points[N].log_abs();
        const double s = std::sin(oz.points[N].arg());
        r.predicted = 0.5 * (log_abs_h + std::log(std::abs(L.value)) - std::log(s));
    }
    if (r.verdict.finite() && r.predicted)
        r.agrees = std::abs(r.verdict.value - *r.predicted) <= distance_agreement;
    return r;
}

inline DistanceRate hyperbolic_distance_rate(const HerglotzTriplet& f, const UpperHalfPoint& z, std::size_t N) {
    const Orbit oz = iterate(f, z, N);
    if (z.re() == 0.0 && z.im() == 1.0) return hyperbolic_distance_rate(oz, oz);
    return hyperbolic_distance_rate(oz, iterate(f, UpperHalfPoint(0.0, 1.0), N));
}

// d_H(i, f^n(z)) - log n against log(|L|/sqrt(I)), n >= 1.
inline DistanceRate parabolic_distance_rate(const Orbit& o) {
    if (o.alpha != 1.0) throw ClassificationError("parabolic distance rate needs a parabolic map");
    DistanceRate r;
    r.sequence.reserve(o.steps());
    for (std::size_t n = 1; n <= o.steps(); ++n)
        r.sequence.push_back(distance_from_i(o.points[n]) - std::log(static_cast<double>(n)));
    r.verdict = detect_limit(r.sequence);
    try {
        const auto shift = shift_classification(o);
        const auto L = parabolic_rate_limit(o);
        if (shift.finite && L.finite()) r.predicted = std::log(std::abs(L.value)) - 0.5 * std::log(shift.I);
    } catch (const Undetermined&) {
    }
    if (r.verdict.finite() && r.predicted)
        r.agrees = std::abs(r.verdict.value - *r.predicted) <= distance_agreement;
    return r;
}

inline DistanceRate parabolic_distance_rate(const HerglotzTriplet& f, const UpperHalfPoint& z, std::size_t N) {
    return parabolic_distance_rate(iterate(f, z, N));
}

// k -> d_H(i, w_k) - d_H(i, h(w_k)) along w_k = f^k(i), with h = h_n and
// h_n(w_k) = f^{n+k}(i)/|f^n(i)|; n = 3N/4, k <= N/4.
inline std::vector<double> orbit_distance_defects(const Orbit& o) {
    const std::size_t N = o.steps();
    const std::size_t K = N / 4, n = N - K;
    const double lan = std::log(std::abs(o.points[n].m));
    std::vector<double> d;
    d.reserve(K + 1);
    for (std::size_t k = 0; k <= K; ++k) {
        const ScaledPoint& far = o.points[n + k];
        const ScaledPoint hw(far.m / std::exp(lan), far.e - o.points[n].e);
        d.push_back(distance_defect(o.points[k], hw));
    }
    return d;
}

// --- consolidation -----------------------------------------------------------

struct RateConfig {
    std::size_t hyperbolic_budget = hpdyn::hyperbolic_budget;
    std::size_t parabolic_budget = hpdyn::parabolic_budget;
    std::size_t koenigs_depth = 200;
    double Ymax = 1e6;
    cplx tau{1.0, 0.0};
    double p = 1.0;
    UpperHalfPoint base{0.0, 1.0};
};

struct RateReport {
    MapClass map_class = MapClass::Hyperbolic;
    std::optional<Regime> regime;   // unset when the step is undetermined
    double alpha = 1.0;
    Orbit orbit;                    // orbit of the base point
    std::optional<StepVerdict> step;
    std::optional<double> b;
    std::optional<ShiftVerdict> shift;
    LimitTag limit_tag = LimitTag::Undetermined;
    cplx limit{};                   // L(z), real for parabolic maps
    AngleResult angle;
    std::vector<CriterionVerdict> routes;
    Verdict consensus = Verdict::Undetermined;
    std::vector<double> distance_sequence;
    std::vector<double> defect_sequence;
    DiscProducts disc;
};

namespace detail {

inline Verdict join(const std::vector<CriterionVerdict>& routes) {
    Verdict c = Verdict::Undetermined;
    for (const auto& r : routes) {
        if (r.verdict == Verdict::Undetermined || r.verdict == Verdict::NotApplicable) continue;
        if (c == Verdict::Undetermined) {
            c = r.verdict;
        } else if (c != r.verdict) {
            std::string msg = "routes disagree:";
            for (const auto& q : routes) msg += std::string(" ") + route_name(q.route) + "=" + verdict_name(q.verdict);
            throw ContradictionError(msg);
        }
    }
    return c;
}

inline void hyperbolic_routes(const HerglotzTriplet& f, const RateConfig& cfg, RateReport& rep) {
    const Orbit& o = rep.orbit;
    const bool at_i = cfg.base.re() == 0.0 && cfg.base.im() == 1.0;
    const Orbit oi_storage = at_i ? Orbit{} : iterate(f, UpperHalfPoint(0.0, 1.0), cfg.hyperbolic_budget);
    const Orbit& oi = at_i ? o : oi_storage;

    const auto L = hyperbolic_rate_limit(o);
    rep.limit_tag = L.tag;
    rep.limit = L.value;
    rep.angle = orbit_angle(o);
    {
        CriterionVerdict v;
        v.route = Route::OrbitLimit;
        v.verdict = L.tag == LimitTag::Finite ? Verdict::Extremal
                    : L.tag == LimitTag::Diverging ? Verdict::NotExtremal
                                                   : Verdict::Undetermined;
        v.add("log_y_ratio_last", o.log_y_ratio.back()).add("block_ratio", L.log_y_ratio.evidence.ratio);
        if (L.tag == LimitTag::Finite) v.add("L_re", L.value.real()).add("L_im", L.value.imag());
        rep.routes.push_back(v);
    }
    rep.routes.push_back(extremal_by_log_moment(f));
    {
        const auto h = KoenigsApprox::valiron(f, cfg.koenigs_depth);
        const auto c = conformality_at_infinity(h);
        CriterionVerdict v;
        v.route = Route::Conformality;
        v.verdict = c.verdict == Conformality::Conformal      ? Verdict::Extremal
                    : c.verdict == Conformality::NotConformal ? Verdict::NotExtremal
                                                              : Verdict::Undetermined;
        v.add("cone_inf_last", c.cone_inf.back());
        if (c.verdict == Conformality::Conformal) v.add("derivative_re", c.derivative.real()).add("derivative_im", c.derivative.imag());
        v.note = std::string("axis probe ") + conformality_name(c.axis_probe) + ", cone probe " + conformality_name(c.cone_probe);
        rep.routes.push_back(v);
    }
    rep.routes.push_back(extremal_by_asymptotic(f, cfg.Ymax).verdict);
    {
        rep.defect_sequence = orbit_distance_defects(oi);
        const auto lv = detect_limit(rep.defect_sequence);
        CriterionVerdict v;
        v.route = Route::DistanceDefect;
        v.verdict = from_limit(lv, +1);
        v.add("defect_last", rep.defect_sequence.back());
        rep.routes.push_back(v);
    }
    {
        const auto d = hyperbolic_distance_rate(o, oi);
        rep.distance_sequence = d.sequence;
        CriterionVerdict v;
        v.route = Route::HyperbolicDistance;
        v.verdict = from_limit(d.verdict, +1);
        v.add("last", d.sequence.back());
        if (d.verdict.finite()) v.add("limit", d.verdict.value);
        if (d.predicted) v.add("predicted", *d.predicted);
        if (!d.agrees)
            throw ContradictionError("hyperbolic distance limit " + std::to_string(d.verdict.value) +
                                     " differs from the closed form " + std::to_string(*d.predicted));
        rep.routes.push_back(v);
    }
    rep.disc = disc_rate_products(oi, Regime::Hyperbolic);
    {
        CriterionVerdict v;
        v.route = Route::DiscProducts;
        v.verdict = rep.disc.verdict;
        v.add("product_last", rep.disc.product.back()).add("log_depth_last", rep.disc.log_depth.back());
        rep.routes.push_back(v);
    }
    {
        const auto nr = norm_growth_report(oi, cfg.p, Space::Hardy, Regime::Hyperbolic);
        CriterionVerdict v;
        v.route = Route::NormSandwich;
        v.verdict = nr.verdict;
        v.add("log_normalized_lower_last", nr.log_norm_lower.back());
        rep.routes.push_back(v);
    }
}

inline void parabolic_routes(const HerglotzTriplet& f, const RateConfig& cfg, RateReport& rep) {
    const Orbit& o = rep.orbit;
    const bool at_i = cfg.base.re() == 0.0 && cfg.base.im() == 1.0;
    rep.angle = orbit_angle(o);
    std::optional<ShiftVerdict> shift;
    try {
        shift = shift_classification(o);
    } catch (const Undetermined&) {
    }
    rep.shift = shift;
    const auto L = parabolic_rate_limit(o);
    rep.limit_tag = L.tag;
    if (L.finite()) rep.limit = L.value;
    {
        CriterionVerdict v;
        v.route = Route::OrbitLimit;
        if (L.finite() && L.value != 0.0)
            v.verdict = Verdict::Extremal;
        else if (L.diverging())
            v.verdict = Verdict::NotExtremal;
        if (shift) {
            v.add("shift_finite", shift->finite ? 1.0 : 0.0);
            if (shift->finite) v.add("I", shift->I);
            // finite shift is equivalent to extremal rate here
            const Verdict sv = shift->finite ? Verdict::Extremal : Verdict::NotExtremal;
            if (v.verdict != Verdict::Undetermined && v.verdict != sv)
                throw ContradictionError("parabolic rate limit and shift classification disagree");
            v.verdict = sv;
        }
        if (L.finite()) v.add("L", L.value);
        rep.routes.push_back(v);
    }
    {
        const auto d = parabolic_distance_rate(o);
        rep.distance_sequence = d.sequence;
        CriterionVerdict v;
        v.route = Route::HyperbolicDistance;
        v.verdict = from_limit(d.verdict, +1);
        v.add("last", d.sequence.back());
        if (d.verdict.finite()) v.add("limit", d.verdict.value);
        if (d.predicted) v.add("predicted", *d.predicted);
        if (!d.agrees)
            throw ContradictionError("parabolic distance limit " + std::to_string(d.verdict.value) +
                                     " differs from log(|L|/sqrt(I)) = " + std::to_string(*d.predicted));
        rep.routes.push_back(v);
    }
    {
        // only necessity is known: an infinite integral rules out extremal rate
        const auto s = finite_shift_necessary_integral(f, cfg.Ymax);
        CriterionVerdict v;
        v.route = Route::AsymptoticIntegral;
        v.verdict = s.finite ? Verdict::Undetermined : Verdict::NotExtremal;
        v.add("integral_last", s.trajectory.value.back());
        if (s.finite) v.add("integral", s.value);
        if (s.finite) v.note = "finite integral is necessary but not sufficient";
        rep.routes.push_back(v);
    }
    const Orbit oi_storage = at_i ? Orbit{} : iterate(f, UpperHalfPoint(0.0, 1.0), cfg.parabolic_budget);
    const Orbit& oi = at_i ? o : oi_storage;
    rep.disc = disc_rate_products(oi, Regime::ParabolicPositive);
    {
        CriterionVerdict v;
        v.route = Route::DiscProducts;
        v.verdict = rep.disc.verdict;
        v.add("product_last", rep.disc.product.back()).add("log_depth_last", rep.disc.log_depth.back());
        rep.routes.push_back(v);
    }
    {
        const auto nr = norm_growth_report(oi, cfg.p, Space::Hardy, Regime::ParabolicPositive);
        CriterionVerdict v;
        v.route = Route::NormSandwich;
        v.verdict = nr.verdict;
        v.add("log_normalized_lower_last", nr.log_norm_lower.back());
        rep.routes.push_back(v);
    }
}

} // namespace detail

inline RateReport consolidate(const HerglotzTriplet& f, const RateConfig& cfg = {}) {
    require_dw_infinity(f);
    RateReport rep;
    rep.map_class = classify(f);
    rep.alpha = f.alpha();
    if (f.is_hyperbolic()) {
        rep.regime = Regime::Hyperbolic;
        rep.orbit = iterate(f, cfg.base, cfg.hyperbolic_budget);
        detail::hyperbolic_routes(f, cfg, rep);
        rep.consensus = detail::join(rep.routes);
        return rep;
    }
    rep.orbit = iterate(f, cfg.base, cfg.parabolic_budget);
    try {
        rep.step = hyperbolic_step(rep.orbit);
    } catch (const Undetermined&) {
        return rep;
    }
    if (!rep.step->positive) {
        rep.regime = Regime::ParabolicZero;
        rep.b = 0.0;
        for (Route r : {Route::OrbitLimit, Route::HyperbolicDistance, Route::AsymptoticIntegral, Route::DiscProducts,
                        Route::NormSandwich}) {
            CriterionVerdict v;
            v.route = r;
            v.verdict = Verdict::NotApplicable;
            v.note = "zero hyperbolic step";
            rep.routes.push_back(v);
        }
        rep.consensus = Verdict::NotApplicable;
        return rep;
    }
    rep.regime = Regime::ParabolicPositive;
    rep.b = drift_coefficient(rep.orbit).b;
    detail::parabolic_routes(f, cfg, rep);
    rep.consensus = detail::join(rep.routes);
    return rep;
}

} // namespace hpdyn
