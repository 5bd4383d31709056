#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "herglotz.hpp"
#include "measure.hpp"
#include "verdict.hpp"

namespace hpdyn {

struct KnownValue {
    std::string name;
    double value;
    std::string oracle;
};

// Ground truth for one test map. Labels name the oracle they come from.
struct CatalogEntry {
    std::string name;
    std::string formula;
    HerglotzTriplet map;
    MapClass map_class;
    std::optional<Regime> regime;
    std::optional<bool> finite_shift;
    Verdict extremal;
    std::string oracle;
    std::vector<KnownValue> known;
    std::size_t disc_budget;
};

namespace detail {

inline std::vector<CatalogEntry> build_catalog() {
    using D = DensityComponent;
    using M = FiniteMeasure;
    const auto H = Regime::Hyperbolic;
    const auto P = Regime::ParabolicPositive;
    const auto Z = Regime::ParabolicZero;
    const auto E = Verdict::Extremal;
    const auto N = Verdict::NotExtremal;
    const auto NA = Verdict::NotApplicable;
    std::vector<CatalogEntry> c;
    auto add = [&](std::string name, std::string formula, HerglotzTriplet f, std::optional<Regime> rg,
                   std::optional<bool> shift, Verdict v, std::string oracle, std::vector<KnownValue> known,
                   std::size_t budget) {
        const MapClass mc = classify(f);
        c.push_back({std::move(name), std::move(formula), std::move(f), mc, rg, shift, v, std::move(oracle),
                     std::move(known), budget});
    };

    add("affine2", "2z", HerglotzTriplet(2, 0, M::zero()), H, false, E, "closed form: f^n(z) = 2^n z",
        {{"L_re", 0, "f^n(i)/2^n = i"}, {"L_im", 1, "f^n(i)/2^n = i"}, {"distance_limit", 0, "d_H(i, 2^n i) = (n/2) log 2"}},
        1000);
    add("affine2shift", "2z + 1", HerglotzTriplet(2, 1, M::zero()), H, false, E,
        "closed form: f^n(z) = 2^n (z+1) - 1",
        {{"L_re", 1, "f^n(i)/2^n -> 1+i"}, {"L_im", 1, "f^n(i)/2^n -> 1+i"},
         {"conformal_derivative", 0.70710678118654752, "h(z) = (z+1)/sqrt2"}},
        1000);
    add("atom2", "2z + 0.5(1+z)/(1-z)", HerglotzTriplet(2, 0, M::atom(1, 0.5)), H, false, E,
        "finite log moment (atoms)", {{"log_moment", 0.5 * 0.69314718055994531, "0.5 log 2"}}, 1000);
    add("atoms2", "2z + atoms {(-2, 1), (3, 2)}", HerglotzTriplet(2, 0, M({{-2, 1}, {3, 2}}, {})), H, false, E,
        "finite log moment (atoms)", {{"abs_moment", 8, "2 + 6"}}, 1000);
    add("origin2", "2z - 1/z", HerglotzTriplet(2, 0, M::atom(0, 1)), H, false, E,
        "closed form excess 1/y",
        {{"asymptotic_integral", 0.5, "int_1^oo (1/y)/y^2 dy"}, {"excess_kernel_y2", 0.25, "(1+0)/(0+4)"}}, 1000);
    add("gaussian2", "2z + gaussian(1)", HerglotzTriplet(2, 0, M::density(D::gaussian(1))), H, false, E,
        "finite log moment (family flag)", {}, 1000);
    add("uniform2", "2z + compact_uniform[0,1](1)", HerglotzTriplet(2, 0, M::density(D::compact_uniform(1, 0, 1))), H,
        false, E, "finite log moment (compact support)", {{"abs_moment", 0.5, "int_0^1 t dt"}}, 1000);
    add("cauchy2", "2z + i", HerglotzTriplet(2, 0, M::density(D::cauchy(1))), H, false, E,
        "closed form: cauchy(1) integral is identically i, f^n(i) = (2^{n+1} - 1) i",
        {{"L_re", 0, "closed form"}, {"L_im", 2, "closed form"}}, 1000);
    add("osq2", "2z + one_sided_quadratic(1)", HerglotzTriplet(2, 0, M::density(D::one_sided_quadratic(1))), H, false,
        E, "finite log moment, infinite |t| moment (family flags)", {}, 1000);
    add("logtail2", "2z + log_tail(1)", HerglotzTriplet(2, 0, M::density(D::log_tail(1))), H, false, N,
        "infinite log moment (family flag)", {}, 1000);
    add("logtail2_onesided", "2z + log_tail(1) on t > 0", HerglotzTriplet(2, 0, M::density(D::log_tail(1, true))), H,
        false, N, "infinite log moment (family flag)", {}, 1000);

    add("translate1", "z + 1", HerglotzTriplet(1, 1, M::zero()), P, true, E, "closed form: f^n(z) = z + n",
        {{"b", 1, "closed form"}, {"I", 1, "closed form"}, {"L", 1, "closed form"}, {"distance_limit", 0, "d_H(i, n+i) - log n -> 0"}},
        10000);
    add("translate2_atom", "z + 2 - 0.1/z", HerglotzTriplet(1, 2, M::atom(0, 0.1)), P, true, E,
        "finite |t| moment; orbit simulation", {{"L", 2, "x_n/n -> beta"}, {"shift_integral", 0.1, "int_1^oo 0.1/y^2 dy"}},
        10000);
    add("translate1_atom", "z + 1 - 0.1/z", HerglotzTriplet(1, 1, M::atom(0, 0.1)), P, true, E,
        "finite |t| moment; orbit simulation", {{"L", 1, "x_n/n -> beta"}, {"shift_integral", 0.1, "int_1^oo 0.1/y^2 dy"}},
        10000);
    add("onesided_heavy", "z + 1 + one_sided_quadratic(1)",
        HerglotzTriplet(1, 1, M::density(D::one_sided_quadratic(1))), P, false, N,
        "infinite |t| moment (family flag) rules out finite shift", {}, 10000);
    add("vertical", "z + i", HerglotzTriplet(1, 0, M::density(D::cauchy(1))), Z, false, NA,
        "closed form: f^n(z) = z + ni, d_H(z_n, z_{n+1}) -> 0", {}, 4000);
    add("sqrtgrowth", "z - 1/z", HerglotzTriplet(1, 0, M::atom(0, 1)), Z, false, NA,
        "recurrence y_{n+1} = y_n + 1/y_n on the imaginary axis", {}, 4000000);
    add("contraction", "z/2", HerglotzTriplet(0.5, 0, M::zero()), std::nullopt, std::nullopt, NA,
        "alpha < 1: Denjoy-Wolff point 0", {}, 0);
    return c;
}

} // namespace detail

inline const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> c = detail::build_catalog();
    return c;
}

inline const CatalogEntry& catalog_entry(const std::string& name) {
    for (const auto& e : catalog())
        if (e.name == name) return e;
    throw DomainError("unknown catalog map '" + name + "'");
}

inline double known_value(const CatalogEntry& e, const std::string& key) {
    for (const auto& k : e.known)
        if (k.name == key) return k.value;
    throw DomainError("catalog map '" + e.name + "' has no known value '" + key + "'");
}

} // namespace hpdyn
